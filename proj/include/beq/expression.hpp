// Copyright 2026 The beq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BEQ_EXPRESSION_HPP_
#define BEQ_EXPRESSION_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "beq/algorithms.hpp"

namespace beq {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Arithmetic over the variable n:
//   + - * / ^ (right associative), unary minus, parentheses,
//   log sqrt exp abs (one argument), min max (two or more), pi e.
class Expression {
 public:
  struct Node;

  // Throws ExpressionError with the offending position.
  static Expression parse(const std::string& text);

  double operator()(double n) const;
  const std::string& text() const { return text_; }
  SequenceFn as_sequence() const;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}
  std::string text_;
  std::shared_ptr<const Node> root_;
};

Schedule schedule_from_expressions(const std::string& lambda, const std::string& beta,
                                   const std::string& alpha, bool clamp_alpha = true);

}  // namespace beq

#endif  // BEQ_EXPRESSION_HPP_
