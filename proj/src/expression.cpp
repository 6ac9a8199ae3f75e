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

#include "beq/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace beq {

struct Expression::Node {
  enum class Kind { kNumber, kVariable, kUnaryMinus, kBinary, kCall };
  Kind kind;
  double number = 0.0;
  char op = 0;
  std::string func;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double n) const {
    switch (kind) {
      case Kind::kNumber: return number;
      case Kind::kVariable: return n;
      case Kind::kUnaryMinus: return -args[0]->eval(n);
      case Kind::kBinary: {
        const double a = args[0]->eval(n);
        const double b = args[1]->eval(n);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
        }
        break;
      }
      case Kind::kCall: {
        if (func == "log") return std::log(args[0]->eval(n));
        if (func == "sqrt") return std::sqrt(args[0]->eval(n));
        if (func == "exp") return std::exp(args[0]->eval(n));
        if (func == "abs") return std::abs(args[0]->eval(n));
        double acc = args[0]->eval(n);
        for (std::size_t i = 1; i < args.size(); ++i) {
          const double v = args[i]->eval(n);
          acc = func == "min" ? std::min(acc, v) : std::max(acc, v);
        }
        return acc;
      }
    }
    return std::nan("");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr leaf(double v) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = Kind::kNumber;
  node->number = v;
  return node;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression \"" + s_ + "\": " + what + " at position " +
                          std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = Kind::kBinary;
    node->op = op;
    node->args = {std::move(a), std::move(b)};
    return node;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) {
        left = binary('+', left, term());
      } else if (accept('-')) {
        left = binary('-', left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) {
        left = binary('*', left, unary());
      } else if (accept('/')) {
        left = binary('/', left, unary());
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto node = std::make_shared<Expression::Node>();
      node->kind = Kind::kUnaryMinus;
      node->args = {unary()};
      return node;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return leaf(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "n") {
        auto node = std::make_shared<Expression::Node>();
        node->kind = Kind::kVariable;
        return node;
      }
      if (name == "pi") return leaf(std::numbers::pi);
      if (name == "e") return leaf(std::numbers::e);
      return call(name, start);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr call(const std::string& name, std::size_t start) {
    const bool unary_fn = name == "log" || name == "sqrt" || name == "exp" || name == "abs";
    const bool nary_fn = name == "min" || name == "max";
    if (!unary_fn && !nary_fn) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!accept('(')) fail("expected '(' after " + name);
    auto node = std::make_shared<Expression::Node>();
    node->kind = Kind::kCall;
    node->func = name;
    node->args.push_back(expr());
    while (accept(',')) node->args.push_back(expr());
    if (!accept(')')) fail("expected ')'");
    if (unary_fn && node->args.size() != 1) fail(name + " takes one argument");
    if (nary_fn && node->args.size() < 2) fail(name + " takes at least two arguments");
    return node;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  return Expression(text, Parser(text).parse());
}

double Expression::operator()(double n) const { return root_->eval(n); }

SequenceFn Expression::as_sequence() const {
  return [root = root_](long n) { return root->eval(static_cast<double>(n)); };
}

Schedule schedule_from_expressions(const std::string& lambda, const std::string& beta,
                                   const std::string& alpha, bool clamp_alpha) {
  return Schedule(Expression::parse(lambda).as_sequence(),
                  Expression::parse(beta).as_sequence(),
                  Expression::parse(alpha).as_sequence(), clamp_alpha);
}

}  // namespace beq
