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

#ifndef BEQ_PROBLEM_HPP_
#define BEQ_PROBLEM_HPP_

#include <optional>
#include <string>

#include "beq/bifunctions.hpp"
#include "beq/core.hpp"

namespace beq {

// Bilevel equilibrium problem: find x in S_f with g(x, y) >= 0 for all y in
// S_f, where S_f = { u in K : f(u, z) >= 0 for all z in K }.
struct Problem {
  std::string name;
  ConvexSet set;          // K
  BifunctionPtr lower;    // f
  BifunctionPtr upper;    // g
  std::optional<ConvexSet> lower_solutions;  // S_f, when known
  std::optional<Vector> reference;           // solution of the bilevel problem
  Vector x0;
  Vector x1;

  Eigen::Index dim() const { return set.dim(); }
};

}  // namespace beq

#endif  // BEQ_PROBLEM_HPP_
