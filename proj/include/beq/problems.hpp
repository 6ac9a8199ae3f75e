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

#ifndef BEQ_PROBLEMS_HPP_
#define BEQ_PROBLEMS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "beq/problem.hpp"

namespace beq {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The 5-dimensional test instance: K = R^5, g(x,y) = <Ax + By, y - x>,
// f(x,y) = phi(y) - phi(x) with phi = max{1, |.|}, S_f = unit ball,
// x0 = x1 = (1,...,1). The reference point comes from reference_solution.
Problem paper_r5();
const Matrix& paper_r5_a();
const Matrix& paper_r5_b();

struct ReferenceOptions {
  double tol = 1e-12;
  long budget = 200000;
  int certificate_samples = 256;
  std::uint64_t seed = 0;
};

// Solves the upper-level problem over S_f by the extragradient method on
// y -> diagonal subgradient of g, projected onto S_f, until the natural
// residual |x - P(x - F(x))| <= tol. The result is certified by
// g(x, y) >= -10 tol on sampled y in S_f. Throws OracleError otherwise.
Vector reference_solution(const Problem& problem, const ReferenceOptions& options = {});

// phi = (1/2)|x - c|^2 so S_f = {c}; g affine with A - B = M M^T + I.
Problem quadratic_hierarchical(Eigen::Index dim, std::uint64_t seed);

// K = [-1, 1], f from phi(x) = x^2, g(x, y) = (x - 0.5)(y - x).
Problem toy_1d();

struct ProblemInfo {
  std::string name;
  std::string description;
};

const std::vector<ProblemInfo>& registered_problems();
// Looks up a registered problem. quadratic-hierarchical takes `dim` and `seed`.
Problem make_problem(const std::string& name, Eigen::Index dim = 5,
                     std::uint64_t seed = 0);

struct ProblemCheck {
  bool passed = true;
  std::vector<std::string> failures;
};

// Monotonicity of f and g on sampled pairs, x0, x1 in K and, with a
// reference point, ep_residual <= 1e-6 and g(x_ref, y) >= -1e-6 on S_f.
ProblemCheck check_problem(const Problem& problem, int samples = 256,
                           std::uint64_t seed = 0);

}  // namespace beq

#endif  // BEQ_PROBLEMS_HPP_
