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

#ifndef BEQ_ALGORITHMS_HPP_
#define BEQ_ALGORITHMS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beq/problem.hpp"
#include "beq/resolvents.hpp"
#include "beq/trace.hpp"

namespace beq {

using SequenceFn = std::function<double(long)>;

// Upper bound for the inertial parameter, (sqrt(3) - 1) / 4 minus a margin.
inline constexpr double kAlphaMax = 0.18301270189221933 - 1e-9;

// Parameter sequences indexed from n = 1.
class Schedule {
 public:
  Schedule(SequenceFn lambda, SequenceFn beta, SequenceFn alpha,
           bool clamp_alpha = true);

  static Schedule constant(double lambda, double beta, double alpha,
                           bool clamp_alpha = true);

  // Throw std::domain_error for values outside the admissible range.
  double lambda(long n) const;  // > 0
  double beta(long n) const;    // >= 0
  double alpha(long n) const;   // effective (clamped when enabled)
  double raw_alpha(long n) const;
  bool clamp_alpha() const { return clamp_alpha_; }

  const SequenceFn& lambda_fn() const { return lambda_; }
  const SequenceFn& beta_fn() const { return beta_; }
  const SequenceFn& alpha_fn() const { return alpha_; }

 private:
  SequenceFn lambda_;
  SequenceFn beta_;
  SequenceFn alpha_;
  bool clamp_alpha_;
};

double clamp_alpha(double raw);

struct SolverState {
  long n = 1;
  Vector x_prev;
  Vector x_curr;
  Vector z_curr;
  Vector y_curr;
};

// n = 1, x_prev = x0, x_curr = z_curr = y_curr = x1.
SolverState initial_state(const Problem& problem);

enum class Method { kIpsa, kPsm, kInertialProx, kPpmPenalization, kRppm };

std::string to_string(Method m);
// Accepts ipsa, psm, inertial_prox, ppm_penalization, rppm.
std::optional<Method> parse_method(const std::string& name);
const std::vector<Method>& all_methods();

// y = x_n + a (x_n - x_{n-1}); z = J^g(y); x_{n+1} = J^{beta f}(z)
SolverState ipsa_step(const Problem& problem, const SolverState& state,
                      const Schedule& schedule, const ResolventOptions& inner = {});
// ipsa_step with y = x_n
SolverState psm_step(const Problem& problem, const SolverState& state,
                     const Schedule& schedule, const ResolventOptions& inner = {});
// x_{n+1} = J^{beta f + g}(y)
SolverState inertial_prox_step(const Problem& problem, const SolverState& state,
                               const Schedule& schedule,
                               const ResolventOptions& inner = {});
// x_{n+1} = J^{beta f + g}(x_n)
SolverState ppm_penalization_step(const Problem& problem, const SolverState& state,
                                  const Schedule& schedule,
                                  const ResolventOptions& inner = {});
// x_{n+1} = J^{f + beta g}(x_n)
SolverState rppm_step(const Problem& problem, const SolverState& state,
                      const Schedule& schedule, const ResolventOptions& inner = {});

SolverState step(Method method, const Problem& problem, const SolverState& state,
                 const Schedule& schedule, const ResolventOptions& inner = {});

// Verdicts for the weak-convergence hypotheses (sum lambda = inf,
// sum lambda^2 < inf, liminf lambda beta > 0, alpha admissible) and the
// strong-convergence ones (sum lambda = inf, lambda -> 0, beta -> inf,
// liminf lambda beta > 0, alpha admissible).
struct RegimeReport {
  bool weak = false;
  bool strong = false;
  std::vector<std::string> weak_violations;
  std::vector<std::string> strong_violations;

  bool any() const { return weak || strong; }
  // Union of both violation lists, without duplicates.
  std::vector<std::string> violations() const;
  std::string summary() const;
};

// Trend tests on doubling windows over [1, horizon]; horizon >= 100.
RegimeReport validate_regime(const Schedule& schedule, long horizon = 4096);

struct RunOptions {
  long budget = 1000;
  double step_tol = 0.0;      // stop when step_norm < step_tol ...
  double residual_tol = 0.0;  // ... and ep_residual < residual_tol
  bool record_residual = true;
  ResolventOptions inner{};
  std::uint64_t seed = 0;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, Trace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trace& partial() const { return partial_; }

 private:
  Trace partial_;
};

// Runs `budget` steps (or fewer when the stop rule fires). The first record
// is the initial point x_1. Throws SolverFailure with the partial trace.
Trace run(const Problem& problem, Method method, const Schedule& schedule,
          const RunOptions& options);

}  // namespace beq

#endif  // BEQ_ALGORITHMS_HPP_
