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

#ifndef BEQ_DIAGNOSTICS_HPP_
#define BEQ_DIAGNOSTICS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "beq/bifunctions.hpp"
#include "beq/core.hpp"
#include "beq/trace.hpp"

namespace beq {

struct SupOptions {
  int starts = 8;
  int steps = 0;  // ellipsoid steps per start; 0 picks 500 + 80 d (d + 1)
  std::uint64_t seed = 0;
  double radius = 0.0;  // search radius; 0 picks 10 (1 + |anchor|)
};

struct SupEstimate {
  double value;     // best value found at a point of K (+inf when unbounded)
  Vector argmax;    // that point
  bool unbounded;
};

// Estimates sup over K of a concave function h with supergradient `grad`.
// Each start runs a central-cut ellipsoid method (projection cuts keep the
// centers honest for K). On unbounded K the search radius is grown tenfold
// three times and linear-or-faster growth of the best value reports +inf.
SupEstimate estimate_sup(const std::function<double(const Vector&)>& h,
                         const std::function<Vector(const Vector&)>& grad,
                         const ConvexSet& set, const Vector& anchor,
                         const SupOptions& options = {});

// max(0, sup_{y in K} -f(x, y))
double ep_residual(const Bifunction& f, const ConvexSet& set, const Vector& x,
                   std::uint64_t seed = 0);
// max(0, sup_{y in K} f(y, x))
double minty_residual(const Bifunction& f, const ConvexSet& set, const Vector& x,
                      std::uint64_t seed = 0);

// sup_{y in K} <u, y> + f(y, x). Closed form for difference bifunctions on the
// whole space (phi*(u) + phi(x)) and for f == 0 (support function of K).
std::optional<double> fitzpatrick_closed_form(const Bifunction& f,
                                              const ConvexSet& set,
                                              const Vector& x, const Vector& u);
double fitzpatrick_estimate(const Bifunction& f, const ConvexSet& set,
                            const Vector& x, const Vector& u,
                            std::uint64_t seed = 0);
double fitzpatrick(const Bifunction& f, const ConvexSet& set, const Vector& x,
                   const Vector& u, std::uint64_t seed = 0);

// lambda beta [F_f(u, 2p / beta) - sigma_{S_f}(2p / beta)]; +inf when the
// Fitzpatrick value is infinite.
double geometric_condition_summand(const Bifunction& f, const ConvexSet& set,
                                   const ConvexSet& lower_solutions,
                                   const Vector& u, const Vector& p,
                                   double lambda, double beta,
                                   std::uint64_t seed = 0);

// Nearest point of N_{S_f}(u) to -(diagonal subgradient of g at u).
Vector monitor_normal_vector(const Bifunction& g, const ConvexSet& lower_solutions,
                             const Vector& u);

class GeometricMonitor {
 public:
  GeometricMonitor(BifunctionPtr f, ConvexSet set, ConvexSet lower_solutions,
                   Vector u, Vector p, std::uint64_t seed = 0);

  // Adds one summand and returns it.
  double add(double lambda, double beta);

  double partial_sum() const { return partial_sum_; }
  long count() const { return count_; }
  long infinite_count() const { return infinite_count_; }
  double min_summand() const { return min_summand_; }
  const Vector& u() const { return u_; }
  const Vector& p() const { return p_; }

 private:
  BifunctionPtr f_;
  ConvexSet set_;
  ConvexSet lower_solutions_;
  Vector u_;
  Vector p_;
  std::uint64_t seed_;
  double partial_sum_ = 0.0;
  long count_ = 0;
  long infinite_count_ = 0;
  double min_summand_;
};

class WindowError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Checks, along a recorded IPSA trace,
//   b_{n+1} <= 2 lambda_n g(z_{n+1}, u) + b_n + (alpha (b + 1) - 1/4) d_{n+1}
// with a_n = |x_n - u|^2, d_n = |x_n - x_{n-1}|^2 and
//   b_n = a_n - alpha_n a_{n-1} + (1 + b) alpha_n d_n.
class EnergyCheck {
 public:
  // Throws WindowError unless 2 alpha < b < 1 / (4 alpha) - 1 (alpha > 0),
  // or b > 0 (alpha == 0).
  EnergyCheck(Vector u, double b, double alpha_bound);

  // Midpoint of the admissible window; 1 when alpha_bound == 0.
  static double default_b(double alpha_bound);

  // max(0, LHS - RHS) for each n with records n - 1, n, n + 1 present.
  std::vector<double> violations(const Trace& trace, const Bifunction& g) const;

  double b_value(double a_n, double a_prev, double alpha_n, double d_n) const;

  const Vector& u() const { return u_; }
  double b() const { return b_; }
  double alpha_bound() const { return alpha_bound_; }

 private:
  Vector u_;
  double b_;
  double alpha_bound_;
};

struct SummabilityWindow {
  long start;        // window [start, 2 start)
  double step_tail;  // sum |x_{n+1} - x_n|^2
  double inner_tail; // sum |z_{n+1} - x_n|^2
  std::optional<double> penalty_tail;  // sum lambda_n beta_n f(u, x_{n+1})
};

struct SummabilityReport {
  std::vector<SummabilityWindow> windows;
  // Verdicts: strictly decreasing over the last four windows.
  bool step_decreasing = false;
  bool inner_decreasing = false;
  std::optional<bool> penalty_decreasing;
  bool all_zero = false;
};

// Doubling windows N = 2^k, 2N <= last index. Trace length >= 64.
SummabilityReport summability_report(const Trace& trace);
SummabilityReport summability_report(const Trace& trace, const Bifunction& f,
                                     const Vector& u);

}  // namespace beq

#endif  // BEQ_DIAGNOSTICS_HPP_
