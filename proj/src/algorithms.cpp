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

#include "beq/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beq/diagnostics.hpp"

namespace beq {
namespace {

double checked(const SequenceFn& fn, long n, const char* what) {
  if (!fn) throw std::invalid_argument(std::string("Schedule: missing ") + what);
  const double v = fn(n);
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string("Schedule: ") + what + "(" +
                            std::to_string(n) + ") is not finite");
  }
  return v;
}

// Seeds differ per iteration so sampled quantities inside a step do not
// correlate across steps, while a run stays reproducible.
ResolventOptions per_step(const ResolventOptions& inner, long n) {
  ResolventOptions out = inner;
  out.seed = inner.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n);
  return out;
}

void require_state(const Problem& problem, const SolverState& state) {
  if (!problem.lower || !problem.upper) {
    throw std::invalid_argument("step: problem lacks a bifunction");
  }
  const Eigen::Index d = problem.dim();
  require_same_dim(d, state.x_prev.size(), "step x_prev");
  require_same_dim(d, state.x_curr.size(), "step x_curr");
  if (state.n < 1) throw std::invalid_argument("step: n must be >= 1");
}

SolverState advance(const SolverState& state, Vector y, Vector z, Vector x_next) {
  SolverState out;
  out.n = state.n + 1;
  out.x_prev = state.x_curr;
  out.x_curr = std::move(x_next);
  out.z_curr = std::move(z);
  out.y_curr = std::move(y);
  return out;
}

Vector inertial_point(const SolverState& state, double alpha) {
  return state.x_curr + alpha * (state.x_curr - state.x_prev);
}

SolverState splitting_step(const Problem& problem, const SolverState& state,
                           const Schedule& schedule, const ResolventOptions& inner,
                           bool inertial) {
  require_state(problem, state);
  const long n = state.n;
  const double lambda = schedule.lambda(n);
  const double beta = schedule.beta(n);
  Vector y = inertial ? inertial_point(state, schedule.alpha(n)) : state.x_curr;
  const ResolventOptions opt = per_step(inner, n);
  Vector z = resolvent(*problem.upper, problem.set, lambda, y, opt);
  const auto scaled = make_scaled(beta, problem.lower);
  Vector x_next = resolvent(*scaled, problem.set, lambda, z, opt);
  return advance(state, std::move(y), std::move(z), std::move(x_next));
}

SolverState combined_step(const Problem& problem, const SolverState& state,
                          const Schedule& schedule, const ResolventOptions& inner,
                          bool inertial, bool penalize_lower) {
  require_state(problem, state);
  const long n = state.n;
  const double lambda = schedule.lambda(n);
  const double beta = schedule.beta(n);
  Vector y = inertial ? inertial_point(state, schedule.alpha(n)) : state.x_curr;
  const auto combined =
      penalize_lower
          ? make_combined({{beta, problem.lower}, {1.0, problem.upper}})
          : make_combined({{1.0, problem.lower}, {beta, problem.upper}});
  Vector x_next = resolvent(*combined, problem.set, lambda, y, per_step(inner, n));
  Vector z = x_next;
  return advance(state, std::move(y), std::move(z), std::move(x_next));
}

}  // namespace

double clamp_alpha(double raw) { return std::min(std::max(raw, 0.0), kAlphaMax); }

Schedule::Schedule(SequenceFn lambda, SequenceFn beta, SequenceFn alpha,
                   bool clamp_alpha)
    : lambda_(std::move(lambda)),
      beta_(std::move(beta)),
      alpha_(std::move(alpha)),
      clamp_alpha_(clamp_alpha) {
  if (!lambda_ || !beta_ || !alpha_) {
    throw std::invalid_argument("Schedule: all three sequences are required");
  }
}

Schedule Schedule::constant(double lambda, double beta, double alpha,
                            bool clamp_alpha) {
  return Schedule([lambda](long) { return lambda; }, [beta](long) { return beta; },
                  [alpha](long) { return alpha; }, clamp_alpha);
}

double Schedule::lambda(long n) const {
  const double v = checked(lambda_, n, "lambda");
  if (!(v > 0.0)) {
    throw std::domain_error("Schedule: lambda(" + std::to_string(n) + ") must be > 0");
  }
  return v;
}

double Schedule::beta(long n) const {
  const double v = checked(beta_, n, "beta");
  if (!(v >= 0.0)) {
    throw std::domain_error("Schedule: beta(" + std::to_string(n) + ") must be >= 0");
  }
  return v;
}

double Schedule::raw_alpha(long n) const { return checked(alpha_, n, "alpha"); }

double Schedule::alpha(long n) const {
  const double raw = raw_alpha(n);
  return clamp_alpha_ ? beq::clamp_alpha(raw) : raw;
}

SolverState initial_state(const Problem& problem) {
  require_same_dim(problem.dim(), problem.x0.size(), "initial_state x0");
  require_same_dim(problem.dim(), problem.x1.size(), "initial_state x1");
  SolverState s;
  s.n = 1;
  s.x_prev = problem.x0;
  s.x_curr = problem.x1;
  s.z_curr = problem.x1;
  s.y_curr = problem.x1;
  return s;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kIpsa: return "ipsa";
    case Method::kPsm: return "psm";
    case Method::kInertialProx: return "inertial_prox";
    case Method::kPpmPenalization: return "ppm_penalization";
    case Method::kRppm: return "rppm";
  }
  return "unknown";
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::kIpsa, Method::kPsm,
                                           Method::kInertialProx,
                                           Method::kPpmPenalization, Method::kRppm};
  return methods;
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

SolverState ipsa_step(const Problem& problem, const SolverState& state,
                      const Schedule& schedule, const ResolventOptions& inner) {
  return splitting_step(problem, state, schedule, inner, true);
}

SolverState psm_step(const Problem& problem, const SolverState& state,
                     const Schedule& schedule, const ResolventOptions& inner) {
  return splitting_step(problem, state, schedule, inner, false);
}

SolverState inertial_prox_step(const Problem& problem, const SolverState& state,
                               const Schedule& schedule,
                               const ResolventOptions& inner) {
  return combined_step(problem, state, schedule, inner, true, true);
}

SolverState ppm_penalization_step(const Problem& problem, const SolverState& state,
                                  const Schedule& schedule,
                                  const ResolventOptions& inner) {
  return combined_step(problem, state, schedule, inner, false, true);
}

SolverState rppm_step(const Problem& problem, const SolverState& state,
                      const Schedule& schedule, const ResolventOptions& inner) {
  return combined_step(problem, state, schedule, inner, false, false);
}

SolverState step(Method method, const Problem& problem, const SolverState& state,
                 const Schedule& schedule, const ResolventOptions& inner) {
  switch (method) {
    case Method::kIpsa: return ipsa_step(problem, state, schedule, inner);
    case Method::kPsm: return psm_step(problem, state, schedule, inner);
    case Method::kInertialProx: return inertial_prox_step(problem, state, schedule, inner);
    case Method::kPpmPenalization:
      return ppm_penalization_step(problem, state, schedule, inner);
    case Method::kRppm: return rppm_step(problem, state, schedule, inner);
  }
  throw std::invalid_argument("step: unknown method");
}

std::vector<std::string> RegimeReport::violations() const {
  std::vector<std::string> out = weak_violations;
  for (const auto& v : strong_violations) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::string RegimeReport::summary() const {
  std::ostringstream os;
  os << "weak convergence regime: " << (weak ? "satisfied" : "not satisfied") << '\n';
  for (const auto& v : weak_violations) os << "  - " << v << '\n';
  os << "strong convergence regime: " << (strong ? "satisfied" : "not satisfied") << '\n';
  for (const auto& v : strong_violations) os << "  - " << v << '\n';
  return os.str();
}

RegimeReport validate_regime(const Schedule& schedule, long horizon) {
  if (horizon < 100) throw std::invalid_argument("validate_regime: horizon must be >= 100");

  std::vector<double> lam(horizon + 1), bet(horizon + 1), alp(horizon + 1);
  std::vector<std::string> common;  // failures shared by both regimes
  bool lambda_ok = true, beta_ok = true, alpha_finite = true;
  bool alpha_exceeds = false;
  for (long n = 1; n <= horizon; ++n) {
    lam[n] = schedule.lambda_fn()(n);
    bet[n] = schedule.beta_fn()(n);
    const double raw = schedule.alpha_fn()(n);
    if (!(std::isfinite(lam[n]) && lam[n] > 0.0)) lambda_ok = false;
    if (!(std::isfinite(bet[n]) && bet[n] > 0.0)) beta_ok = false;
    if (!std::isfinite(raw)) alpha_finite = false;
    alp[n] = schedule.clamp_alpha() ? clamp_alpha(raw) : raw;
    if (raw > kAlphaMax) alpha_exceeds = true;
  }
  if (!lambda_ok) common.push_back("lambda_n must be positive and finite");
  if (!beta_ok) common.push_back("beta_n must be positive and finite");
  if (!alpha_finite) common.push_back("alpha_n must be finite");

  bool nondecreasing = true, in_range = true;
  for (long n = 1; n <= horizon; ++n) {
    if (n > 1 && alp[n] < alp[n - 1]) nondecreasing = false;
    if (alp[n] < 0.0 || alp[n] > kAlphaMax) in_range = false;
  }
  if (!nondecreasing) common.push_back("alpha_n is not nondecreasing");
  if (!in_range || alpha_exceeds) {
    common.push_back("alpha_n exceeds the bound (sqrt(3)-1)/4 or is negative");
  }

  // Doubling windows [N, 2N) with 2N - 1 <= horizon.
  struct Window {
    double lam_sum = 0.0, lam_sq_sum = 0.0;
    double lam_max = 0.0;
    double prod_min = std::numeric_limits<double>::infinity();
    double beta_min = std::numeric_limits<double>::infinity();
    double beta_max = -std::numeric_limits<double>::infinity();
  };
  std::vector<Window> windows;
  if (lambda_ok && beta_ok) {
    for (long start = 1; 2 * start - 1 <= horizon; start *= 2) {
      Window w;
      for (long n = start; n < 2 * start; ++n) {
        w.lam_sum += lam[n];
        w.lam_sq_sum += lam[n] * lam[n];
        w.lam_max = std::max(w.lam_max, lam[n]);
        w.prod_min = std::min(w.prod_min, lam[n] * bet[n]);
        w.beta_min = std::min(w.beta_min, bet[n]);
        w.beta_max = std::max(w.beta_max, bet[n]);
      }
      windows.push_back(w);
    }
  }

  RegimeReport report;
  report.weak_violations = common;
  report.strong_violations = common;
  if (windows.size() >= 3) {
    const Window& last = windows.back();
    const Window& prev = windows[windows.size() - 2];
    constexpr double kRatio = 0.9;

    const bool sum_diverges = last.lam_sum >= kRatio * prev.lam_sum;
    const bool sq_converges = last.lam_sq_sum < kRatio * prev.lam_sq_sum;
    const bool liminf_positive =
        last.prod_min > 0.0 && last.prod_min >= kRatio * prev.prod_min;
    const bool lambda_vanishes = last.lam_max <= kRatio * prev.lam_max;
    bool beta_grows = last.beta_min >= 2.0 * windows.front().beta_max;
    for (std::size_t i = 1; i < windows.size(); ++i) {
      if (!(windows[i].beta_min > windows[i - 1].beta_min)) beta_grows = false;
    }

    auto both = [&](const std::string& msg) {
      report.weak_violations.push_back(msg);
      report.strong_violations.push_back(msg);
    };
    if (!sum_diverges) both("sum of lambda_n converges (lambda not outside l1)");
    if (!liminf_positive) both("liminf lambda_n beta_n is not positive");
    if (!sq_converges) report.weak_violations.push_back("sum of lambda_n^2 diverges (lambda not in l2)");
    if (!lambda_vanishes) report.strong_violations.push_back("lambda_n does not tend to 0");
    if (!beta_grows) report.strong_violations.push_back("beta_n does not tend to infinity");
  } else if (common.empty()) {
    report.weak_violations.push_back("schedule could not be evaluated");
    report.strong_violations.push_back("schedule could not be evaluated");
  }
  report.weak = report.weak_violations.empty();
  report.strong = report.strong_violations.empty();
  return report;
}

Trace run(const Problem& problem, Method method, const Schedule& schedule,
          const RunOptions& options) {
  if (options.budget < 0) throw std::invalid_argument("run: budget must be >= 0");
  if (!problem.set.contains(problem.x0, 1e-10) || !problem.set.contains(problem.x1, 1e-10)) {
    throw std::invalid_argument("run: x0 and x1 must lie in K");
  }
  const bool want_residual = options.record_residual || options.residual_tol > 0.0;

  auto make_record = [&](const SolverState& s) {
    TraceRecord r;
    r.n = s.n;
    r.lambda = schedule.lambda(s.n);
    r.beta = schedule.beta(s.n);
    r.alpha = schedule.alpha(s.n);
    r.x = s.x_curr;
    r.z = s.z_curr;
    r.step_norm = (s.x_curr - s.x_prev).norm();
    if (problem.reference) r.err_to_ref = (s.x_curr - *problem.reference).norm();
    if (want_residual) {
      r.ep_residual = ep_residual(*problem.lower, problem.set, s.x_curr, options.seed);
    }
    return r;
  };

  Trace trace;
  SolverState state = initial_state(problem);
  try {
    trace.append(make_record(state));
    for (long k = 0; k < options.budget; ++k) {
      state = step(method, problem, state, schedule, per_step(options.inner, options.seed));
      if (!state.x_curr.allFinite()) {
        throw NonFiniteError("iterate x_" + std::to_string(state.n) + " is not finite");
      }
      trace.append(make_record(state));
      const auto& r = trace.back();
      if (options.step_tol > 0.0 && r.step_norm < options.step_tol &&
          (options.residual_tol <= 0.0 || r.ep_residual.value_or(0.0) < options.residual_tol)) {
        break;
      }
    }
  } catch (const std::exception& e) {
    throw SolverFailure(std::string("run: ") + e.what() + " at n = " +
                            std::to_string(state.n),
                        std::move(trace));
  }
  return trace;
}

}  // namespace beq
