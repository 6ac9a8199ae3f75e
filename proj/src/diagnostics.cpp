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

#include "beq/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace beq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ellipsoid {
  Vector center;
  Matrix shape;  // E = { y : (y - c)^T shape^{-1} (y - c) <= 1 }
};

// One ellipsoid run started at `center` with radius `radius`. Every point at
// which h is evaluated lies in K, so the result is a lower bound.
std::pair<double, Vector> ellipsoid_max(
    const std::function<double(const Vector&)>& h,
    const std::function<Vector(const Vector&)>& grad, const ConvexSet& set,
    const Vector& center, double radius, int steps) {
  const Eigen::Index d = center.size();
  const double dd = static_cast<double>(d);
  Vector c = center;
  Matrix shape = Matrix::Identity(d, d) * radius * radius;

  Vector best_y = set.project(center);
  double best = h(best_y);
  if (std::isnan(best)) best = -kInf;

  auto consider = [&](const Vector& y, double v) {
    if (v > best) {
      best = v;
      best_y = y;
    }
  };

  for (int k = 0; k < steps; ++k) {
    Vector a;
    const Vector pc = set.project(c);
    if ((pc - c).squaredNorm() > 0.0) {
      consider(pc, h(pc));
      a = c - pc;
    } else {
      const double v = h(c);
      consider(c, v);
      a = -grad(c);
    }
    if (!a.allFinite() || a.squaredNorm() == 0.0) break;

    const Vector pa = shape * a;
    const double denom = a.dot(pa);
    if (!(denom > 0.0) || !std::isfinite(denom)) break;
    const Vector at = pa / std::sqrt(denom);
    if (d == 1) {
      c -= 0.5 * at;
      shape *= 0.25;
    } else {
      c -= at / (dd + 1.0);
      shape = (dd * dd / (dd * dd - 1.0)) *
              (shape - (2.0 / (dd + 1.0)) * (at * at.transpose()));
      shape = 0.5 * (shape + shape.transpose()).eval();
    }
    const double scale = 1e-15 * (1.0 + c.norm());
    if (shape.trace() < scale * scale) break;
  }
  return {best, best_y};
}

}  // namespace

SupEstimate estimate_sup(const std::function<double(const Vector&)>& h,
                         const std::function<Vector(const Vector&)>& grad,
                         const ConvexSet& set, const Vector& anchor,
                         const SupOptions& options) {
  require_same_dim(set.dim(), anchor.size(), "estimate_sup");
  const Eigen::Index d = anchor.size();
  const int steps = options.steps > 0
                        ? options.steps
                        : 500 + 80 * static_cast<int>(d * (d + 1));
  const double radius =
      options.radius > 0.0 ? options.radius : 10.0 * (1.0 + anchor.norm());
  const Vector start = set.project(anchor);

  Rng rng(options.seed);
  double best = -kInf;
  Vector best_y = start;
  for (int s = 0; s < std::max(1, options.starts); ++s) {
    Vector center = start;
    if (s > 0) center = set.project(start + 0.5 * radius * random_uniform(d, -1.0, 1.0, rng));
    auto [v, y] = ellipsoid_max(h, grad, set, center, radius, steps);
    if (v > best) {
      best = v;
      best_y = std::move(y);
    }
  }

  if (set.is_bounded()) return {best, best_y, false};

  // Radial growth test.
  std::vector<double> values{best};
  double r = radius;
  for (int k = 0; k < 3; ++k) {
    r *= 10.0;
    auto [v, y] = ellipsoid_max(h, grad, set, start, r, steps);
    if (v > best) {
      best = v;
      best_y = std::move(y);
    }
    values.push_back(std::max(values.back(), v));
  }
  const double tol = 1e-6 * (1.0 + std::abs(values[0]));
  const double g2 = values[2] - values[1];
  const double g3 = values[3] - values[2];
  if (g2 > tol && g3 > tol && g3 >= 3.0 * g2) return {kInf, best_y, true};
  return {best, best_y, false};
}

double ep_residual(const Bifunction& f, const ConvexSet& set, const Vector& x,
                   std::uint64_t seed) {
  require_same_dim(f.dim(), x.size(), "ep_residual");
  if (const auto inf = f.inf_second_over(x, set)) return std::max(0.0, -*inf);
  const auto est = estimate_sup(
      [&](const Vector& y) { return -f.eval(x, y); },
      [&](const Vector& y) -> Vector { return -f.grad_second(x, y); }, set, x,
      {.seed = seed});
  return std::max(0.0, est.value);
}

double minty_residual(const Bifunction& f, const ConvexSet& set, const Vector& x,
                      std::uint64_t seed) {
  require_same_dim(f.dim(), x.size(), "minty_residual");
  if (const auto sup = f.sup_first_over(x, set)) return std::max(0.0, *sup);
  const auto est = estimate_sup(
      [&](const Vector& y) { return f.eval(y, x); },
      [&](const Vector& y) -> Vector { return f.grad_first(y, x); }, set, x,
      {.seed = seed});
  return std::max(0.0, est.value);
}

std::optional<double> fitzpatrick_closed_form(const Bifunction& f,
                                              const ConvexSet& set,
                                              const Vector& x, const Vector& u) {
  require_same_dim(f.dim(), x.size(), "fitzpatrick x");
  require_same_dim(f.dim(), u.size(), "fitzpatrick u");
  if (const auto* diff = dynamic_cast<const DifferenceBifunction*>(&f)) {
    if (set.is_whole_space() && diff->phi().has_conjugate()) {
      return diff->phi().conjugate(u) + diff->phi().value(x);
    }
    return std::nullopt;
  }
  if (const auto* aff = dynamic_cast<const AffineBifunction*>(&f)) {
    if (aff->a().isZero(0.0) && aff->b().isZero(0.0) && aff->c().isZero(0.0)) {
      return set.support_function(u);
    }
  }
  return std::nullopt;
}

double fitzpatrick_estimate(const Bifunction& f, const ConvexSet& set,
                            const Vector& x, const Vector& u,
                            std::uint64_t seed) {
  const auto est = estimate_sup(
      [&](const Vector& y) { return u.dot(y) + f.eval(y, x); },
      [&](const Vector& y) -> Vector { return u + f.grad_first(y, x); }, set,
      x, {.seed = seed});
  return est.value;
}

double fitzpatrick(const Bifunction& f, const ConvexSet& set, const Vector& x,
                   const Vector& u, std::uint64_t seed) {
  if (const auto closed = fitzpatrick_closed_form(f, set, x, u)) return *closed;
  return fitzpatrick_estimate(f, set, x, u, seed);
}

double geometric_condition_summand(const Bifunction& f, const ConvexSet& set,
                                   const ConvexSet& lower_solutions,
                                   const Vector& u, const Vector& p,
                                   double lambda, double beta,
                                   std::uint64_t seed) {
  if (!(beta > 0.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("geometric_condition_summand: lambda, beta must be positive");
  }
  const Vector q = (2.0 / beta) * p;
  const double fitz = fitzpatrick(f, set, u, q, seed);
  if (fitz == kInf) return kInf;
  const double sigma = lower_solutions.support_function(q);
  if (sigma == kInf) return -kInf;
  return lambda * beta * (fitz - sigma);
}

Vector monitor_normal_vector(const Bifunction& g, const ConvexSet& lower_solutions,
                             const Vector& u) {
  return lower_solutions.project_normal_cone(u, -diagonal_subgradient(g, u));
}

GeometricMonitor::GeometricMonitor(BifunctionPtr f, ConvexSet set,
                                   ConvexSet lower_solutions, Vector u, Vector p,
                                   std::uint64_t seed)
    : f_(std::move(f)),
      set_(std::move(set)),
      lower_solutions_(std::move(lower_solutions)),
      u_(std::move(u)),
      p_(std::move(p)),
      seed_(seed),
      min_summand_(kInf) {
  if (!f_) throw std::invalid_argument("GeometricMonitor: null bifunction");
}

double GeometricMonitor::add(double lambda, double beta) {
  const double s = geometric_condition_summand(*f_, set_, lower_solutions_, u_,
                                               p_, lambda, beta, seed_);
  ++count_;
  if (std::isinf(s)) {
    ++infinite_count_;
  } else {
    partial_sum_ += s;
  }
  min_summand_ = std::min(min_summand_, s);
  return s;
}

EnergyCheck::EnergyCheck(Vector u, double b, double alpha_bound)
    : u_(std::move(u)), b_(b), alpha_bound_(alpha_bound) {
  if (!(alpha_bound >= 0.0)) throw WindowError("EnergyCheck: alpha bound must be >= 0");
  if (alpha_bound == 0.0) {
    if (!(b > 0.0)) throw WindowError("EnergyCheck: b must be positive");
    return;
  }
  const double lo = 2.0 * alpha_bound;
  const double hi = 1.0 / (4.0 * alpha_bound) - 1.0;
  if (!(b > lo && b < hi)) {
    throw WindowError("EnergyCheck: b = " + std::to_string(b) +
                      " outside (" + std::to_string(lo) + ", " +
                      std::to_string(hi) + ")");
  }
}

double EnergyCheck::default_b(double alpha_bound) {
  if (alpha_bound == 0.0) return 1.0;
  return 0.5 * (2.0 * alpha_bound + 1.0 / (4.0 * alpha_bound) - 1.0);
}

double EnergyCheck::b_value(double a_n, double a_prev, double alpha_n,
                            double d_n) const {
  return a_n - alpha_n * a_prev + (1.0 + b_) * alpha_n * d_n;
}

std::vector<double> EnergyCheck::violations(const Trace& trace,
                                            const Bifunction& g) const {
  std::vector<double> out;
  const auto& rec = trace.records();
  for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
    const auto& prev = rec[i - 1];
    const auto& cur = rec[i];
    const auto& next = rec[i + 1];
    const double a_prev = (prev.x - u_).squaredNorm();
    const double a_cur = (cur.x - u_).squaredNorm();
    const double a_next = (next.x - u_).squaredNorm();
    const double d_cur = cur.step_norm * cur.step_norm;
    const double d_next = next.step_norm * next.step_norm;
    const double lhs = b_value(a_next, a_cur, next.alpha, d_next);
    const double rhs = 2.0 * cur.lambda * g.eval(next.z, u_) +
                       b_value(a_cur, a_prev, cur.alpha, d_cur) +
                       (alpha_bound_ * (b_ + 1.0) - 0.25) * d_next;
    out.push_back(std::max(0.0, lhs - rhs));
  }
  return out;
}

namespace {

bool strictly_decreasing_tail(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const std::size_t from = v.size() > 4 ? v.size() - 4 : 0;
  for (std::size_t i = from + 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

SummabilityReport summability_impl(const Trace& trace, const Bifunction* f,
                                   const Vector* u) {
  if (trace.size() < 64) {
    throw std::invalid_argument("summability_report: trace needs >= 64 records");
  }
  SummabilityReport report;
  std::vector<double> steps, inners, penalties;
  for (long start = 1; 2 * start <= trace.last_n(); start *= 2) {
    if (start < trace.first_n()) continue;
    SummabilityWindow w{start, 0.0, 0.0, std::nullopt};
    double penalty = 0.0;
    for (long n = start; n < 2 * start; ++n) {
      const auto& cur = trace.at_n(n);
      const auto& next = trace.at_n(n + 1);
      w.step_tail += next.step_norm * next.step_norm;
      w.inner_tail += (next.z - cur.x).squaredNorm();
      if (f != nullptr) penalty += cur.lambda * cur.beta * f->eval(*u, next.x);
    }
    if (f != nullptr) w.penalty_tail = penalty;
    steps.push_back(w.step_tail);
    inners.push_back(w.inner_tail);
    penalties.push_back(penalty);
    report.windows.push_back(w);
  }
  report.step_decreasing = strictly_decreasing_tail(steps);
  report.inner_decreasing = strictly_decreasing_tail(inners);
  if (f != nullptr) report.penalty_decreasing = strictly_decreasing_tail(penalties);
  report.all_zero = std::all_of(report.windows.begin(), report.windows.end(),
                                [](const SummabilityWindow& w) {
                                  return w.step_tail == 0.0 && w.inner_tail == 0.0 &&
                                         w.penalty_tail.value_or(0.0) == 0.0;
                                });
  return report;
}

}  // namespace

SummabilityReport summability_report(const Trace& trace) {
  return summability_impl(trace, nullptr, nullptr);
}

SummabilityReport summability_report(const Trace& trace, const Bifunction& f,
                                     const Vector& u) {
  require_same_dim(f.dim(), u.size(), "summability_report");
  return summability_impl(trace, &f, &u);
}

}  // namespace beq
