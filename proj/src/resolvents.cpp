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

#include "beq/resolvents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace beq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// Sampled Lipschitz estimate of a map around a point.
double sample_lipschitz(const std::function<Vector(const Vector&)>& fn,
                        const Vector& around, Rng& rng) {
  const Eigen::Index d = around.size();
  const double scale = 1.0 + around.norm();
  double best = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Vector u = around + scale * random_uniform(d, -1.0, 1.0, rng);
    const Vector v = around + scale * random_uniform(d, -1.0, 1.0, rng);
    const double dist = (u - v).norm();
    if (dist == 0.0) continue;
    best = std::max(best, (fn(u) - fn(v)).norm() / dist);
  }
  return best;
}

}  // namespace

Vector prox_max_one_norm(double t, const Vector& w) {
  require_positive(t, "prox_max_one_norm: t");
  require_finite(w, "prox_max_one_norm");
  const double r = w.norm();
  if (r <= 1.0) return w;
  if (r <= 1.0 + t) return w / r;
  return (1.0 - t / r) * w;
}

Vector resolvent_affine(const AffineBifunction& g, double lambda, const Vector& x) {
  require_positive(lambda, "resolvent_affine: lambda");
  require_same_dim(g.dim(), x.size(), "resolvent_affine");
  require_finite(x, "resolvent_affine");
  const Eigen::Index d = g.dim();
  const Matrix system = Matrix::Identity(d, d) + lambda * (g.a() + g.b());
  return solve_linear(system, x - lambda * g.c());
}

Vector resolvent_difference(const DifferenceBifunction& f, double lambda,
                            const Vector& x) {
  require_positive(lambda, "resolvent_difference: lambda");
  require_same_dim(f.dim(), x.size(), "resolvent_difference");
  require_finite(x, "resolvent_difference");
  return f.phi().prox(lambda, x);
}

GenericResolventResult resolvent_generic_detailed(const ResolventRequest& req) {
  if (!req.bifunction) throw std::invalid_argument("resolvent_generic: null bifunction");
  const Bifunction& f = *req.bifunction;
  const ConvexSet& set = req.set;
  const double lambda = req.lambda;
  const ResolventOptions& opt = req.options;
  require_positive(lambda, "resolvent_generic: lambda");
  require_positive(opt.inner_tol, "resolvent_generic: inner_tol");
  require_same_dim(f.dim(), set.dim(), "resolvent_generic set");
  require_same_dim(f.dim(), req.anchor.size(), "resolvent_generic anchor");
  require_finite(req.anchor, "resolvent_generic anchor");

  const Vector& anchor = req.anchor;
  const Eigen::Index d = f.dim();
  Rng rng(opt.seed);

  const MonotoneSplit split = f.split();
  auto forward = [&](const Vector& z) -> Vector {
    Vector out = z - anchor;
    if (split.single_valued) out += lambda * split.single_valued(z);
    return out;
  };

  // Backward operator A: N_K when constrained, else the first nonsmooth part.
  // Remaining nonsmooth parts are handled as dual blocks.
  std::vector<WeightedFunction> duals;
  std::optional<WeightedFunction> primal_prox;
  for (const auto& part : split.nonsmooth) {
    if (part.weight == 0.0) continue;
    if (set.is_whole_space() && !primal_prox) {
      primal_prox = part;
    } else {
      duals.push_back(part);
    }
  }
  auto backward = [&](double gamma, const Vector& v) -> Vector {
    if (!set.is_whole_space()) return set.project(v);
    if (primal_prox) return primal_prox->function->prox(gamma * lambda * primal_prox->weight, v);
    return v;
  };

  double lipschitz_f = 0.0;
  bool lipschitz_known = true;
  if (split.single_valued) {
    if (split.lipschitz) {
      lipschitz_f = *split.lipschitz;
    } else {
      lipschitz_f = sample_lipschitz(split.single_valued, anchor, rng);
      lipschitz_known = false;
    }
  }
  const double beta = 1.0 + lambda * lipschitz_f + std::sqrt(static_cast<double>(duals.size()));
  double gamma = 0.95 / beta;
  constexpr double kTheta = 0.95;

  Vector x = set.project(anchor);
  std::vector<Vector> v(duals.size(), Vector::Zero(d));
  std::vector<Vector> p2(duals.size(), Vector::Zero(d));

  Vector best = x;
  double best_residual = kInf;
  long iter = 0;
  for (; iter < opt.inner_budget; ++iter) {
    const Vector cx = forward(x);
    Vector dual_sum = Vector::Zero(d);
    for (const auto& vi : v) dual_sum += vi;
    const Vector y1 = x - gamma * (cx + dual_sum);
    const Vector p1 = backward(gamma, y1);
    const Vector cp1 = forward(p1);

    if (!lipschitz_known && duals.empty() &&
        gamma * (cx - cp1).norm() > kTheta * (x - p1).norm()) {
      gamma *= 0.5;
      continue;
    }

    double residual = (x - p1).norm();
    Vector p2_sum = Vector::Zero(d);
    for (std::size_t i = 0; i < duals.size(); ++i) {
      const Vector y2 = v[i] + gamma * x;
      const double weight = lambda * duals[i].weight / gamma;
      p2[i] = y2 - gamma * duals[i].function->prox(weight, y2 / gamma);
      residual = std::max(residual, (v[i] - p2[i]).norm());
      p2_sum += p2[i];
    }
    residual /= gamma;
    if (residual < best_residual) {
      best_residual = residual;
      best = p1;
    }
    if (residual <= opt.inner_tol) {
      const double gap = resolvent_gap(f, set, lambda, anchor, p1, 16, opt.seed);
      return {p1, residual, gap, iter + 1};
    }
    for (std::size_t i = 0; i < duals.size(); ++i) {
      const Vector y2 = v[i] + gamma * x;
      const Vector q2 = p2[i] + gamma * p1;
      v[i] = v[i] - y2 + q2;
    }
    const Vector q1 = p1 - gamma * (cp1 + p2_sum);
    x = x - y1 + q1;
    if (!x.allFinite()) break;
  }
  std::ostringstream os;
  os << "resolvent_generic: budget of " << opt.inner_budget
     << " iterations exhausted (best residual " << best_residual << ")";
  throw ResolventBudgetExhausted(os.str(), best, best_residual);
}

Vector resolvent_generic(const ResolventRequest& req) {
  return resolvent_generic_detailed(req).z;
}

ResolventStrategy select_strategy(const Bifunction& f, const ConvexSet& set) {
  if (!set.is_whole_space()) return ResolventStrategy::kGenericIterative;
  if (dynamic_cast<const DifferenceBifunction*>(&f) != nullptr) {
    return ResolventStrategy::kClosedFormProx;
  }
  if (dynamic_cast<const AffineBifunction*>(&f) != nullptr) {
    return ResolventStrategy::kAffineLinearSolve;
  }
  if (const auto* comb = dynamic_cast<const CombinedBifunction*>(&f)) {
    return comb->strategy();
  }
  return ResolventStrategy::kGenericIterative;
}

Vector resolvent(const Bifunction& f, const ConvexSet& set, double lambda,
                 const Vector& x, const ResolventOptions& options) {
  require_positive(lambda, "resolvent: lambda");
  require_same_dim(f.dim(), set.dim(), "resolvent set");
  require_same_dim(f.dim(), x.size(), "resolvent anchor");
  switch (select_strategy(f, set)) {
    case ResolventStrategy::kClosedFormProx: {
      if (const auto* diff = dynamic_cast<const DifferenceBifunction*>(&f)) {
        return resolvent_difference(*diff, lambda, x);
      }
      const auto& comb = dynamic_cast<const CombinedBifunction&>(f);
      const auto scaled = comb.as_scaled_difference();
      return resolvent_difference(*scaled->second, lambda * scaled->first, x);
    }
    case ResolventStrategy::kAffineLinearSolve: {
      if (const auto* aff = dynamic_cast<const AffineBifunction*>(&f)) {
        return resolvent_affine(*aff, lambda, x);
      }
      const auto merged = dynamic_cast<const CombinedBifunction&>(f).as_affine();
      return resolvent_affine(*merged, lambda, x);
    }
    case ResolventStrategy::kGenericIterative:
      break;
  }
  // Non-owning alias; the request does not outlive this call.
  const BifunctionPtr alias(std::shared_ptr<const Bifunction>{}, &f);
  return resolvent_generic({alias, set, lambda, x, options});
}

double resolvent_certificate(const Bifunction& f, const ConvexSet& set,
                             double lambda, const Vector& x, const Vector& z,
                             int samples, std::uint64_t seed, double radius) {
  Rng rng(seed);
  double worst = kInf;
  for (int i = 0; i < samples; ++i) {
    const Vector y = (i % 2 == 0)
                         ? set.sample(rng)
                         : set.project(z + radius * random_uniform(z.size(), -1.0, 1.0, rng));
    worst = std::min(worst, lambda * f.eval(z, y) + (y - z).dot(z - x));
  }
  return worst;
}

double resolvent_gap(const Bifunction& f, const ConvexSet& set, double lambda,
                     const Vector& x, const Vector& z, int samples,
                     std::uint64_t seed, double radius) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = radius * unit(rng);
    const Vector y = set.project(z + r * random_direction(z.size(), rng));
    worst = std::min(worst, lambda * f.eval(z, y) + (y - z).dot(z - x));
  }
  return -worst;
}

}  // namespace beq
