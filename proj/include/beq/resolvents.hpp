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

#ifndef BEQ_RESOLVENTS_HPP_
#define BEQ_RESOLVENTS_HPP_

#include <cstdint>
#include <stdexcept>

#include "beq/bifunctions.hpp"
#include "beq/core.hpp"

namespace beq {

// The resolvent J(x) of lambda * f on K is the unique z in K with
//   lambda * f(z, y) + <y - z, z - x> >= 0   for all y in K.

struct ResolventOptions {
  double inner_tol = 1e-10;
  long inner_budget = 100000;
  std::uint64_t seed = 0;
};

struct ResolventRequest {
  BifunctionPtr bifunction;
  ConvexSet set;
  double lambda;
  Vector anchor;
  ResolventOptions options{};
};

class ResolventBudgetExhausted : public std::runtime_error {
 public:
  ResolventBudgetExhausted(const std::string& what, Vector best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}
  const Vector& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vector best_;
  double residual_;
};

// argmin_y t * max{1, |y|} + 0.5 * |y - w|^2
Vector prox_max_one_norm(double t, const Vector& w);

// Requires K = R^d. Solves (I + lambda (A + B)) z = x - lambda c.
Vector resolvent_affine(const AffineBifunction& g, double lambda, const Vector& x);

// Requires K = R^d. J = prox of lambda * phi.
Vector resolvent_difference(const DifferenceBifunction& f, double lambda,
                            const Vector& x);

struct GenericResolventResult {
  Vector z;
  double fixed_point_residual;  // natural residual of the splitting map
  double gap;                   // restricted gap, see resolvent_gap
  long iterations;
};

// Tseng forward-backward-forward on the monotone inclusion
//   0 in (z - x) + lambda * F(z) + lambda * sum_i w_i d phi_i(z) + N_K(z)
// built from Bifunction::split(). Extra nonsmooth parts become dual blocks.
// Throws ResolventBudgetExhausted carrying the best iterate.
GenericResolventResult resolvent_generic_detailed(const ResolventRequest& req);
Vector resolvent_generic(const ResolventRequest& req);

ResolventStrategy select_strategy(const Bifunction& f, const ConvexSet& set);

// Dispatches closed-form prox > affine linear solve > generic iteration.
Vector resolvent(const Bifunction& f, const ConvexSet& set, double lambda,
                 const Vector& x, const ResolventOptions& options = {});

// min over sampled y in K of lambda f(z, y) + <y - z, z - x>. Half of the
// samples are drawn from K, half from K within `radius` of z. A value >= 0
// (up to tolerance) certifies the resolvent inequality on the sample.
double resolvent_certificate(const Bifunction& f, const ConvexSet& set,
                             double lambda, const Vector& x, const Vector& z,
                             int samples, std::uint64_t seed,
                             double radius = 1.0);

// max(0, -min) of the same quantity over sampled y in K within `radius` of
// z. Zero at the exact resolvent.
double resolvent_gap(const Bifunction& f, const ConvexSet& set, double lambda,
                     const Vector& x, const Vector& z, int samples,
                     std::uint64_t seed, double radius = 1.0);

}  // namespace beq

#endif  // BEQ_RESOLVENTS_HPP_
