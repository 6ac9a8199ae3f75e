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

#include <doctest.h>

#include <cmath>

#include "beq/resolvents.hpp"

using namespace beq;

namespace {

Matrix paper_a() {
  Matrix a(5, 5);
  a << 7, 3, 0, 1, 1, 3, 9, 1, 5, 4, 0, 1, 10, 3, -4, 1, 5, 3, 9, -1, 1, 4, -4, -1, 9;
  return a;
}

Matrix paper_b() {
  Matrix b(5, 5);
  b << 5, 3, -1, 1, 2, 3, 6, 1, 4, 3, -1, 1, 7, 2, -3, 1, 4, 2, 7, -2, 2, 3, -3, -2, 7;
  return b;
}

// Minimizer of t max{1, s} + (s - r)^2 / 2 over s >= 0: bisection on the
// right derivative t [s >= 1] + s - r, which is nondecreasing.
double radial_argmin(double t, double r) {
  auto right_slope = [&](double s) { return (s >= 1.0 ? t : 0.0) + s - r; };
  double lo = 0.0, hi = r + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (right_slope(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// Resolvent of lambda (beta phi-difference + affine) for |z| > 1, by
// bisection on r = |z(r)| with z(r) = ((1 + lambda beta / r) I + lambda M)^-1 x.
Vector combined_oracle(const Matrix& m, double lambda, double beta, const Vector& x) {
  const Eigen::Index d = x.size();
  auto z_of = [&](double r) -> Vector {
    const Matrix sys = (1.0 + lambda * beta / r) * Matrix::Identity(d, d) + lambda * m;
    return sys.fullPivLu().solve(x);
  };
  double lo = 1.0, hi = x.norm() + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (z_of(mid).norm() > mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return z_of(0.5 * (lo + hi));
}

double firm_nonexpansive_slack(const std::function<Vector(const Vector&)>& j,
                               const Vector& x, const Vector& y) {
  const Vector jx = j(x);
  const Vector jy = j(y);
  return (jx - jy).squaredNorm() - (jx - jy).dot(x - y);
}

}  // namespace

TEST_CASE("prox of max{1,|.|} against a radial minimization oracle") {
  Rng rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int regimes[3] = {0, 0, 0};
  for (int i = 0; i < 600; ++i) {
    const double t = 0.01 + 3.0 * unit(rng);
    const double radius = 4.0 * unit(rng) * (1.0 + t) / 2.0 + (i % 3 == 0 ? 0.0 : 0.2);
    const Vector w = radius * random_direction(4, rng);
    const double r = w.norm();
    regimes[r <= 1.0 ? 0 : (r <= 1.0 + t ? 1 : 2)]++;
    const Vector expected = radial_argmin(t, r) * w / r;
    CHECK((prox_max_one_norm(t, w) - expected).norm() <= 1e-8);
  }
  CHECK(regimes[0] > 0);
  CHECK(regimes[1] > 0);
  CHECK(regimes[2] > 0);
  CHECK_THROWS_AS(prox_max_one_norm(0.0, Vector::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(prox_max_one_norm(1.0, Vector::Constant(2, NAN)), NonFiniteError);
}

TEST_CASE("prox regimes on explicit points") {
  Vector w(2);
  w << 0.6, 0.8;  // |w| = 1
  CHECK(prox_max_one_norm(0.5, w) == w);
  w << 1.2, 1.6;  // |w| = 2 <= 1 + t
  CHECK((prox_max_one_norm(1.5, w) - Vector(w / 2.0)).norm() < 1e-15);
  w << 3.0, 4.0;  // |w| = 5 > 1 + t
  Vector expected(2);
  expected << 2.4, 3.2;
  CHECK((prox_max_one_norm(1.0, w) - expected).norm() < 1e-15);
}

TEST_CASE("affine resolvent solves the linear system") {
  const AffineBifunction g(paper_a(), paper_b());
  const Vector x = Vector::Ones(5);
  const Vector z = resolvent_affine(g, 0.5, x);
  // numpy.linalg.solve(I + 0.5 (A + B), ones)
  Vector expected(5);
  expected << 0.13782665635518762, -0.12225750481411639, 0.16998428902868967,
      0.1474349457206993, 0.2263620791664543;
  CHECK((z - expected).norm() < 1e-14);
  CHECK(resolvent_certificate(g, ConvexSet::whole_space(5), 0.5, x, z, 64, 3) >= -1e-12);
}

TEST_CASE("fixed-point law for the difference bifunction") {
  const DifferenceBifunction f(5, std::make_shared<MaxOneNorm>());
  Rng rng(2);
  for (int i = 0; i < 64; ++i) {
    const Vector inside = random_direction(5, rng) * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK((resolvent_difference(f, 0.7, inside) - inside).norm() <= 1e-10);
    const Vector outside = random_direction(5, rng) * (1.0 + 1e-3 + 3.0 * i / 64.0);
    CHECK((resolvent_difference(f, 0.7, outside) - outside).norm() > 1e-6);
  }
}

TEST_CASE("generic combined resolvent against the bisection oracle") {
  const Matrix m = paper_a() + paper_b();
  const auto f = make_difference(5, std::make_shared<MaxOneNorm>());
  const auto g = make_affine(paper_a(), paper_b());
  const double lambda = 0.25, beta = 2.0;
  const auto h = make_combined({{beta, f}, {1.0, g}});
  CHECK(select_strategy(*h, ConvexSet::whole_space(5)) == ResolventStrategy::kGenericIterative);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Vector x = random_direction(5, rng) * (40.0 + 10.0 * i);
    const Vector oracle = combined_oracle(m, lambda, beta, x);
    REQUIRE(oracle.norm() > 1.0);
    ResolventOptions opt;
    opt.inner_tol = 1e-12;
    const auto res = resolvent_generic_detailed({h, ConvexSet::whole_space(5), lambda, x, opt});
    CHECK((res.z - oracle).norm() <= 1e-9);
    CHECK(res.gap <= 1e-8);
  }
}

TEST_CASE("generic resolvent on a constrained set satisfies the VI") {
  const auto g = make_affine(paper_a(), paper_b());
  const auto ball = ConvexSet::ball(Vector::Constant(5, 0.5), 0.3);
  const Vector x = Vector::Constant(5, -3.0);
  ResolventOptions opt;
  opt.inner_tol = 1e-12;
  const Vector z = resolvent(*g, ball, 0.8, x, opt);
  CHECK(ball.contains(z));
  CHECK(resolvent_certificate(*g, ball, 0.8, x, z, 256, 5) >= -1e-8);

  // Difference bifunction on a box goes through the generic path too.
  const auto f = make_difference(5, std::make_shared<MaxOneNorm>());
  const auto box = ConvexSet::box(Vector::Constant(5, 1.0), Vector::Constant(5, 2.0));
  const Vector z2 = resolvent(*f, box, 0.5, Vector::Constant(5, 5.0), opt);
  CHECK(box.contains(z2));
  CHECK(resolvent_certificate(*f, box, 0.5, Vector::Constant(5, 5.0), z2, 256, 6) >= -1e-8);
}

TEST_CASE("firm nonexpansiveness of each strategy") {
  const auto f = make_difference(5, std::make_shared<MaxOneNorm>());
  const auto g = make_affine(paper_a(), paper_b());
  const auto h = make_combined({{3.0, f}, {1.0, g}});
  const auto k = ConvexSet::whole_space(5);
  const auto ball = ConvexSet::ball(Vector::Zero(5), 2.0);
  ResolventOptions opt;
  opt.inner_tol = 1e-12;
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Vector x = random_uniform(5, -4, 4, rng);
    const Vector y = random_uniform(5, -4, 4, rng);
    CHECK(firm_nonexpansive_slack([&](const Vector& v) { return resolvent(*f, k, 0.9, v); }, x, y) <= 1e-8);
    CHECK(firm_nonexpansive_slack([&](const Vector& v) { return resolvent(*g, k, 0.9, v); }, x, y) <= 1e-8);
    CHECK(firm_nonexpansive_slack([&](const Vector& v) { return resolvent(*h, k, 0.9, v, opt); }, x, y) <= 1e-8);
    CHECK(firm_nonexpansive_slack([&](const Vector& v) { return resolvent(*g, ball, 0.9, v, opt); }, x, y) <= 1e-8);
  }
}

TEST_CASE("budget exhaustion carries the best iterate") {
  const auto g = make_affine(paper_a(), paper_b());
  ResolventOptions opt;
  opt.inner_budget = 3;
  opt.inner_tol = 1e-14;
  const auto ball = ConvexSet::ball(Vector::Zero(5), 0.5);
  try {
    resolvent(*g, ball, 1.0, Vector::Constant(5, 10.0), opt);
    FAIL("expected ResolventBudgetExhausted");
  } catch (const ResolventBudgetExhausted& e) {
    CHECK(e.best().size() == 5);
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("dispatcher preconditions") {
  const auto g = make_affine(paper_a(), paper_b());
  const auto k = ConvexSet::whole_space(5);
  CHECK_THROWS_AS(resolvent(*g, k, 0.0, Vector::Zero(5)), std::invalid_argument);
  CHECK_THROWS_AS(resolvent(*g, k, -1.0, Vector::Zero(5)), std::invalid_argument);
  CHECK_THROWS_AS(resolvent(*g, k, 1.0, Vector::Zero(4)), DimensionError);
  CHECK(select_strategy(*g, k) == ResolventStrategy::kAffineLinearSolve);
  CHECK(select_strategy(*g, ConvexSet::ball(Vector::Zero(5), 1.0)) ==
        ResolventStrategy::kGenericIterative);
  // Zero bifunction: the resolvent is the identity.
  const Vector x = Vector::LinSpaced(5, -1, 1);
  CHECK(resolvent(*make_zero(5), k, 2.0, x) == x);
}
