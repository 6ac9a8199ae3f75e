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
#include <limits>

#include "beq/algorithms.hpp"
#include "beq/diagnostics.hpp"
#include "beq/expression.hpp"
#include "beq/problems.hpp"

using namespace beq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector radial(double r, Eigen::Index d = 5) {
  Vector v = Vector::Zero(d);
  v[0] = r;
  return v;
}

// max over a radial grid of <u, y> + phi(x) - phi(y); the maximizer lies on
// the ray through u.
double fitzpatrick_grid(const Vector& x, const Vector& u) {
  const double phi_x = std::max(1.0, x.norm());
  double best = -kInf;
  for (int i = 0; i <= 200000; ++i) {
    const double s = 5.0 * i / 200000.0;
    best = std::max(best, s * u.norm() + phi_x - std::max(1.0, s));
  }
  return best;
}

}  // namespace

TEST_CASE("estimate_sup on problems with known answers") {
  SUBCASE("concave quadratic over a box") {
    Vector a(3);
    a << 2.0, 0.5, -3.0;
    const auto box = ConvexSet::box(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0));
    const auto est = estimate_sup([&](const Vector& y) { return -(y - a).squaredNorm(); },
                                  [&](const Vector& y) -> Vector { return -2.0 * (y - a); },
                                  box, Vector::Zero(3));
    CHECK_FALSE(est.unbounded);
    CHECK(est.value == doctest::Approx(-(1.0 + 4.0)).epsilon(1e-9));
    CHECK(box.contains(est.argmax));
  }
  SUBCASE("linear function on a halfspace is unbounded along the boundary") {
    Vector n(2), c(2);
    n << 0.0, 1.0;
    c << 1.0, 0.0;
    const auto h = ConvexSet::halfspace(n, 0.0);
    const auto est = estimate_sup([&](const Vector& y) { return c.dot(y); },
                                  [&](const Vector&) -> Vector { return c; }, h,
                                  Vector::Zero(2));
    CHECK(est.unbounded);
    CHECK(est.value == kInf);
  }
  SUBCASE("linear function bounded on a halfspace along its normal") {
    Vector n(2);
    n << 1.0, 1.0;
    const auto h = ConvexSet::halfspace(n, 2.0);
    const auto est = estimate_sup([&](const Vector& y) { return n.dot(y); },
                                  [&](const Vector&) -> Vector { return n; }, h,
                                  Vector::Zero(2));
    CHECK_FALSE(est.unbounded);
    CHECK(est.value == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("one dimension uses bisection") {
    const auto k = ConvexSet::whole_space(1);
    const auto est = estimate_sup([](const Vector& y) { return -std::abs(y[0] - 0.3); },
                                  [](const Vector& y) -> Vector {
                                    return Vector::Constant(1, y[0] > 0.3 ? -1.0 : 1.0);
                                  },
                                  k, Vector::Zero(1));
    CHECK(est.value >= -1e-9);
    CHECK(est.argmax[0] == doctest::Approx(0.3).epsilon(1e-8));
  }
}

TEST_CASE("ep and minty residuals") {
  const Problem p = paper_r5();
  const auto& f = *p.lower;
  CHECK(ep_residual(f, p.set, Vector::Zero(5)) == 0.0);
  CHECK(ep_residual(f, p.set, radial(2.0)) == doctest::Approx(1.0));
  CHECK(minty_residual(f, p.set, Vector::Zero(5)) == 0.0);
  CHECK(minty_residual(f, p.set, radial(2.0)) == doctest::Approx(1.0));
  CHECK(ep_residual(*make_zero(5), p.set, radial(3.0)) == 0.0);

  SUBCASE("estimator path agrees with the closed form on a constrained set") {
    // On K = a box, f(x, .) is minimized where |y| is smallest.
    const auto box = ConvexSet::box(Vector::Constant(5, 1.0), Vector::Constant(5, 3.0));
    const Vector x = Vector::Constant(5, 2.5);
    const double closed = ep_residual(f, box, x);
    CHECK(closed == doctest::Approx(2.5 * std::sqrt(5.0) - std::sqrt(5.0)));
    const Vector anchor = box.project(Vector::Zero(5));
    const auto est = estimate_sup([&](const Vector& y) { return -f.eval(x, y); },
                                  [&](const Vector& y) -> Vector { return -f.grad_second(x, y); },
                                  box, anchor);
    CHECK(est.value == doctest::Approx(closed).epsilon(1e-7));
  }
  SUBCASE("monotone consistency on sampled points") {
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
      const Vector x = random_direction(5, rng) * (0.9 * i / 20.0);
      CHECK(minty_residual(f, p.set, x) == 0.0);
      CHECK(ep_residual(f, p.set, x) <= 1e-12);
    }
  }
}

TEST_CASE("fitzpatrick transform") {
  const Problem p = paper_r5();
  const auto& f = *p.lower;
  SUBCASE("u = 0") {
    CHECK(fitzpatrick(f, p.set, Vector::Zero(5), Vector::Zero(5)) == 0.0);
    const Vector x = radial(3.0);
    CHECK(fitzpatrick(f, p.set, x, Vector::Zero(5)) == doctest::Approx(2.0));
  }
  SUBCASE("closed form against grid maximization") {
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
      const Vector x = random_uniform(5, -1.5, 1.5, rng);
      const Vector u = random_direction(5, rng) * (0.95 * i / 10.0);
      CHECK(fitzpatrick(f, p.set, x, u) == doctest::Approx(fitzpatrick_grid(x, u)).epsilon(1e-8));
      CHECK(fitzpatrick_estimate(f, p.set, x, u) ==
            doctest::Approx(fitzpatrick(f, p.set, x, u)).epsilon(1e-7));
    }
  }
  SUBCASE("outside the conjugate domain") {
    const Vector u = radial(1.5);
    CHECK(fitzpatrick(f, p.set, Vector::Zero(5), u) == kInf);
    CHECK(fitzpatrick_estimate(f, p.set, Vector::Zero(5), u) == kInf);
  }
  SUBCASE("zero bifunction gives the support function") {
    const auto ball = ConvexSet::ball(Vector::Zero(3), 1.0);
    Vector u(3);
    u << 1.0, -2.0, 2.0;
    CHECK(fitzpatrick(*make_zero(3), ball, Vector::Zero(3), u) == doctest::Approx(3.0));
    CHECK(fitzpatrick_estimate(*make_zero(3), ball, Vector::Zero(3), u) ==
          doctest::Approx(3.0).epsilon(1e-8));
  }
  SUBCASE("dominates <u, x>") {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
      const Vector x = random_uniform(5, -2, 2, rng);
      const Vector u = random_uniform(5, -0.4, 0.4, rng);
      CHECK(fitzpatrick(f, p.set, x, u) >= u.dot(x) - 1e-12);
    }
  }
}

TEST_CASE("geometric condition summand") {
  const Problem p = paper_r5();
  const auto& s_f = *p.lower_solutions;
  SUBCASE("p = 0 at the reference point") {
    const Vector pv = monitor_normal_vector(*p.upper, s_f, *p.reference);
    CHECK(pv.norm() == 0.0);
    CHECK(geometric_condition_summand(*p.lower, p.set, s_f, *p.reference, pv, 0.5, 3.0) == 0.0);
  }
  SUBCASE("boundary points with normal vectors") {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
      const Vector u = random_direction(5, rng);
      const Vector pv = u * (0.4 * i / 20.0);
      const double s = geometric_condition_summand(*p.lower, p.set, s_f, u, pv, 0.3, 2.0);
      CHECK(std::abs(s) <= 1e-12);
    }
  }
  SUBCASE("small beta leaves the conjugate domain") {
    const Vector u = radial(1.0);
    CHECK(geometric_condition_summand(*p.lower, p.set, s_f, u, u, 1.0, 1.0) == kInf);
  }
  SUBCASE("monitor accumulates") {
    GeometricMonitor mon(p.lower, p.set, s_f, radial(1.0), radial(0.5));
    for (long n = 1; n <= 10; ++n) mon.add(1.0 / n, 1.0 + n);
    CHECK(mon.count() == 10);
    CHECK(mon.infinite_count() == 0);
    CHECK(std::abs(mon.partial_sum()) <= 1e-12);
    mon.add(1.0, 0.5);
    CHECK(mon.infinite_count() == 1);
  }
}

TEST_CASE("energy inequality") {
  const Problem p = paper_r5();
  CHECK_THROWS_AS(EnergyCheck(Vector::Zero(5), 0.1, 0.1), WindowError);
  CHECK_THROWS_AS(EnergyCheck(Vector::Zero(5), 1.6, 0.1), WindowError);
  CHECK_NOTHROW(EnergyCheck(Vector::Zero(5), EnergyCheck::default_b(0.1), 0.1));
  CHECK(EnergyCheck::default_b(0.0) == 1.0);

  RunOptions opt;
  opt.budget = 200;
  opt.inner.inner_tol = 1e-12;
  opt.record_residual = false;
  SUBCASE("stationary run") {
    Problem q = p;
    q.x0 = q.x1 = *p.reference;
    const Trace t = run(q, Method::kIpsa, schedule_from_expressions("1/n", "1+n", "0.1-1/n"), opt);
    const EnergyCheck check(*p.reference, 0.85, 0.1);
    for (double v : check.violations(t, *p.upper)) CHECK(v == 0.0);
  }
  SUBCASE("default-schedule run") {
    const Trace t = run(p, Method::kIpsa, schedule_from_expressions("1/n", "1+n", "0.1-1/n"), opt);
    const EnergyCheck check(*p.reference, 0.85, 0.1);
    const auto v = check.violations(t, *p.upper);
    CHECK(v.size() == t.size() - 2);
    CHECK(*std::max_element(v.begin(), v.end()) <= 1e-6);
  }
  SUBCASE("no inertia, b = 1, on a psm run") {
    const Trace t = run(p, Method::kPsm, schedule_from_expressions("1/n", "1+n", "0"), opt);
    const EnergyCheck check(*p.reference, 1.0, 0.0);
    const auto v = check.violations(t, *p.upper);
    CHECK(*std::max_element(v.begin(), v.end()) <= 1e-6);
  }
}

TEST_CASE("summability report") {
  const Problem p = paper_r5();
  RunOptions opt;
  opt.record_residual = false;
  SUBCASE("stationary trace has zero tails") {
    Problem q = p;
    q.x0 = q.x1 = *p.reference;
    opt.budget = 200;
    const Trace t = run(q, Method::kIpsa, schedule_from_expressions("1/n", "1+n", "0"), opt);
    const auto rep = summability_report(t, *p.lower, *p.reference);
    CHECK(rep.all_zero);
  }
  SUBCASE("weak-regime run") {
    opt.budget = 2048;
    const Trace t = run(p, Method::kIpsa, schedule_from_expressions("1/n", "1+n", "0.1-1/n"), opt);
    const auto rep = summability_report(t, *p.lower, *p.reference);
    CHECK(rep.windows.back().start == 1024);
    CHECK(rep.step_decreasing);
    CHECK(rep.inner_decreasing);
    REQUIRE(rep.penalty_decreasing.has_value());
  }
  SUBCASE("bad schedule reports without error") {
    opt.budget = 256;
    const Trace t = run(p, Method::kIpsa, schedule_from_expressions("1", "1", "0.3", false), opt);
    CHECK_NOTHROW(summability_report(t));
  }
  SUBCASE("short traces are rejected") {
    opt.budget = 10;
    const Trace t = run(p, Method::kIpsa, schedule_from_expressions("1/n", "1+n", "0"), opt);
    CHECK_THROWS_AS(summability_report(t), std::invalid_argument);
  }
}
