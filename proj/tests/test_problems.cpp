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

#include "beq/diagnostics.hpp"
#include "beq/problems.hpp"
#include "beq/resolvents.hpp"

using namespace beq;

TEST_CASE("paper-r5 instance") {
  const Problem p = paper_r5();
  CHECK(p.dim() == 5);
  CHECK(p.name == "paper-r5");
  CHECK(p.set.is_whole_space());
  CHECK(p.x0 == Vector::Ones(5));
  CHECK(p.x1 == Vector::Ones(5));
  REQUIRE(p.lower_solutions.has_value());
  REQUIRE(p.reference.has_value());
  // B is positive definite, so g(0, y) = <B y, y> >= 0 and 0 solves the upper level.
  CHECK(p.reference->norm() == 0.0);
  CHECK(min_symmetric_eigenvalue(paper_r5_b()) == doctest::Approx(0.19461764499954035));
  CHECK(check_strong_monotone(*p.upper, p.set, 1000, 3) > 0.0);
}

TEST_CASE("paper-r5 lower-level solution set is the unit ball") {
  const Problem p = paper_r5();
  Rng rng(8);
  for (int i = 0; i < 64; ++i) {
    const Vector in = random_direction(5, rng) * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(ep_residual(*p.lower, p.set, in) <= 1e-8);
    CHECK(p.lower_solutions->contains(in));
    const Vector out = random_direction(5, rng) * (1.01 + 2.0 * i / 64.0);
    CHECK(ep_residual(*p.lower, p.set, out) > 0.0);
    CHECK_FALSE(p.lower_solutions->contains(out));
  }
}

TEST_CASE("registered problems pass their checks") {
  for (const auto& info : registered_problems()) {
    CAPTURE(info.name);
    const Problem p = make_problem(info.name, 4, 11);
    const auto rep = check_problem(p, 128, 2);
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.passed);
  }
  CHECK_THROWS_AS(make_problem("no-such-problem"), std::invalid_argument);
}

TEST_CASE("quadratic hierarchical instance") {
  const Problem p = quadratic_hierarchical(6, 3);
  CHECK(p.dim() == 6);
  REQUIRE(p.reference.has_value());
  const Vector c = *p.reference;
  CHECK(c.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(p.lower_solutions->contains(c));
  // Resolvent of the squared-distance difference: (w + lambda c) / (1 + lambda).
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const Vector w = random_uniform(6, -3, 3, rng);
    const double lambda = 0.1 + 0.2 * i;
    const Vector z = resolvent(*p.lower, p.set, lambda, w);
    CHECK((z - (w + lambda * c) / (1.0 + lambda)).norm() <= 1e-12);
  }
  CHECK(check_strong_monotone(*p.upper, p.set, 500, 1) >= 1.0 - 1e-9);
  // Same seed, same instance.
  CHECK(quadratic_hierarchical(6, 3).reference.value() == c);
  CHECK(quadratic_hierarchical(6, 4).reference.value() != c);
}

TEST_CASE("toy problem") {
  const Problem p = toy_1d();
  CHECK(p.dim() == 1);
  CHECK(p.reference->norm() == 0.0);
  CHECK(p.x0[0] == 1.0);
  CHECK(p.set.contains(p.x0));
  CHECK_FALSE(p.set.contains(Vector::Constant(1, 1.5)));
}

TEST_CASE("reference_solution solves the upper level over S_f") {
  // g(x, y) = <x - a, y - x> on the unit ball: the solution is the projection of a.
  Problem p = paper_r5();
  Vector a = Vector::Zero(5);
  a[0] = 3.0;
  a[1] = 4.0;
  p.upper = make_affine(Matrix::Identity(5, 5), Matrix::Zero(5, 5), -a);
  const Vector x = reference_solution(p);
  Vector expected = Vector::Zero(5);
  expected[0] = 0.6;
  expected[1] = 0.8;
  CHECK((x - expected).norm() <= 1e-9);

  Problem no_sf = p;
  no_sf.lower_solutions.reset();
  CHECK_THROWS(reference_solution(no_sf));
}
