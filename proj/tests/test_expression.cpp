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

#include "beq/expression.hpp"

using namespace beq;

namespace {
double eval(const std::string& s, double n) { return Expression::parse(s)(n); }
}  // namespace

TEST_CASE("arithmetic") {
  CHECK(eval("1/n", 4) == 0.25);
  CHECK(eval("1+n", 4) == 5.0);
  CHECK(eval("0.1-1/n", 10) == doctest::Approx(0.0));
  CHECK(eval("2*n - 3", 5) == 7.0);
  CHECK(eval("(1+n)*(1-n)", 3) == -8.0);
  CHECK(eval("n^2", 7) == 49.0);
  CHECK(eval("2^3^2", 0) == 512.0);  // right associative
  CHECK(eval("-n", 2) == -2.0);
  CHECK(eval("+n", 2) == 2.0);
  CHECK(eval("--n", 2) == 2.0);
  CHECK(eval("1e-3*n", 1000) == doctest::Approx(1.0));
  CHECK(eval("  n  ", 9) == 9.0);
  CHECK(eval("n^0.5", 16) == 4.0);
}

TEST_CASE("functions and constants") {
  CHECK(eval("log(e)", 0) == doctest::Approx(1.0));
  CHECK(eval("sqrt(n)", 9) == 3.0);
  CHECK(eval("exp(0)", 0) == 1.0);
  CHECK(eval("abs(-n)", 3) == 3.0);
  CHECK(eval("min(1, n, 0.5)", 3) == 0.5);
  CHECK(eval("max(1, n)", 3) == 3.0);
  CHECK(eval("pi", 0) == doctest::Approx(M_PI));
  CHECK(eval("1/(n*log(n+1))", 1) == doctest::Approx(1.0 / std::log(2.0)));
}

TEST_CASE("parse errors") {
  const char* bad[] = {"", "1/", "foo(n)", "n n", "(1", "1)", "min(1)", "log(1,2)", "x", "1..2", "sqrt()"};
  for (const char* s : bad) {
    CAPTURE(s);
    CHECK_THROWS_AS(Expression::parse(s), ExpressionError);
  }
  try {
    Expression::parse("1 + * 2");
    FAIL("expected an error");
  } catch (const ExpressionError& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("schedules from expressions") {
  const Schedule s = schedule_from_expressions("1/n", "1+n", "0.1-1/n");
  CHECK(s.lambda(2) == 0.5);
  CHECK(s.beta(2) == 3.0);
  CHECK(s.alpha(1) == 0.0);  // negative raw value clamped
  CHECK(s.alpha(20) == doctest::Approx(0.05));
  CHECK(Expression::parse("n^2").text() == "n^2");
  const auto seq = Expression::parse("2*n").as_sequence();
  CHECK(seq(21) == 42.0);
  CHECK_THROWS_AS(schedule_from_expressions("1/n", "1+", "0"), ExpressionError);
}
