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

#include "beq/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "beq/diagnostics.hpp"

namespace beq {
namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

double certificate_min(const Bifunction& g, const ConvexSet& s_f, const Vector& x,
                       int samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) worst = std::min(worst, g.eval(x, s_f.sample(rng)));
  return worst;
}

}  // namespace

const Matrix& paper_r5_a() {
  static const Matrix a = from_rows({{7, 3, 0, 1, 1},
                                     {3, 9, 1, 5, 4},
                                     {0, 1, 10, 3, -4},
                                     {1, 5, 3, 9, -1},
                                     {1, 4, -4, -1, 9}});
  return a;
}

const Matrix& paper_r5_b() {
  static const Matrix b = from_rows({{5, 3, -1, 1, 2},
                                     {3, 6, 1, 4, 3},
                                     {-1, 1, 7, 2, -3},
                                     {1, 4, 2, 7, -2},
                                     {2, 3, -3, -2, 7}});
  return b;
}

Problem paper_r5() {
  constexpr Eigen::Index d = 5;
  Problem p{
      .name = "paper-r5",
      .set = ConvexSet::whole_space(d),
      .lower = make_difference(d, std::make_shared<MaxOneNorm>()),
      .upper = make_affine(paper_r5_a(), paper_r5_b()),
      .lower_solutions = ConvexSet::ball(Vector::Zero(d), 1.0),
      .reference = std::nullopt,
      .x0 = Vector::Ones(d),
      .x1 = Vector::Ones(d),
  };
  // g(0, y) = <By, y>: the origin solves the upper level on the ball exactly
  // when B is positive semidefinite. Otherwise fall back to the iterative oracle.
  ReferenceOptions opt;
  Vector candidate = Vector::Zero(d);
  if (!is_positive_semidefinite(paper_r5_b()) ||
      certificate_min(*p.upper, *p.lower_solutions, candidate,
                      opt.certificate_samples, opt.seed) < -10.0 * opt.tol) {
    candidate = reference_solution(p, opt);
  }
  p.reference = candidate;
  return p;
}

Vector reference_solution(const Problem& problem, const ReferenceOptions& options) {
  if (!problem.lower_solutions) {
    throw OracleError("reference_solution: S_f is not known for " + problem.name);
  }
  if (!problem.upper || !problem.upper->has_diagonal_subgradient()) {
    throw OracleError("reference_solution: g has no diagonal subgradient");
  }
  const ConvexSet& s_f = *problem.lower_solutions;
  const Bifunction& g = *problem.upper;
  auto field = [&](const Vector& y) { return g.diagonal_subgradient(y); };

  double lipschitz = 0.0;
  if (const auto split = g.split(); split.lipschitz && split.nonsmooth.empty()) {
    lipschitz = *split.lipschitz;
  } else {
    Rng rng(options.seed);
    for (int i = 0; i < 64; ++i) {
      const Vector u = s_f.sample(rng);
      const Vector v = s_f.sample(rng);
      const double dist = (u - v).norm();
      if (dist > 0.0) lipschitz = std::max(lipschitz, (field(u) - field(v)).norm() / dist);
    }
  }
  const double tau = 0.5 / std::max(lipschitz, 1e-12);

  Vector x = s_f.project(problem.x1);
  double residual = std::numeric_limits<double>::infinity();
  for (long k = 0; k < options.budget; ++k) {
    residual = (x - s_f.project(x - field(x))).norm();
    if (residual <= options.tol) break;
    const Vector y = s_f.project(x - tau * field(x));
    x = s_f.project(x - tau * field(y));
  }
  if (!(residual <= options.tol)) {
    std::ostringstream os;
    os << "reference_solution: no convergence in " << options.budget
       << " iterations (residual " << residual << ")";
    throw OracleError(os.str());
  }
  const double worst =
      certificate_min(g, s_f, x, options.certificate_samples, options.seed);
  if (worst < -10.0 * options.tol) {
    std::ostringstream os;
    os << "reference_solution: certificate failed (min g(x, y) = " << worst << ")";
    throw OracleError(os.str());
  }
  return x;
}

Problem quadratic_hierarchical(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("quadratic_hierarchical: dim must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
    }
    return m;
  };
  const Matrix n_mat = gaussian(dim, dim) / std::sqrt(static_cast<double>(dim));
  const Matrix m_mat = gaussian(dim, dim) / std::sqrt(static_cast<double>(dim));
  const Matrix b = n_mat * n_mat.transpose();
  const Matrix a = b + m_mat * m_mat.transpose() + Matrix::Identity(dim, dim);
  const Vector center = random_uniform(dim, -1.0, 1.0, rng);
  const Vector start = center + random_uniform(dim, -2.0, 2.0, rng);

  std::ostringstream name;
  name << "quadratic-hierarchical(d=" << dim << ",seed=" << seed << ")";
  return Problem{
      .name = name.str(),
      .set = ConvexSet::whole_space(dim),
      .lower = make_difference(dim, std::make_shared<ScaledSquaredDistance>(center, 1.0)),
      .upper = make_affine(a, b),
      .lower_solutions = ConvexSet::box(center, center),
      .reference = center,
      .x0 = start,
      .x1 = start,
  };
}

Problem toy_1d() {
  const Vector zero = Vector::Zero(1);
  return Problem{
      .name = "toy-1d",
      .set = ConvexSet::box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)),
      .lower = make_difference(1, std::make_shared<ScaledSquaredDistance>(zero, 2.0)),
      .upper = make_affine(Matrix::Identity(1, 1), Matrix::Zero(1, 1),
                           Vector::Constant(1, -0.5)),
      .lower_solutions = ConvexSet::box(zero, zero),
      .reference = zero,
      .x0 = Vector::Constant(1, 1.0),
      .x1 = Vector::Constant(1, 1.0),
  };
}

const std::vector<ProblemInfo>& registered_problems() {
  static const std::vector<ProblemInfo> infos{
      {"paper-r5",
       "R^5, g(x,y) = <Ax+By, y-x>, f(x,y) = max{1,|y|} - max{1,|x|}, S_f = unit ball"},
      {"quadratic-hierarchical",
       "R^d, f from (1/2)|x-c|^2 (S_f = {c}), random strongly monotone affine g"},
      {"toy-1d", "K = [-1,1], f from x^2, g(x,y) = (x-0.5)(y-x), solution 0"},
  };
  return infos;
}

Problem make_problem(const std::string& name, Eigen::Index dim, std::uint64_t seed) {
  if (name == "paper-r5") return paper_r5();
  if (name == "quadratic-hierarchical") return quadratic_hierarchical(dim, seed);
  if (name == "toy-1d") return toy_1d();
  throw std::invalid_argument("unknown problem '" + name + "'");
}

ProblemCheck check_problem(const Problem& problem, int samples, std::uint64_t seed) {
  ProblemCheck out;
  auto fail = [&](std::string msg) {
    out.passed = false;
    out.failures.push_back(std::move(msg));
  };
  if (!problem.lower || !problem.upper) {
    fail("missing bifunction");
    return out;
  }
  if (!check_monotone(*problem.lower, problem.set, samples, seed).passed) {
    fail("f is not monotone on sampled pairs");
  }
  if (!check_monotone(*problem.upper, problem.set, samples, seed + 1).passed) {
    fail("g is not monotone on sampled pairs");
  }
  if (!problem.set.contains(problem.x0)) fail("x0 is not in K");
  if (!problem.set.contains(problem.x1)) fail("x1 is not in K");
  if (problem.reference) {
    const Vector& x = *problem.reference;
    const double r = ep_residual(*problem.lower, problem.set, x, seed);
    if (r > 1e-6) fail("ep_residual at the reference point is " + std::to_string(r));
    if (problem.lower_solutions) {
      const double worst =
          certificate_min(*problem.upper, *problem.lower_solutions, x, samples, seed);
      if (worst < -1e-6) {
        fail("g(x_ref, y) < 0 on S_f: " + std::to_string(worst));
      }
    }
  }
  return out;
}

}  // namespace beq
