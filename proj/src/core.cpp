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

#include "beq/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace beq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Points already within this relative slack of the boundary are returned
// unchanged, so that projecting a projected point is the identity.
constexpr double kBoundarySlack = 1e-14;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void require_same_dim(Eigen::Index expected, Eigen::Index actual,
                      const char* what) {
  if (expected != actual) {
    std::ostringstream os;
    os << what << ": dimension mismatch (expected " << expected << ", got "
       << actual << ")";
    throw DimensionError(os.str());
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NonFiniteError(std::string(what) + ": non-finite entry");
  }
}

ConvexSet ConvexSet::whole_space(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("WholeSpace: dimension must be >= 1");
  return ConvexSet(WholeSpace{dim});
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("Ball: empty center");
  require_finite(center, "Ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("Ball: radius must be positive and finite");
  }
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  require_same_dim(lower.size(), upper.size(), "Box bounds");
  if (lower.size() < 1) throw std::invalid_argument("Box: empty bounds");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i])) {
      throw std::invalid_argument("Box: NaN bound");
    }
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("Box: lower bound exceeds upper bound");
    }
    if (lower[i] == kInf || upper[i] == -kInf) {
      throw std::invalid_argument("Box: empty component");
    }
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  if (normal.size() < 1) throw std::invalid_argument("Halfspace: empty normal");
  require_finite(normal, "Halfspace normal");
  if (normal.norm() == 0.0) {
    throw std::invalid_argument("Halfspace: normal must be nonzero");
  }
  if (!std::isfinite(offset)) {
    throw std::invalid_argument("Halfspace: offset must be finite");
  }
  return ConvexSet(Halfspace{std::move(normal), offset});
}

Eigen::Index ConvexSet::dim() const {
  return std::visit(Overloaded{
                        [](const WholeSpace& s) { return s.dim; },
                        [](const Ball& s) { return s.center.size(); },
                        [](const Box& s) { return s.lower.size(); },
                        [](const Halfspace& s) { return s.normal.size(); },
                    },
                    set_);
}

bool ConvexSet::is_bounded() const {
  return std::visit(Overloaded{
                        [](const WholeSpace&) { return false; },
                        [](const Ball&) { return true; },
                        [](const Box& s) {
                          return s.lower.allFinite() && s.upper.allFinite();
                        },
                        [](const Halfspace&) { return false; },
                    },
                    set_);
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const WholeSpace& s) { os << "WholeSpace(" << s.dim << ")"; },
                 [&](const Ball& s) {
                   os << "Ball(dim=" << s.center.size() << ", r=" << s.radius
                      << ")";
                 },
                 [&](const Box& s) { os << "Box(dim=" << s.lower.size() << ")"; },
                 [&](const Halfspace& s) {
                   os << "Halfspace(dim=" << s.normal.size()
                      << ", b=" << s.offset << ")";
                 },
             },
             set_);
  return os.str();
}

Vector ConvexSet::project(const Vector& x) const {
  require_same_dim(dim(), x.size(), "project");
  require_finite(x, "project");
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) -> Vector { return x; },
          [&](const Ball& s) -> Vector {
            const Vector d = x - s.center;
            const double r = d.norm();
            if (r <= s.radius * (1.0 + kBoundarySlack)) return x;
            return s.center + (s.radius / r) * d;
          },
          [&](const Box& s) -> Vector {
            return x.cwiseMax(s.lower).cwiseMin(s.upper);
          },
          [&](const Halfspace& s) -> Vector {
            const double excess = s.normal.dot(x) - s.offset;
            const double scale =
                std::abs(s.offset) + s.normal.norm() * x.norm();
            if (excess <= kBoundarySlack * scale) return x;
            return x - (excess / s.normal.squaredNorm()) * s.normal;
          },
      },
      set_);
}

double ConvexSet::support_function(const Vector& p) const {
  require_same_dim(dim(), p.size(), "support_function");
  if (p.isZero(0.0)) return 0.0;
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) { return kInf; },
          [&](const Ball& s) { return s.center.dot(p) + s.radius * p.norm(); },
          [&](const Box& s) {
            double total = 0.0;
            for (Eigen::Index i = 0; i < p.size(); ++i) {
              if (p[i] > 0.0) {
                total += p[i] * s.upper[i];
              } else if (p[i] < 0.0) {
                total += p[i] * s.lower[i];
              }
            }
            return total;
          },
          [&](const Halfspace& s) {
            // Finite only along the outward normal ray.
            const double t = p.dot(s.normal) / s.normal.squaredNorm();
            const double off_ray = (p - t * s.normal).norm();
            if (t < 0.0 || off_ray > 1e-12 * p.norm()) return kInf;
            return t * s.offset;
          },
      },
      set_);
}

double ConvexSet::distance(const Vector& x) const {
  return (x - project(x)).norm();
}

bool ConvexSet::contains(const Vector& x, double tol) const {
  return distance(x) <= tol;
}

Vector ConvexSet::project_normal_cone(const Vector& x, const Vector& v) const {
  require_same_dim(dim(), x.size(), "project_normal_cone");
  require_same_dim(dim(), v.size(), "project_normal_cone");
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) -> Vector { return Vector::Zero(v.size()); },
          [&](const Ball& s) -> Vector {
            const Vector d = x - s.center;
            const double r = d.norm();
            if (r < s.radius * (1.0 - 1e-12)) return Vector::Zero(v.size());
            const Vector n = d / r;
            return std::max(0.0, v.dot(n)) * n;
          },
          [&](const Box& s) -> Vector {
            Vector out = Vector::Zero(v.size());
            for (Eigen::Index i = 0; i < v.size(); ++i) {
              const bool at_lo =
                  std::abs(x[i] - s.lower[i]) <= 1e-12 * (1.0 + std::abs(s.lower[i]));
              const bool at_hi =
                  std::abs(x[i] - s.upper[i]) <= 1e-12 * (1.0 + std::abs(s.upper[i]));
              if (at_lo && at_hi) {
                out[i] = v[i];
              } else if (at_lo) {
                out[i] = std::min(v[i], 0.0);
              } else if (at_hi) {
                out[i] = std::max(v[i], 0.0);
              }
            }
            return out;
          },
          [&](const Halfspace& s) -> Vector {
            const double gap = s.offset - s.normal.dot(x);
            if (gap > 1e-12 * (1.0 + std::abs(s.offset))) {
              return Vector::Zero(v.size());
            }
            const Vector n = s.normal.normalized();
            return std::max(0.0, v.dot(n)) * n;
          },
      },
      set_);
}

Vector ConvexSet::sample(Rng& rng, double scale) const {
  const Eigen::Index d = dim();
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) -> Vector {
            return random_uniform(d, -scale, scale, rng);
          },
          [&](const Ball& s) -> Vector {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const double radial =
                s.radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
            return s.center + radial * random_direction(d, rng);
          },
          [&](const Box& s) -> Vector {
            Vector out(d);
            for (Eigen::Index i = 0; i < d; ++i) {
              double lo = s.lower[i];
              double hi = s.upper[i];
              if (!std::isfinite(lo) && !std::isfinite(hi)) {
                lo = -scale;
                hi = scale;
              } else if (!std::isfinite(lo)) {
                lo = hi - 2.0 * scale;
              } else if (!std::isfinite(hi)) {
                hi = lo + 2.0 * scale;
              }
              std::uniform_real_distribution<double> dist(lo, hi);
              out[i] = lo == hi ? lo : dist(rng);
            }
            return out;
          },
          [&](const Halfspace&) -> Vector {
            return project(random_uniform(d, -scale, scale, rng));
          },
      },
      set_);
}

Vector project(const ConvexSet& set, const Vector& x) { return set.project(x); }

double support_function(const ConvexSet& set, const Vector& p) {
  return set.support_function(p);
}

Vector solve_linear(const Matrix& m, const Vector& b, double pivot_threshold) {
  if (m.rows() != m.cols()) throw DimensionError("solve_linear: matrix not square");
  require_same_dim(m.rows(), b.size(), "solve_linear");
  require_finite(b, "solve_linear rhs");
  const double max_row = m.rowwise().norm().maxCoeff();
  if (!(max_row > 0.0)) throw SingularMatrixError("solve_linear: zero matrix");
  const Eigen::PartialPivLU<Matrix> lu(m);
  const Vector pivots = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < pivots.size(); ++i) {
    if (std::abs(pivots[i]) < pivot_threshold * max_row) {
      std::ostringstream os;
      os << "solve_linear: pivot " << i << " has magnitude "
         << std::abs(pivots[i]) << " below threshold";
      throw SingularMatrixError(os.str());
    }
  }
  Vector z = lu.solve(b);
  require_finite(z, "solve_linear solution");
  return z;
}

double weighted_norm_sq(const Matrix& m, const Vector& v) {
  if (m.rows() != m.cols()) throw DimensionError("weighted_norm_sq: matrix not square");
  require_same_dim(m.cols(), v.size(), "weighted_norm_sq");
  return (m * v).dot(v);
}

double min_symmetric_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix not square");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_positive_semidefinite(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.size() == 0 || !m.allFinite()) return false;
  return min_symmetric_eigenvalue(m) >= -tol;
}

Vector random_direction(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Vector random_uniform(Eigen::Index dim, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace beq
