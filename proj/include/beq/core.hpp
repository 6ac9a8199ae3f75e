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

#ifndef BEQ_CORE_HPP_
#define BEQ_CORE_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace beq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Deterministic generator used by every sampling routine in the library.
using Rng = std::mt19937_64;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_same_dim(Eigen::Index expected, Eigen::Index actual,
                      const char* what);
// Throws NonFiniteError if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

struct WholeSpace {
  Eigen::Index dim;
};

struct Ball {
  Vector center;
  double radius;
};

struct Box {
  Vector lower;
  Vector upper;
};

// { y : <normal, y> <= offset }
struct Halfspace {
  Vector normal;
  double offset;
};

/// Closed convex subset of R^d with an exact Euclidean projection.
///
/// Construct through the named factories, which validate the invariants
/// (positive radius, ordered box bounds, nonzero halfspace normal).
class ConvexSet {
 public:
  using Variant = std::variant<WholeSpace, Ball, Box, Halfspace>;

  static ConvexSet whole_space(Eigen::Index dim);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet halfspace(Vector normal, double offset);

  Eigen::Index dim() const;
  const Variant& variant() const { return set_; }
  bool is_whole_space() const {
    return std::holds_alternative<WholeSpace>(set_);
  }
  bool is_bounded() const;
  std::string describe() const;

  Vector project(const Vector& x) const;
  // sup over the set of <p, y>; +infinity when unbounded in direction p.
  double support_function(const Vector& p) const;
  bool contains(const Vector& x, double tol = 1e-10) const;
  double distance(const Vector& x) const;

  // Nearest point to v in the normal cone N(x) of the set at x. Assumes x is
  // in the set; returns 0 at interior points.
  Vector project_normal_cone(const Vector& x, const Vector& v) const;

  // Random point of the set. Unbounded directions are sampled from
  // [-scale, scale] around the origin before projecting.
  Vector sample(Rng& rng, double scale = 4.0) const;

 private:
  explicit ConvexSet(Variant v) : set_(std::move(v)) {}
  Variant set_;
};

Vector project(const ConvexSet& set, const Vector& x);
double support_function(const ConvexSet& set, const Vector& p);

// Dense LU with partial pivoting. Throws SingularMatrixError when a pivot
// falls below pivot_threshold times the largest row norm of m.
Vector solve_linear(const Matrix& m, const Vector& b,
                    double pivot_threshold = 1e-12);

// <M v, v>
double weighted_norm_sq(const Matrix& m, const Vector& v);

// Symmetrizes m first, then checks its smallest eigenvalue against -tol.
bool is_positive_semidefinite(const Matrix& m, double tol = 1e-10);
double min_symmetric_eigenvalue(const Matrix& m);

// Uniform sample on the unit sphere of R^d.
Vector random_direction(Eigen::Index dim, Rng& rng);
Vector random_uniform(Eigen::Index dim, double lo, double hi, Rng& rng);

}  // namespace beq

#endif  // BEQ_CORE_HPP_
