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

#ifndef BEQ_BIFUNCTIONS_HPP_
#define BEQ_BIFUNCTIONS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beq/core.hpp"

namespace beq {

class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ResolventStrategy { kClosedFormProx, kAffineLinearSolve, kGenericIterative };

std::string to_string(ResolventStrategy s);

/// Proper convex function on R^d with a closed-form proximal map.
class ConvexFunction {
 public:
  virtual ~ConvexFunction() = default;

  virtual std::string name() const = 0;
  virtual double value(const Vector& x) const = 0;
  // argmin_y t * value(y) + 0.5 * |y - w|^2, t > 0.
  virtual Vector prox(double t, const Vector& w) const = 0;
  // Some element of the subdifferential at x.
  virtual Vector subgradient(const Vector& x) const = 0;

  virtual bool has_conjugate() const { return false; }
  // Fenchel conjugate; may be +infinity.
  virtual double conjugate(const Vector& p) const;

  // True when subgradient() is a Lipschitz gradient.
  virtual bool is_smooth() const { return false; }
  virtual std::optional<double> gradient_lipschitz() const { return std::nullopt; }

  // inf over K of value(), when available in closed form.
  virtual std::optional<double> infimum_over(const ConvexSet& /*set*/) const {
    return std::nullopt;
  }
};

using ConvexFunctionPtr = std::shared_ptr<const ConvexFunction>;

/// phi(x) = max{1, |x|}
class MaxOneNorm final : public ConvexFunction {
 public:
  std::string name() const override { return "max_one_norm"; }
  double value(const Vector& x) const override;
  Vector prox(double t, const Vector& w) const override;
  Vector subgradient(const Vector& x) const override;
  bool has_conjugate() const override { return true; }
  // |p| - 1 on the unit ball, +infinity outside.
  double conjugate(const Vector& p) const override;
  std::optional<double> infimum_over(const ConvexSet& set) const override;
};

/// phi(x) = (kappa / 2) |x - c|^2, kappa > 0
class ScaledSquaredDistance final : public ConvexFunction {
 public:
  ScaledSquaredDistance(Vector center, double kappa = 1.0);

  std::string name() const override { return "scaled_squared_distance"; }
  double value(const Vector& x) const override;
  Vector prox(double t, const Vector& w) const override;
  Vector subgradient(const Vector& x) const override;
  bool has_conjugate() const override { return true; }
  double conjugate(const Vector& p) const override;
  bool is_smooth() const override { return true; }
  std::optional<double> gradient_lipschitz() const override { return kappa_; }
  std::optional<double> infimum_over(const ConvexSet& set) const override;

  const Vector& center() const { return center_; }
  double kappa() const { return kappa_; }

 private:
  Vector center_;
  double kappa_;
};

struct WeightedFunction {
  double weight;
  ConvexFunctionPtr function;
};

// Splitting of the diagonal operator y -> d f(y, .)(y) into a single-valued
// monotone map and a weighted sum of prox-friendly convex functions. The
// generic resolvent solver works on this form.
struct MonotoneSplit {
  std::function<Vector(const Vector&)> single_valued;  // empty means zero
  std::optional<double> lipschitz;                     // bound for single_valued
  std::vector<WeightedFunction> nonsmooth;
};

/// Real-valued bifunction f(x, y) on K x K.
///
/// Built-ins are equilibrium bifunctions: f(x, x) = 0 and f(x, .) convex.
/// Derived classes override the optional capabilities they support; the
/// defaults either throw CapabilityError or fall back to finite differences.
class Bifunction {
 public:
  explicit Bifunction(Eigen::Index dim) : dim_(dim) {}
  virtual ~Bifunction() = default;

  Eigen::Index dim() const { return dim_; }
  double eval(const Vector& x, const Vector& y) const;

  virtual std::string name() const = 0;
  virtual ResolventStrategy strategy() const {
    return ResolventStrategy::kGenericIterative;
  }

  virtual bool has_diagonal_subgradient() const { return false; }
  // v with f(y, z) >= <v, z - y> for all z.
  virtual Vector diagonal_subgradient(const Vector& y) const;

  // (Sub)gradients of the partial maps; central differences by default.
  virtual Vector grad_second(const Vector& x, const Vector& y) const;
  virtual Vector grad_first(const Vector& x, const Vector& y) const;

  virtual MonotoneSplit split() const;

  // inf over y in K of f(x, y), if known in closed form.
  virtual std::optional<double> inf_second_over(const Vector& /*x*/,
                                                const ConvexSet& /*set*/) const {
    return std::nullopt;
  }
  // sup over y in K of f(y, x), if known in closed form.
  virtual std::optional<double> sup_first_over(const Vector& /*x*/,
                                               const ConvexSet& /*set*/) const {
    return std::nullopt;
  }

 protected:
  virtual double eval_impl(const Vector& x, const Vector& y) const = 0;

 private:
  Eigen::Index dim_;
};

using BifunctionPtr = std::shared_ptr<const Bifunction>;

/// g(x, y) = <A x + B y + c, y - x>
class AffineBifunction final : public Bifunction {
 public:
  AffineBifunction(Matrix a, Matrix b);
  AffineBifunction(Matrix a, Matrix b, Vector c);

  std::string name() const override { return "affine"; }
  ResolventStrategy strategy() const override {
    return ResolventStrategy::kAffineLinearSolve;
  }
  bool has_diagonal_subgradient() const override { return true; }
  Vector diagonal_subgradient(const Vector& y) const override;
  Vector grad_second(const Vector& x, const Vector& y) const override;
  Vector grad_first(const Vector& x, const Vector& y) const override;
  MonotoneSplit split() const override;
  std::optional<double> inf_second_over(const Vector& x,
                                        const ConvexSet& set) const override;
  std::optional<double> sup_first_over(const Vector& x,
                                       const ConvexSet& set) const override;

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Vector& c() const { return c_; }
  // g(x,y) + g(y,x) = -|x - y|^2_{A-B}; monotone iff A - B is PSD.
  bool is_monotone(double tol = 1e-10) const;

 protected:
  double eval_impl(const Vector& x, const Vector& y) const override;

 private:
  Matrix a_;
  Matrix b_;
  Vector c_;
  double lipschitz_;
};

/// f(x, y) = phi(y) - phi(x)
class DifferenceBifunction final : public Bifunction {
 public:
  DifferenceBifunction(Eigen::Index dim, ConvexFunctionPtr phi);

  std::string name() const override { return "difference(" + phi_->name() + ")"; }
  ResolventStrategy strategy() const override {
    return ResolventStrategy::kClosedFormProx;
  }
  bool has_diagonal_subgradient() const override { return true; }
  Vector diagonal_subgradient(const Vector& y) const override;
  Vector grad_second(const Vector& x, const Vector& y) const override;
  Vector grad_first(const Vector& x, const Vector& y) const override;
  MonotoneSplit split() const override;
  std::optional<double> inf_second_over(const Vector& x,
                                        const ConvexSet& set) const override;
  std::optional<double> sup_first_over(const Vector& x,
                                       const ConvexSet& set) const override;

  const ConvexFunction& phi() const { return *phi_; }
  const ConvexFunctionPtr& phi_ptr() const { return phi_; }

 protected:
  double eval_impl(const Vector& x, const Vector& y) const override;

 private:
  ConvexFunctionPtr phi_;
};

struct WeightedBifunction {
  double weight;
  BifunctionPtr bifunction;
};

/// sum_i w_i f_i(x, y), w_i >= 0
class CombinedBifunction final : public Bifunction {
 public:
  explicit CombinedBifunction(std::vector<WeightedBifunction> terms);

  std::string name() const override;
  ResolventStrategy strategy() const override;
  bool has_diagonal_subgradient() const override;
  Vector diagonal_subgradient(const Vector& y) const override;
  Vector grad_second(const Vector& x, const Vector& y) const override;
  Vector grad_first(const Vector& x, const Vector& y) const override;
  MonotoneSplit split() const override;
  std::optional<double> inf_second_over(const Vector& x,
                                        const ConvexSet& set) const override;
  std::optional<double> sup_first_over(const Vector& x,
                                       const ConvexSet& set) const override;

  const std::vector<WeightedBifunction>& terms() const { return terms_; }

  // All terms affine: the weighted sum as a single affine bifunction.
  std::optional<AffineBifunction> as_affine() const;
  // Exactly one difference term with positive weight: (weight, term).
  std::optional<std::pair<double, const DifferenceBifunction*>> as_scaled_difference()
      const;

 protected:
  double eval_impl(const Vector& x, const Vector& y) const override;

 private:
  std::vector<WeightedBifunction> terms_;
};

BifunctionPtr make_affine(Matrix a, Matrix b);
BifunctionPtr make_affine(Matrix a, Matrix b, Vector c);
BifunctionPtr make_difference(Eigen::Index dim, ConvexFunctionPtr phi);
BifunctionPtr make_combined(std::vector<WeightedBifunction> terms);
// w * f as a one-term combination.
BifunctionPtr make_scaled(double weight, BifunctionPtr f);
// f == 0, realized as the affine bifunction with zero matrices.
BifunctionPtr make_zero(Eigen::Index dim);

Vector diagonal_subgradient(const Bifunction& h, const Vector& y);

struct MonotoneReport {
  double max_sum;  // max over sampled pairs of f(x,y) + f(y,x)
  bool passed;     // max_sum <= 1e-10
};

MonotoneReport check_monotone(const Bifunction& h, const ConvexSet& set,
                              int samples, std::uint64_t seed,
                              double scale = 4.0);

// min over sampled pairs of -(f(x,y) + f(y,x)) / |x - y|^2
double check_strong_monotone(const Bifunction& h, const ConvexSet& set,
                             int samples, std::uint64_t seed,
                             double scale = 4.0);

}  // namespace beq

#endif  // BEQ_BIFUNCTIONS_HPP_
