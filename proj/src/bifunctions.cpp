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

#include "beq/bifunctions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "beq/resolvents.hpp"

namespace beq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// inf over R^d of y'Sy + q'y + k with S symmetric. nullopt when S is
// indefinite or singular with a nontrivial linear term we cannot resolve.
std::optional<double> unconstrained_quadratic_inf(const Matrix& s,
                                                  const Vector& q, double k) {
  const double scale = 1.0 + s.norm();
  if (s.norm() <= 1e-14 * scale) {
    if (q.norm() <= 1e-14 * (1.0 + q.norm())) return k;
    return -kInf;
  }
  const double lo = min_symmetric_eigenvalue(s);
  if (lo < -1e-12 * scale) return -kInf;
  if (lo <= 1e-12 * scale) return std::nullopt;
  const Eigen::LLT<Matrix> llt(s);
  const Vector sq = llt.solve(q);
  return k - 0.25 * q.dot(sq);
}

Vector central_difference(const std::function<double(const Vector&)>& fn,
                          const Vector& at) {
  Vector g(at.size());
  Vector probe = at;
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(at[i]));
    probe[i] = at[i] + h;
    const double up = fn(probe);
    probe[i] = at[i] - h;
    const double down = fn(probe);
    probe[i] = at[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

std::string to_string(ResolventStrategy s) {
  switch (s) {
    case ResolventStrategy::kClosedFormProx:
      return "closed_form_prox";
    case ResolventStrategy::kAffineLinearSolve:
      return "affine_linear_solve";
    case ResolventStrategy::kGenericIterative:
      return "generic_iterative";
  }
  return "unknown";
}

double ConvexFunction::conjugate(const Vector&) const {
  throw CapabilityError(name() + ": conjugate not available");
}

// ---------------------------------------------------------------- MaxOneNorm

double MaxOneNorm::value(const Vector& x) const { return std::max(1.0, x.norm()); }

Vector MaxOneNorm::prox(double t, const Vector& w) const {
  return prox_max_one_norm(t, w);
}

Vector MaxOneNorm::subgradient(const Vector& x) const {
  const double r = x.norm();
  if (r <= 1.0) return Vector::Zero(x.size());
  return x / r;
}

double MaxOneNorm::conjugate(const Vector& p) const {
  const double r = p.norm();
  return r <= 1.0 ? r - 1.0 : kInf;
}

std::optional<double> MaxOneNorm::infimum_over(const ConvexSet& set) const {
  // Radial: the smallest norm in K is attained at the projection of 0.
  return std::max(1.0, set.project(Vector::Zero(set.dim())).norm());
}

// ---------------------------------------------------------------- quadratic

ScaledSquaredDistance::ScaledSquaredDistance(Vector center, double kappa)
    : center_(std::move(center)), kappa_(kappa) {
  require_finite(center_, "ScaledSquaredDistance center");
  if (!(kappa_ > 0.0) || !std::isfinite(kappa_)) {
    throw std::invalid_argument("ScaledSquaredDistance: kappa must be positive");
  }
}

double ScaledSquaredDistance::value(const Vector& x) const {
  require_same_dim(center_.size(), x.size(), "ScaledSquaredDistance");
  return 0.5 * kappa_ * (x - center_).squaredNorm();
}

Vector ScaledSquaredDistance::prox(double t, const Vector& w) const {
  require_same_dim(center_.size(), w.size(), "ScaledSquaredDistance::prox");
  return (w + t * kappa_ * center_) / (1.0 + t * kappa_);
}

Vector ScaledSquaredDistance::subgradient(const Vector& x) const {
  return kappa_ * (x - center_);
}

double ScaledSquaredDistance::conjugate(const Vector& p) const {
  return p.dot(center_) + 0.5 * p.squaredNorm() / kappa_;
}

std::optional<double> ScaledSquaredDistance::infimum_over(
    const ConvexSet& set) const {
  return value(set.project(center_));
}

// ---------------------------------------------------------------- Bifunction

double Bifunction::eval(const Vector& x, const Vector& y) const {
  require_same_dim(dim_, x.size(), "Bifunction::eval x");
  require_same_dim(dim_, y.size(), "Bifunction::eval y");
  return eval_impl(x, y);
}

Vector Bifunction::diagonal_subgradient(const Vector&) const {
  throw CapabilityError(name() + ": diagonal subgradient not available");
}

Vector Bifunction::grad_second(const Vector& x, const Vector& y) const {
  return central_difference([&](const Vector& v) { return eval(x, v); }, y);
}

Vector Bifunction::grad_first(const Vector& x, const Vector& y) const {
  return central_difference([&](const Vector& v) { return eval(v, y); }, x);
}

MonotoneSplit Bifunction::split() const {
  if (!has_diagonal_subgradient()) {
    throw CapabilityError(name() +
                          ": generic resolvent needs a diagonal subgradient");
  }
  MonotoneSplit out;
  out.single_valued = [this](const Vector& y) { return diagonal_subgradient(y); };
  return out;
}

Vector diagonal_subgradient(const Bifunction& h, const Vector& y) {
  require_same_dim(h.dim(), y.size(), "diagonal_subgradient");
  if (!h.has_diagonal_subgradient()) {
    throw CapabilityError(h.name() + ": diagonal subgradient not available");
  }
  return h.diagonal_subgradient(y);
}

// ---------------------------------------------------------------- affine

AffineBifunction::AffineBifunction(Matrix a, Matrix b)
    : AffineBifunction(a, b, Vector::Zero(a.rows())) {}

AffineBifunction::AffineBifunction(Matrix a, Matrix b, Vector c)
    : Bifunction(a.rows()), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (a_.rows() != a_.cols() || b_.rows() != b_.cols()) {
    throw DimensionError("AffineBifunction: matrices must be square");
  }
  require_same_dim(a_.rows(), b_.rows(), "AffineBifunction B");
  require_same_dim(a_.rows(), c_.size(), "AffineBifunction c");
  if (a_.rows() < 1) throw DimensionError("AffineBifunction: empty matrices");
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite()) {
    throw NonFiniteError("AffineBifunction: non-finite data");
  }
  const Matrix sum = a_ + b_;
  lipschitz_ = sum.isZero(0.0)
                   ? 0.0
                   : Eigen::JacobiSVD<Matrix>(sum).singularValues()(0);
}

double AffineBifunction::eval_impl(const Vector& x, const Vector& y) const {
  return (a_ * x + b_ * y + c_).dot(y - x);
}

Vector AffineBifunction::diagonal_subgradient(const Vector& y) const {
  return (a_ + b_) * y + c_;
}

Vector AffineBifunction::grad_second(const Vector& x, const Vector& y) const {
  return a_ * x + b_ * y + c_ + b_.transpose() * (y - x);
}

Vector AffineBifunction::grad_first(const Vector& x, const Vector& y) const {
  return a_.transpose() * (y - x) - (a_ * x + b_ * y + c_);
}

MonotoneSplit AffineBifunction::split() const {
  MonotoneSplit out;
  const Matrix sum = a_ + b_;
  const Vector c = c_;
  out.single_valued = [sum, c](const Vector& y) -> Vector { return sum * y + c; };
  out.lipschitz = lipschitz_;
  return out;
}

std::optional<double> AffineBifunction::inf_second_over(
    const Vector& x, const ConvexSet& set) const {
  if (!set.is_whole_space()) return std::nullopt;
  const Matrix s = 0.5 * (b_ + b_.transpose());
  const Vector q = a_ * x + c_ - b_.transpose() * x;
  return unconstrained_quadratic_inf(s, q, -x.dot(a_ * x + c_));
}

std::optional<double> AffineBifunction::sup_first_over(
    const Vector& x, const ConvexSet& set) const {
  if (!set.is_whole_space()) return std::nullopt;
  const Matrix s = 0.5 * (a_ + a_.transpose());
  const Vector r = a_.transpose() * x - b_ * x - c_;
  const auto inf = unconstrained_quadratic_inf(s, -r, -x.dot(b_ * x + c_));
  if (!inf) return std::nullopt;
  return -*inf;
}

bool AffineBifunction::is_monotone(double tol) const {
  return is_positive_semidefinite(a_ - b_, tol);
}

// ---------------------------------------------------------------- difference

DifferenceBifunction::DifferenceBifunction(Eigen::Index dim, ConvexFunctionPtr phi)
    : Bifunction(dim), phi_(std::move(phi)) {
  if (!phi_) throw std::invalid_argument("DifferenceBifunction: null phi");
  if (dim < 1) throw DimensionError("DifferenceBifunction: dimension must be >= 1");
}

double DifferenceBifunction::eval_impl(const Vector& x, const Vector& y) const {
  return phi_->value(y) - phi_->value(x);
}

Vector DifferenceBifunction::diagonal_subgradient(const Vector& y) const {
  return phi_->subgradient(y);
}

Vector DifferenceBifunction::grad_second(const Vector&, const Vector& y) const {
  return phi_->subgradient(y);
}

Vector DifferenceBifunction::grad_first(const Vector& x, const Vector&) const {
  return -phi_->subgradient(x);
}

MonotoneSplit DifferenceBifunction::split() const {
  MonotoneSplit out;
  if (phi_->is_smooth()) {
    const ConvexFunctionPtr phi = phi_;
    out.single_valued = [phi](const Vector& y) { return phi->subgradient(y); };
    out.lipschitz = phi_->gradient_lipschitz();
  } else {
    out.nonsmooth.push_back({1.0, phi_});
  }
  return out;
}

std::optional<double> DifferenceBifunction::inf_second_over(
    const Vector& x, const ConvexSet& set) const {
  const auto inf = phi_->infimum_over(set);
  if (!inf) return std::nullopt;
  return *inf - phi_->value(x);
}

std::optional<double> DifferenceBifunction::sup_first_over(
    const Vector& x, const ConvexSet& set) const {
  const auto inf = phi_->infimum_over(set);
  if (!inf) return std::nullopt;
  return phi_->value(x) - *inf;
}

// ---------------------------------------------------------------- combined

namespace {
Eigen::Index combined_dim(const std::vector<WeightedBifunction>& terms) {
  if (terms.empty()) throw std::invalid_argument("CombinedBifunction: no terms");
  return terms.front().bifunction ? terms.front().bifunction->dim() : 0;
}
}  // namespace

CombinedBifunction::CombinedBifunction(std::vector<WeightedBifunction> terms)
    : Bifunction(combined_dim(terms)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!t.bifunction) throw std::invalid_argument("CombinedBifunction: null term");
    require_same_dim(dim(), t.bifunction->dim(), "CombinedBifunction term");
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
      throw std::invalid_argument("CombinedBifunction: weights must be finite and >= 0");
    }
  }
}

std::string CombinedBifunction::name() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    os << terms_[i].weight << "*" << terms_[i].bifunction->name();
  }
  return os.str();
}

double CombinedBifunction::eval_impl(const Vector& x, const Vector& y) const {
  double total = 0.0;
  for (const auto& t : terms_) {
    if (t.weight != 0.0) total += t.weight * t.bifunction->eval(x, y);
  }
  return total;
}

std::optional<AffineBifunction> CombinedBifunction::as_affine() const {
  const Eigen::Index d = dim();
  Matrix a = Matrix::Zero(d, d);
  Matrix b = Matrix::Zero(d, d);
  Vector c = Vector::Zero(d);
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    const auto* aff = dynamic_cast<const AffineBifunction*>(t.bifunction.get());
    if (aff == nullptr) return std::nullopt;
    a += t.weight * aff->a();
    b += t.weight * aff->b();
    c += t.weight * aff->c();
  }
  return AffineBifunction(std::move(a), std::move(b), std::move(c));
}

std::optional<std::pair<double, const DifferenceBifunction*>>
CombinedBifunction::as_scaled_difference() const {
  std::optional<std::pair<double, const DifferenceBifunction*>> found;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    const auto* diff = dynamic_cast<const DifferenceBifunction*>(t.bifunction.get());
    if (diff == nullptr || found) return std::nullopt;
    found = std::make_pair(t.weight, diff);
  }
  return found;
}

ResolventStrategy CombinedBifunction::strategy() const {
  if (as_scaled_difference()) return ResolventStrategy::kClosedFormProx;
  if (as_affine()) return ResolventStrategy::kAffineLinearSolve;
  return ResolventStrategy::kGenericIterative;
}

bool CombinedBifunction::has_diagonal_subgradient() const {
  for (const auto& t : terms_) {
    if (t.weight != 0.0 && !t.bifunction->has_diagonal_subgradient()) return false;
  }
  return true;
}

Vector CombinedBifunction::diagonal_subgradient(const Vector& y) const {
  Vector out = Vector::Zero(dim());
  for (const auto& t : terms_) {
    if (t.weight != 0.0) out += t.weight * t.bifunction->diagonal_subgradient(y);
  }
  return out;
}

Vector CombinedBifunction::grad_second(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim());
  for (const auto& t : terms_) {
    if (t.weight != 0.0) out += t.weight * t.bifunction->grad_second(x, y);
  }
  return out;
}

Vector CombinedBifunction::grad_first(const Vector& x, const Vector& y) const {
  Vector out = Vector::Zero(dim());
  for (const auto& t : terms_) {
    if (t.weight != 0.0) out += t.weight * t.bifunction->grad_first(x, y);
  }
  return out;
}

MonotoneSplit CombinedBifunction::split() const {
  std::vector<std::pair<double, std::function<Vector(const Vector&)>>> smooth;
  MonotoneSplit out;
  std::optional<double> lipschitz = 0.0;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    MonotoneSplit part = t.bifunction->split();
    if (part.single_valued) {
      smooth.emplace_back(t.weight, std::move(part.single_valued));
      if (lipschitz && part.lipschitz) {
        *lipschitz += t.weight * *part.lipschitz;
      } else {
        lipschitz.reset();
      }
    }
    for (auto& ns : part.nonsmooth) {
      out.nonsmooth.push_back({t.weight * ns.weight, std::move(ns.function)});
    }
  }
  if (!smooth.empty()) {
    const Eigen::Index d = dim();
    out.single_valued = [smooth, d](const Vector& y) {
      Vector total = Vector::Zero(d);
      for (const auto& [w, fn] : smooth) total += w * fn(y);
      return total;
    };
    out.lipschitz = lipschitz;
  }
  return out;
}

std::optional<double> CombinedBifunction::inf_second_over(
    const Vector& x, const ConvexSet& set) const {
  std::optional<std::pair<double, BifunctionPtr>> single;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    if (single) {
      if (const auto aff = as_affine()) return aff->inf_second_over(x, set);
      return std::nullopt;
    }
    single = std::make_pair(t.weight, t.bifunction);
  }
  if (!single) return 0.0;
  const auto inner = single->second->inf_second_over(x, set);
  if (!inner) return std::nullopt;
  return single->first * *inner;
}

std::optional<double> CombinedBifunction::sup_first_over(
    const Vector& x, const ConvexSet& set) const {
  std::optional<std::pair<double, BifunctionPtr>> single;
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    if (single) {
      if (const auto aff = as_affine()) return aff->sup_first_over(x, set);
      return std::nullopt;
    }
    single = std::make_pair(t.weight, t.bifunction);
  }
  if (!single) return 0.0;
  const auto inner = single->second->sup_first_over(x, set);
  if (!inner) return std::nullopt;
  return single->first * *inner;
}

// ---------------------------------------------------------------- factories

BifunctionPtr make_affine(Matrix a, Matrix b) {
  return std::make_shared<AffineBifunction>(std::move(a), std::move(b));
}

BifunctionPtr make_affine(Matrix a, Matrix b, Vector c) {
  return std::make_shared<AffineBifunction>(std::move(a), std::move(b), std::move(c));
}

BifunctionPtr make_difference(Eigen::Index dim, ConvexFunctionPtr phi) {
  return std::make_shared<DifferenceBifunction>(dim, std::move(phi));
}

BifunctionPtr make_combined(std::vector<WeightedBifunction> terms) {
  return std::make_shared<CombinedBifunction>(std::move(terms));
}

BifunctionPtr make_scaled(double weight, BifunctionPtr f) {
  return make_combined({{weight, std::move(f)}});
}

BifunctionPtr make_zero(Eigen::Index dim) {
  return make_affine(Matrix::Zero(dim, dim), Matrix::Zero(dim, dim));
}

// ---------------------------------------------------------------- checkers

MonotoneReport check_monotone(const Bifunction& h, const ConvexSet& set,
                              int samples, std::uint64_t seed, double scale) {
  if (samples < 1) throw std::invalid_argument("check_monotone: samples must be >= 1");
  require_same_dim(h.dim(), set.dim(), "check_monotone");
  Rng rng(seed);
  double worst = -kInf;
  for (int i = 0; i < samples; ++i) {
    const Vector x = set.sample(rng, scale);
    const Vector y = set.sample(rng, scale);
    worst = std::max(worst, h.eval(x, y) + h.eval(y, x));
  }
  return {worst, worst <= 1e-10};
}

double check_strong_monotone(const Bifunction& h, const ConvexSet& set,
                             int samples, std::uint64_t seed, double scale) {
  if (samples < 1) {
    throw std::invalid_argument("check_strong_monotone: samples must be >= 1");
  }
  require_same_dim(h.dim(), set.dim(), "check_strong_monotone");
  Rng rng(seed);
  double modulus = kInf;
  for (int i = 0; i < samples; ++i) {
    const Vector x = set.sample(rng, scale);
    const Vector y = set.sample(rng, scale);
    const double dist_sq = (x - y).squaredNorm();
    if (dist_sq < 1e-20) continue;
    modulus = std::min(modulus, -(h.eval(x, y) + h.eval(y, x)) / dist_sq);
  }
  return modulus;
}

}  // namespace beq
