#pragma once

#include "sip/vector.hpp"

#include <optional>
#include <vector>

namespace sip {

/// Raw description of a weighted l^p space. Validated by Space.
struct SpaceConfig {
  int dim = 1;
  double p = 2.0;
  /// Empty means all weights equal to one.
  std::vector<double> weights;
};

/// Finite-dimensional weighted l^p space, 1 < p < inf, with norm
///
///     ||x|| = (sum_i w_i |x_i|^p)^(1/p).
///
/// The space is uniformly convex and uniformly smooth, so its semi-inner
/// product is unique and is given in closed form by
///
///     [x, y] = ||y||^(2-p) sum_i w_i x_i |y_i|^(p-1) sgn(y_i).
///
/// The dual is weighted l^q with 1/p + 1/q = 1 and weights w_i^(1-q); a
/// DualVector a acts on z by sum_i a_i z_i.
///
/// Immutable after construction; every member is a pure function.
class Space {
 public:
  /// Throws InvalidArgument unless dim >= 1, 1 < p < inf, weights (if
  /// given) has dim entries, all finite and > 0.
  explicit Space(SpaceConfig config);
  Space(int dim, double p) : Space(SpaceConfig{dim, p, {}}) {}

  int dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent p / (p - 1).
  double q() const noexcept { return q_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  SpaceConfig config() const;

  double norm(const Vector& x) const;
  double dual_norm(const DualVector& a) const;

  /// Semi-inner product [x, y]: linear in x, homogeneous in y. [x, 0] = 0.
  double sip(const Vector& x, const Vector& y) const;

  /// x* with x*(y) = [y, x] and ||x*|| = ||x||.
  DualVector duality_map(const Vector& x) const;
  /// Unique y with duality_map(y) = a.
  Vector inverse_duality_map(const DualVector& a) const;

  /// Hessian of x -> ||x||^2 / 2. Only returned where it is bounded, i.e.
  /// p >= 2 and x != 0 (or p == 2); nullopt otherwise.
  std::optional<Eigen::MatrixXd> half_norm_squared_hessian(const Vector& x) const;
  /// Hessian of a -> ||a||_*^2 / 2; bounded iff q >= 2, i.e. p <= 2.
  std::optional<Eigen::MatrixXd> half_dual_norm_squared_hessian(const DualVector& a) const;

  /// a(z) = sum_i a_i z_i.
  double pair(const DualVector& a, const Vector& z) const;

  /// Throws InvalidArgument unless x has dim() finite entries.
  void check(const Vector& x) const;
  void check(const DualVector& a) const;

  Vector zero() const { return Vector::zero(dim_); }

 private:
  int dim_;
  double p_;
  double q_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd dual_weights_;  // w_i^(1-q)
};

}  // namespace sip
