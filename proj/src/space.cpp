#include "sip/space.hpp"

#include "sip/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sip {

namespace {

// |t|^e sgn(t)
inline double signed_pow(double t, double e) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), e), t);
}

// (sum_i w_i |v_i|^r)^(1/r), computed after scaling by max |v_i| so that
// neither tiny nor huge entries under/overflow.
double weighted_lr_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w, double r) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += w[i] * std::pow(std::abs(v[i]) / m, r);
  return m * std::pow(s, 1.0 / r);
}

// Hessian of v -> N(v)^2 / 2 with N(v) = (sum_i w_i |v_i|^r)^(1/r), r >= 2.
// With u = v / N and g_i = w_i |u_i|^(r-1) sgn(u_i) it is scale free:
//   H = (r - 1) diag(w_i |u_i|^(r-2)) + (2 - r) g g^T.
std::optional<Eigen::MatrixXd> half_square_hessian(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                                                   double r, double n) {
  const Eigen::Index d = v.size();
  if (r == 2.0) return Eigen::MatrixXd(w.asDiagonal());
  if (r < 2.0 || n == 0.0) return std::nullopt;
  Eigen::VectorXd diag(d), g(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double u = v[i] / n;
    diag[i] = (r - 1.0) * w[i] * std::pow(std::abs(u), r - 2.0);
    g[i] = w[i] * signed_pow(u, r - 1.0);
  }
  Eigen::MatrixXd h = (2.0 - r) * g * g.transpose();
  h.diagonal() += diag;
  return h;
}

}  // namespace

Space::Space(SpaceConfig config) : dim_(config.dim), p_(config.p) {
  if (dim_ < 1) throw InvalidArgument("space dimension must be >= 1, got " + std::to_string(dim_));
  if (!std::isfinite(p_) || !(p_ > 1.0))
    throw InvalidArgument("exponent p must lie in (1, inf), got " + std::to_string(p_));
  q_ = p_ / (p_ - 1.0);

  if (config.weights.empty()) {
    weights_ = Eigen::VectorXd::Ones(dim_);
  } else {
    if (static_cast<int>(config.weights.size()) != dim_)
      throw InvalidArgument("expected " + std::to_string(dim_) + " weights, got " +
                            std::to_string(config.weights.size()));
    weights_ = Eigen::Map<const Eigen::VectorXd>(config.weights.data(), dim_);
    for (double w : config.weights)
      if (!std::isfinite(w) || !(w > 0.0)) throw InvalidArgument("weights must be finite and > 0");
  }
  dual_weights_ = weights_.array().pow(1.0 - q_).matrix();
}

SpaceConfig Space::config() const {
  SpaceConfig c;
  c.dim = dim_;
  c.p = p_;
  c.weights.assign(weights_.data(), weights_.data() + dim_);
  return c;
}

void Space::check(const Vector& x) const {
  if (x.size() != dim_)
    throw InvalidArgument("vector has " + std::to_string(x.size()) + " coordinates, space has dim " +
                          std::to_string(dim_));
  if (!x.all_finite()) throw InvalidArgument("vector has non-finite coordinates");
}

void Space::check(const DualVector& a) const {
  if (a.size() != dim_)
    throw InvalidArgument("dual vector has " + std::to_string(a.size()) +
                          " coordinates, space has dim " + std::to_string(dim_));
  if (!a.all_finite()) throw InvalidArgument("dual vector has non-finite coordinates");
}

double Space::norm(const Vector& x) const {
  check(x);
  if (p_ == 2.0) return std::sqrt((weights_.array() * x.values().array().square()).sum());
  return weighted_lr_norm(x.values(), weights_, p_);
}

double Space::dual_norm(const DualVector& a) const {
  check(a);
  if (p_ == 2.0) return std::sqrt((a.values().array().square() / weights_.array()).sum());
  return weighted_lr_norm(a.values(), dual_weights_, q_);
}

double Space::pair(const DualVector& a, const Vector& z) const {
  check(a);
  check(z);
  return a.values().dot(z.values());
}

double Space::sip(const Vector& x, const Vector& y) const {
  check(x);
  if (p_ == 2.0) {
    check(y);
    return (weights_.array() * x.values().array() * y.values().array()).sum();
  }
  const double n = norm(y);
  if (n == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += weights_[i] * x[i] * signed_pow(y[i] / n, p_ - 1.0);
  return n * s;
}

DualVector Space::duality_map(const Vector& x) const {
  if (p_ == 2.0) {
    check(x);
    return DualVector(weights_.cwiseProduct(x.values()));
  }
  const double n = norm(x);
  DualVector a = DualVector::zero(dim_);
  if (n == 0.0) return a;
  for (int i = 0; i < dim_; ++i) a[i] = n * weights_[i] * signed_pow(x[i] / n, p_ - 1.0);
  return a;
}

std::optional<Eigen::MatrixXd> Space::half_norm_squared_hessian(const Vector& x) const {
  return half_square_hessian(x.values(), weights_, p_, norm(x));
}

std::optional<Eigen::MatrixXd> Space::half_dual_norm_squared_hessian(const DualVector& a) const {
  return half_square_hessian(a.values(), dual_weights_, q_, dual_norm(a));
}

Vector Space::inverse_duality_map(const DualVector& a) const {
  if (p_ == 2.0) {
    check(a);
    return Vector(a.values().cwiseQuotient(weights_));
  }
  const double n = dual_norm(a);
  Vector y = Vector::zero(dim_);
  if (n == 0.0) return y;
  for (int i = 0; i < dim_; ++i) y[i] = n * signed_pow(a[i] / (weights_[i] * n), q_ - 1.0);
  return y;
}

}  // namespace sip
