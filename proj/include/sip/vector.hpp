#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>

namespace sip {

/// Coordinate vector tagged with the side of the duality it lives on.
/// Primal and dual vectors share a representation but do not mix.
template <class Tag>
class Coords {
 public:
  Coords() = default;
  explicit Coords(Eigen::VectorXd values) : values_(std::move(values)) {}
  Coords(std::initializer_list<double> values) : values_(static_cast<Eigen::Index>(values.size())) {
    Eigen::Index i = 0;
    for (double v : values) values_[i++] = v;
  }
  explicit Coords(std::span<const double> values)
      : values_(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))) {}

  static Coords zero(Eigen::Index n) { return Coords(Eigen::VectorXd::Zero(n)); }
  static Coords unit(Eigen::Index n, Eigen::Index i) { return Coords(Eigen::VectorXd::Unit(n, i)); }

  Eigen::Index size() const noexcept { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  double& operator[](Eigen::Index i) { return values_[i]; }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd& values() noexcept { return values_; }

  bool is_zero() const { return (values_.array() == 0.0).all(); }
  bool all_finite() const { return values_.allFinite(); }

  Coords& operator+=(const Coords& o) { values_ += o.values_; return *this; }
  Coords& operator-=(const Coords& o) { values_ -= o.values_; return *this; }
  Coords& operator*=(double s) { values_ *= s; return *this; }
  Coords& operator/=(double s) { values_ /= s; return *this; }

  friend Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend Coords operator-(Coords a) { a.values_ = -a.values_; return a; }
  friend Coords operator*(Coords a, double s) { return a *= s; }
  friend Coords operator*(double s, Coords a) { return a *= s; }
  friend Coords operator/(Coords a, double s) { return a /= s; }
  friend bool operator==(const Coords& a, const Coords& b) {
    return a.size() == b.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

struct PrimalTag;
struct DualTag;

/// Element of the primal space B.
using Vector = Coords<PrimalTag>;
/// Element of the dual space B*, acting on a Vector by the plain pairing
/// sum_i a_i z_i.
using DualVector = Coords<DualTag>;

}  // namespace sip
