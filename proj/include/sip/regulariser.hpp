#pragma once

#include "sip/exec.hpp"
#include "sip/space.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sip {

/// Non-decreasing h: [0, inf) -> [0, inf) defining the radial regulariser
/// Omega(f) = h([f, f]) = h(||f||^2).
///
/// Two families:
///   power(alpha):  h(t) = t^alpha, alpha > 0.
///   piecewise:     radii 0 < r_1 < ... < r_K split [0, inf) into K + 1
///                  segments; on segment k (r_k < ||f|| < r_{k+1}, r_0 = 0)
///                    h = values[k] + slopes[k] * (||f||^2 - r_k^2),
///                  and on the circle ||f|| = r_k the value is at_jump[k-1].
///                  h may jump upward at any r_k; at_jump must lie between
///                  the one-sided limits there.
class RadialProfile {
 public:
  struct Power {
    double alpha;
  };
  struct Piecewise {
    std::vector<double> knots;
    std::vector<double> values;
    std::vector<double> slopes;
    std::vector<double> at_jump;
  };

  /// Throws InvalidArgument unless alpha is finite and > 0.
  static RadialProfile power(double alpha);
  /// Empty slopes mean all zero (plateaus); empty at_jump means the midpoint
  /// of the one-sided limits. Throws InvalidArgument if the data do not
  /// describe a non-decreasing, non-negative profile.
  static RadialProfile piecewise(std::vector<double> knots, std::vector<double> values,
                                 std::vector<double> slopes = {}, std::vector<double> at_jump = {});

  /// h(s^2) for a radius s >= 0. Exact at the knot radii.
  double at_radius(double s) const;
  /// h(t), t = [f, f] >= 0.
  double operator()(double t) const;

  /// lim h as ||f|| increases (decreases) to knot k.
  double left_limit(std::size_t k) const;
  double right_limit(std::size_t k) const;

  /// Radii where h is not smooth (knots of a piecewise profile).
  std::vector<double> breakpoints() const;
  /// Radii where h actually jumps.
  std::vector<double> jump_radii() const;

  bool is_power() const { return std::holds_alternative<Power>(data_); }
  const Power* as_power() const { return std::get_if<Power>(&data_); }
  const Piecewise* as_piecewise() const { return std::get_if<Piecewise>(&data_); }
  std::string describe() const;

 private:
  explicit RadialProfile(std::variant<Power, Piecewise> d) : data_(std::move(d)) {}
  std::variant<Power, Piecewise> data_;
};

/// Omega: B -> [0, inf). Either radial (given by a RadialProfile) or an
/// arbitrary function, the latter mostly to host non-admissible examples.
class Regulariser {
 public:
  using Function = std::function<double(const Space&, const Vector&)>;

  static Regulariser radial(RadialProfile profile);
  static Regulariser custom(Function fn, std::string label);
  /// Named custom regularisers usable from the command line:
  ///   "abs_first_coord": Omega(f) = |f_1|.
  static Regulariser builtin(std::string_view name);
  static std::vector<std::string> builtin_names();

  bool is_radial() const { return profile_.has_value(); }
  const RadialProfile* profile() const { return profile_ ? &*profile_ : nullptr; }
  const std::string& label() const { return label_; }

  /// Radial: h(||f||^2). Custom: calls through and throws
  /// InvalidArgument("invalid regulariser output") on a negative or
  /// non-finite value.
  double evaluate(const Space& space, const Vector& f) const;

 private:
  Regulariser() = default;
  std::optional<RadialProfile> profile_;
  Function fn_;
  std::string label_;
};

inline double evaluate(const Regulariser& reg, const Space& space, const Vector& f) {
  return reg.evaluate(space, f);
}

enum class Verdict { pass, counterexample };
std::string to_string(Verdict v);

/// f, f_T with [f_T, f] = 0 and Omega(f) > Omega(f + f_T).
struct TangentWitness {
  Vector f;
  Vector f_t;
  double omega_f = 0.0;
  double omega_f_plus_t = 0.0;
};

/// f_hat, f with ||f_hat|| < ||f|| and Omega(f_hat) > Omega(f).
struct NormWitness {
  Vector f_hat;
  Vector f;
  double omega_f_hat = 0.0;
  double omega_f = 0.0;
};

struct ProbeReport {
  std::string probe;  // "tangential" or "norm"
  Verdict verdict = Verdict::pass;
  std::variant<std::monostate, TangentWitness, NormWitness> witness;
  int samples_run = 0;
  std::uint64_t seed = 0;
  /// Largest observed Omega decrease (<= 0 when none was seen).
  double max_violation = 0.0;
};

struct ProbeOptions {
  int n_samples = 1000;
  std::uint64_t seed = 0;
  /// A decrease counts as a violation once it exceeds
  /// tolerance * (1 + |Omega(f)|).
  double tolerance = 1e-9;
  Exec exec = Exec::parallel;
};

/// Samples tangent pairs (f, f_T) and checks Omega(f) <= Omega(f + f_T).
/// Sampling: directions uniform on the Euclidean sphere renormalized in
/// l^p, magnitudes log-uniform in [1e-2, 1e2]; each f_T is tried at
/// ||f_T|| / ||f|| in {1e-3, 1e-2, 1e-1, 1, 10}. The report's witness is the
/// largest violation seen, re-verified before it is returned.
ProbeReport tangential_monotonicity_probe(const Regulariser& reg, const Space& space,
                                          const ProbeOptions& options = {});

/// Samples pairs with ||f_hat|| < ||f|| (relative margin >= 1e-6) and checks
/// Omega(f_hat) <= Omega(f).
ProbeReport norm_monotonicity_probe(const Regulariser& reg, const Space& space,
                                    const ProbeOptions& options = {});

/// Smooth bump supported in [-width, 0]:
///     rho(t) = 35 / (16 width) * (1 - (2 t / width + 1)^2)^3,
/// which has unit mass.
double mollifier_kernel(double t, double width);

/// Radially mollified regulariser
///     f -> integral rho(t) Omega((||f|| - t) f / ||f||) dt
/// evaluated by n_quad-point Gauss-Legendre quadrature. For radial Omega
/// the integration interval is split at the profile's breakpoints, so the
/// result is continuous in ||f|| even across jumps. At f = 0 radial Omega
/// use the direction e_1; custom Omega throw InvalidArgument there.
/// Throws InvalidArgument unless width > 0 and n_quad >= 8.
Regulariser mollify_radial(const Regulariser& reg, const Space& space, double width, int n_quad = 16);

}  // namespace sip
