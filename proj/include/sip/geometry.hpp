#pragma once

#include "sip/exec.hpp"
#include "sip/space.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sip {

/// f_T = g - ([g, f] / [f, f]) f, so that [f_T, f] = 0: f_T is tangent to
/// the sphere of radius ||f|| at f. Throws InvalidArgument if f = 0.
Vector tangent_component(const Space& space, const Vector& g, const Vector& f);

struct JamesOptions {
  double lambda_tolerance = 1e-6;
  /// Relative: orthogonal requires min_norm >= ||x|| (1 - norm_tolerance).
  double norm_tolerance = 1e-8;
  int max_iterations = 500;
};

struct JamesResult {
  double lambda_star = 0.0;
  double min_norm = 0.0;
  bool is_orthogonal = false;
};

/// Minimizes lambda -> ||x + lambda y|| and reports whether x is James
/// orthogonal to y (x normal to y): the minimum sits at lambda = 0.
/// Throws InvalidArgument if x or y is zero, ConvergenceError if the line
/// search fails.
JamesResult james_orthogonality_check(const Space& space, const Vector& y, const Vector& x,
                                      const JamesOptions& options = {});

struct DecomposeOptions {
  /// Stop when max_j |[u_j, x_perp]| <= tolerance * ||x|| * max_j ||u_j||.
  double tolerance = 1e-12;
  int max_iterations = 1000;
  /// Starting span coefficients; defaults to the weighted least-squares fit.
  std::optional<Eigen::VectorXd> initial_coefficients;
};

struct Decomposition {
  Vector x0;
  Vector x_perp;
  Eigen::VectorXd coefficients;
  int iterations = 0;
};

/// Metric projection of x onto U = span(basis): x0 minimizes ||x - u|| over
/// u in U and x_perp = x - x0 satisfies [u, x_perp] = 0 for all u in U.
/// Throws RankDeficientError for a dependent basis (pivoted elimination,
/// threshold 1e-10 of the largest pivot) and ConvergenceError if the
/// minimization stalls.
Decomposition orthogonal_decompose(const Space& space, const Vector& x, const std::vector<Vector>& basis,
                                   const DecomposeOptions& options = {});

/// Lower bound on the modulus of smoothness
///     rho(delta) = sup { (||x + y|| + ||x - y||) / 2 - 1 : ||x|| = 1, ||y|| = delta }
/// from n_samples random pairs plus a local refinement of the best pair.
/// Always in [0, delta]. The sampled directions depend only on seed, so
/// estimates for different delta use the same pairs.
double modulus_of_smoothness_estimate(const Space& space, double delta, int n_samples,
                                      std::uint64_t seed = 0, Exec exec = Exec::parallel);

/// dual_norm(duality_map(x + h) - duality_map(x)).
double duality_distance(const Space& space, const Vector& x, const Vector& h);

struct ContinuityProbeResult {
  /// ||h|| along the ladder, decreasing.
  std::vector<double> radii;
  /// Max over samples of duality_distance at each radius.
  std::vector<double> max_distance;
  /// Max over samples and radii of duality_distance / ||h||.
  double max_ratio = 0.0;
  /// Every sample's distances strictly decrease along the ladder.
  bool monotone = true;
  int samples = 0;
};

/// Probes norm-to-norm continuity of the duality map: for n_samples unit
/// vectors x bounded away from the coordinate hyperplanes and random
/// directions e, records duality_distance(x, r e) for r = 1e-1 ... 1e-8.
ContinuityProbeResult duality_continuity_probe(const Space& space, int n_samples, std::uint64_t seed = 0,
                                               Exec exec = Exec::parallel);

}  // namespace sip
