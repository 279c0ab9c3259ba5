#pragma once

#include "sip/exec.hpp"
#include "sip/regulariser.hpp"
#include "sip/solver.hpp"

#include <cstdint>

namespace sip {

// Brute-force solvers for min Omega(f) s.t. [f, x_i] = y_i that work in the
// full space. They only use norm, sip and Omega evaluations, never the
// duality map or the representer machinery, so they can serve as ground
// truth for it.

enum class OracleMethod { penalty, grid };

struct OracleConfig {
  OracleMethod method = OracleMethod::penalty;

  /// Penalty weights mu_k = initial_penalty * penalty_growth^k, k < penalty_rounds.
  double initial_penalty = 1.0;
  double penalty_growth = 10.0;
  int penalty_rounds = 11;
  int inner_iterations = 2000;
  int starts = 8;
  std::uint64_t seed = 0;
  /// Max constraint residual accepted for the returned point.
  double feasibility_tolerance = 1e-6;

  /// Grid covers [-grid_bound, grid_bound]^dim; <= 0 picks a bound that
  /// contains every minimal-norm candidate.
  double grid_bound = 0.0;
  int grid_resolution = 201;

  Exec exec = Exec::parallel;

  void validate() const;
};

/// Penalty method with multi-start: minimizes
///     Omega(f) + mu_k sum_i ([f, x_i] - y_i)^2
/// for increasing mu_k (warm started), from the Euclidean least-squares
/// interpolant and starts-1 random perturbations of it. Each candidate is
/// then projected onto the constraint set and polished by descent on Omega
/// within it; the feasible candidate with least Omega wins (ties to the
/// lowest start index).
/// config.method == grid delegates to grid_min.
/// Throws InfeasibleError("oracle infeasible") when no candidate meets
/// feasibility_tolerance.
Vector solve_constrained_direct(const InterpolationProblem& problem, const Regulariser& reg,
                                const OracleConfig& config = {});

/// Exhaustive scan of a uniform grid (dim <= 3): among grid points whose
/// constraint residuals lie within half a cell (|[g, x_i] - y_i| <=
/// spacing / 2 * sum_j |[e_j, x_i]|) returns the one of least Omega.
/// Throws Error("refine grid") if no grid point is that close.
Vector grid_min(const InterpolationProblem& problem, const Regulariser& reg, const OracleConfig& config = {});

/// Grid spacing grid_min uses for this problem and config.
double grid_spacing(const InterpolationProblem& problem, const OracleConfig& config);

}  // namespace sip
