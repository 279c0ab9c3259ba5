#pragma once

#include "sip/regulariser.hpp"
#include "sip/space.hpp"

#include <optional>
#include <vector>

namespace sip {

/// Find f in B with [f, x_i] = y_i for i = 1..m, minimizing a regulariser.
/// The constraints are linear in f: [f, x_i] = x_i*(f).
struct InterpolationProblem {
  Space space;
  std::vector<Vector> points;
  std::vector<double> targets;

  /// Throws InvalidArgument unless m >= 1, points and targets have equal
  /// length, and every point is finite, nonzero and of dimension dim.
  void validate() const;
  std::size_t size() const { return points.size(); }
};

enum class HessianMode { automatic, gradient_only };

struct SolverConfig {
  int max_iterations = 500;
  /// Converged once max_i |[f, x_i] - y_i| <= feasibility_tolerance * (1 + max_i |y_i|).
  double feasibility_tolerance = 1e-11;
  /// Converged solutions must also have peaking_gap <= certificate_tolerance * (1 + ||f||^2).
  double certificate_tolerance = 1e-8;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  /// automatic: damped Newton on the dual. For p <= 2 with the dual Hessian,
  /// for p > 2 with the inverse of the regularised primal Hessian at f(c).
  /// gradient_only: BFGS.
  HessianMode hessian_mode = HessianMode::automatic;
  /// ||c||_inf beyond this is taken as divergence of the dual.
  double divergence_bound = 1e8;

  void validate() const;
};

struct Solution {
  Vector f;
  std::vector<double> coefficients;
  double constraint_residual = 0.0;
  double peaking_gap = 0.0;
  double dual_objective = 0.0;
  /// ||f|| for solve_min_norm, Omega(f) for solve_regularised.
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Matrix whose rows are the data duals x_i*.
Eigen::MatrixXd dual_data_matrix(const InterpolationProblem& problem);

/// phi(c) = ||sum_i c_i x_i*||_*^2 / 2 - sum_i c_i y_i. Its gradient is the
/// constraint residual of f(c) = inverse_duality_map(sum_i c_i x_i*):
/// d phi / d c_i = [f(c), x_i] - y_i.
double dual_objective(const InterpolationProblem& problem, const Eigen::VectorXd& c,
                      Eigen::VectorXd* gradient = nullptr);

/// f(c) = inverse_duality_map(sum_i c_i x_i*).
Vector primal_from_coefficients(const InterpolationProblem& problem, const Eigen::VectorXd& c);

/// Minimal-norm interpolation: min ||f|| subject to [f, x_i] = y_i. Solved
/// through the unconstrained dual phi over c in R^m, warm started from the
/// p = 2 Gram system. Among equivalent c (dependent data duals) the one of
/// least Euclidean norm is returned.
///
/// Throws InfeasibleError if the constraints are inconsistent and
/// ConvergenceError if max_iterations is exhausted.
Solution solve_min_norm(const InterpolationProblem& problem, const SolverConfig& config = {});

/// min Omega(f) subject to the constraints. For admissible Omega the
/// in-span solution is the minimal-norm one, so this solves
/// solve_min_norm and re-evaluates the objective as Omega(f).
/// Custom regularisers are first probed; a counterexample raises
/// NotAdmissibleError.
Solution solve_regularised(const InterpolationProblem& problem, const Regulariser& reg,
                           const SolverConfig& config = {});

/// ||sum_i c_i x_i*||_* ||f0|| - sum_i c_i x_i*(f0), clamped at 0. Zero
/// iff the functional peaks at f0, which certifies minimal norm.
double peaking_gap(const Vector& f0, const std::vector<double>& c, const InterpolationProblem& problem);

/// dual_norm(duality_map(f) - sum_i c_i duality_map(x_i)).
double verify_representer(const Solution& solution, const InterpolationProblem& problem);

/// Least-squares c with sum_i c_i x_i* closest (Euclidean) to f*.
std::vector<double> fit_representer_coefficients(const Vector& f, const InterpolationProblem& problem);

}  // namespace sip
