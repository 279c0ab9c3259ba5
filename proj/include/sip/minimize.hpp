#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sip {

/// Smooth objective on R^n. `evaluate` returns the value and writes the
/// gradient into `grad` when it is non-null. `hessian`, when set, returns
/// the Hessian or nullopt where it is unavailable.
struct SmoothObjective {
  std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)> evaluate;
  std::function<std::optional<Eigen::MatrixXd>(const Eigen::VectorXd& x)> hessian;
};

struct DescentOptions {
  int max_iterations = 500;
  /// Converged when ||grad||_inf <= gradient_tolerance.
  double gradient_tolerance = 1e-10;
  /// Armijo sufficient-decrease constant and backtracking factor.
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  /// Use damped Newton steps whenever the objective provides a Hessian.
  bool use_newton = true;
  /// Abort with Status::diverged once ||x||_inf exceeds this.
  double divergence_bound = 1e8;
};

enum class DescentStatus { converged, max_iterations, diverged, stalled };

struct DescentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  DescentStatus status = DescentStatus::stalled;
  /// ||grad||_inf at every iterate, starting with x0.
  std::vector<double> gradient_trace;
};

std::string to_string(DescentStatus s);

/// Descent with backtracking line search: damped Newton where a positive
/// definite Hessian is available, BFGS otherwise. Near the optimum, where
/// value differences drown in rounding, a step is also accepted if it does
/// not raise the value beyond rounding and shrinks the gradient.
DescentResult minimize_smooth(const SmoothObjective& objective, Eigen::VectorXd x0,
                              const DescentOptions& options = {});

}  // namespace sip
