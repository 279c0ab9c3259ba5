#pragma once

#include <functional>

namespace sip {

struct ScalarSearchOptions {
  /// First trial step of the bracketing phase.
  double initial_step = 1.0;
  /// Golden-section stops once the bracket is narrower than width * (1 + |centre|).
  double width = 1e-12;
  int max_iterations = 500;
};

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  /// Final bracket.
  double lo = 0.0;
  double hi = 0.0;
};

/// Minimizes a convex, coercive f: R -> R. Brackets the minimum by step
/// doubling from `start`, then shrinks the bracket by golden-section search.
///
/// If `slope_sign` is given it must return a value with the sign of f'(x);
/// the golden-section estimate is then refined by bisection on that sign,
/// which resolves the minimizer below the sqrt(eps) floor of value
/// comparisons.
///
/// Throws ConvergenceError (with the bracket state) if bracketing or
/// shrinking exceeds max_iterations.
ScalarMinimum minimize_convex_1d(const std::function<double(double)>& f, double start,
                                 const ScalarSearchOptions& options = {},
                                 const std::function<double(double)>& slope_sign = {});

}  // namespace sip
