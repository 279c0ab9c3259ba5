#include "sip/scalar_search.hpp"

#include "sip/error.hpp"

#include <cmath>
#include <sstream>

namespace sip {

namespace {

std::string bracket_state(double lo, double hi, double best, int iterations) {
  std::ostringstream os;
  os.precision(17);
  os << "bracket [" << lo << ", " << hi << "], best " << best << ", iterations " << iterations;
  return os.str();
}

}  // namespace

ScalarMinimum minimize_convex_1d(const std::function<double(double)>& f, double start,
                                 const ScalarSearchOptions& options,
                                 const std::function<double(double)>& slope_sign) {
  int it = 0;
  double step = options.initial_step > 0.0 ? options.initial_step : 1.0;

  // Bracketing: find lo < mid < hi with f(mid) <= min(f(lo), f(hi)).
  double mid = start;
  double f_mid = f(mid);
  double right = start + step;
  double left = start - step;
  double f_right = f(right);
  double f_left = f(left);
  double lo = left, hi = right;
  if (f_right < f_mid) {
    double a = mid;
    double b = right, fb = f_right;
    for (;;) {
      if (++it > options.max_iterations)
        throw ConvergenceError("bracketing did not terminate", bracket_state(a, b, b, it));
      step *= 2.0;
      const double c = b + step;
      const double fc = f(c);
      if (fc >= fb) {
        lo = a;
        hi = c;
        break;
      }
      a = b;
      b = c;
      fb = fc;
    }
  } else if (f_left < f_mid) {
    double a = mid;
    double b = left, fb = f_left;
    for (;;) {
      if (++it > options.max_iterations)
        throw ConvergenceError("bracketing did not terminate", bracket_state(b, a, b, it));
      step *= 2.0;
      const double c = b - step;
      const double fc = f(c);
      if (fc >= fb) {
        lo = c;
        hi = a;
        break;
      }
      a = b;
      b = c;
      fb = fc;
    }
  }

  // Golden-section search on [lo, hi].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > options.width * (1.0 + std::abs(0.5 * (lo + hi))) && lo < c && c < d && d < hi) {
    if (++it > options.max_iterations)
      throw ConvergenceError("golden-section search did not converge",
                             bracket_state(lo, hi, fc < fd ? c : d, it));
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }

  ScalarMinimum out;
  out.argmin = fc < fd ? c : d;
  out.value = fc < fd ? fc : fd;

  if (slope_sign) {
    // The golden bracket may have drifted by ~sqrt(eps) on the flat bottom;
    // re-bracket a sign change of the slope around the estimate, then bisect.
    double r = std::max(1e-6, 1e-6 * std::abs(out.argmin)) + (hi - lo);
    double a = out.argmin - r, b = out.argmin + r;
    int expand = 0;
    while (slope_sign(a) > 0.0 && expand++ < 60) a = out.argmin - (r *= 2.0);
    r = std::max(1e-6, 1e-6 * std::abs(out.argmin)) + (hi - lo);
    expand = 0;
    while (slope_sign(b) < 0.0 && expand++ < 60) b = out.argmin + (r *= 2.0);
    if (slope_sign(a) <= 0.0 && slope_sign(b) >= 0.0) {
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double s = slope_sign(m);
        if (s == 0.0) {
          a = b = m;
          break;
        }
        (s < 0.0 ? a : b) = m;
      }
      const double x = 0.5 * (a + b);
      out.argmin = x;
      out.value = f(x);
      lo = a;
      hi = b;
    }
  }
  out.iterations = it;
  out.lo = lo;
  out.hi = hi;
  return out;
}

}  // namespace sip
