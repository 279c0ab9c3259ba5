#include "sip/minimize.hpp"

#include <cmath>
#include <limits>

namespace sip {

std::string to_string(DescentStatus s) {
  switch (s) {
    case DescentStatus::converged: return "converged";
    case DescentStatus::max_iterations: return "max_iterations";
    case DescentStatus::diverged: return "diverged";
    case DescentStatus::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

std::optional<Eigen::VectorXd> newton_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& g) {
  if (!h.allFinite()) return std::nullopt;
  const double scale = std::max(h.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Eigen::MatrixXd reg = h;
  reg.diagonal().array() += 1e-14 * scale;
  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd d = -llt.solve(g);
  if (!d.allFinite() || !(g.dot(d) < 0.0)) return std::nullopt;
  return d;
}

}  // namespace

DescentResult minimize_smooth(const SmoothObjective& objective, Eigen::VectorXd x0,
                              const DescentOptions& options) {
  const Eigen::Index n = x0.size();
  DescentResult r;
  r.x = std::move(x0);
  r.gradient.resize(n);
  r.value = objective.evaluate(r.x, &r.gradient);
  r.gradient_trace.push_back(r.gradient.lpNorm<Eigen::Infinity>());

  Eigen::MatrixXd inv_h = Eigen::MatrixXd::Identity(n, n);
  bool inv_h_scaled = false;
  Eigen::VectorXd g_new(n);

  for (r.iterations = 0;; ++r.iterations) {
    const double gnorm = r.gradient_trace.back();
    if (gnorm <= options.gradient_tolerance) {
      r.status = DescentStatus::converged;
      return r;
    }
    if (r.iterations >= options.max_iterations) {
      r.status = DescentStatus::max_iterations;
      return r;
    }
    if (!r.x.allFinite() || r.x.lpNorm<Eigen::Infinity>() > options.divergence_bound) {
      r.status = DescentStatus::diverged;
      return r;
    }

    std::optional<Eigen::VectorXd> dir;
    bool newton = false;
    if (options.use_newton && objective.hessian) {
      if (auto h = objective.hessian(r.x)) {
        dir = newton_direction(*h, r.gradient);
        newton = dir.has_value();
      }
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d;
      double t = 1.0;
      if (dir && attempt == 0) {
        d = *dir;
      } else if (attempt == 0) {
        d = -inv_h * r.gradient;
        if (!(r.gradient.dot(d) < 0.0)) {
          inv_h.setIdentity();
          inv_h_scaled = false;
          d = -r.gradient;
        }
        if (!inv_h_scaled) t = std::min(1.0, 1.0 / gnorm);
      } else {
        // Fallback: steepest descent with a fresh curvature model.
        inv_h.setIdentity();
        inv_h_scaled = false;
        newton = false;
        d = -r.gradient;
        t = std::min(1.0, 1.0 / gnorm);
      }

      const double slope = r.gradient.dot(d);
      const double noise = 1e-14 * (1.0 + std::abs(r.value));
      for (int k = 0; k <= options.max_backtracks; ++k, t *= options.backtrack) {
        Eigen::VectorXd x_new = r.x + t * d;
        double v_new = objective.evaluate(x_new, &g_new);
        if (!std::isfinite(v_new) || !g_new.allFinite()) continue;
        // Below the rounding level of the value only a shrinking gradient counts.
        const bool resolved = -t * slope > noise;
        const bool armijo = resolved && v_new <= r.value + options.armijo * t * slope;
        const bool flat = !resolved && v_new <= r.value + noise && g_new.lpNorm<Eigen::Infinity>() < gnorm;
        if (!armijo && !flat) continue;
        if (armijo && newton) {
          // The Newton model can overshoot badly where the curvature varies
          // fast; keep shrinking while the value still drops.
          for (int extra = k; extra < options.max_backtracks; ++extra) {
            const double t2 = t * options.backtrack;
            if (-t2 * slope <= noise) break;
            Eigen::VectorXd x2 = r.x + t2 * d;
            Eigen::VectorXd g2(n);
            const double v2 = objective.evaluate(x2, &g2);
            if (!std::isfinite(v2) || !g2.allFinite() || !(v2 < v_new)) break;
            x_new = std::move(x2);
            g_new = std::move(g2);
            v_new = v2;
            t = t2;
          }
        }

        const Eigen::VectorXd s = x_new - r.x;
        const Eigen::VectorXd y = g_new - r.gradient;
        const double ys = y.dot(s);
        if (ys > 1e-12 * s.norm() * y.norm() && ys > 0.0) {
          if (!inv_h_scaled) {
            inv_h = Eigen::MatrixXd::Identity(n, n) * (ys / y.squaredNorm());
            inv_h_scaled = true;
          }
          const double rho = 1.0 / ys;
          const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
          inv_h = (id - rho * s * y.transpose()) * inv_h * (id - rho * y * s.transpose()) +
                  rho * s * s.transpose();
        } else if (k == 0 && !newton) {
          // No positive curvature along a full step: widen the model.
          inv_h *= 2.0;
          inv_h_scaled = true;
        }
        r.x = std::move(x_new);
        r.value = v_new;
        r.gradient = g_new;
        accepted = true;
        break;
      }
      if (!accepted && newton) dir.reset();
    }

    r.gradient_trace.push_back(r.gradient.lpNorm<Eigen::Infinity>());
    if (!accepted) {
      r.status = DescentStatus::stalled;
      return r;
    }
  }
}

}  // namespace sip
