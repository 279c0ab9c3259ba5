#include "sip/geometry.hpp"

#include "sip/error.hpp"
#include "sip/minimize.hpp"
#include "sip/random.hpp"
#include "sip/scalar_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sip {

Vector tangent_component(const Space& space, const Vector& g, const Vector& f) {
  space.check(g);
  space.check(f);
  if (f.is_zero()) throw InvalidArgument("tangent undefined at origin");
  const double ff = space.sip(f, f);
  return g - (space.sip(g, f) / ff) * f;
}

JamesResult james_orthogonality_check(const Space& space, const Vector& y, const Vector& x,
                                      const JamesOptions& options) {
  const double nx = space.norm(x);
  const double ny = space.norm(y);
  if (nx == 0.0 || ny == 0.0) throw InvalidArgument("james orthogonality check needs nonzero x and y");

  ScalarSearchOptions so;
  so.initial_step = nx / ny;
  so.width = 1e-12 * (1.0 + nx / ny);
  so.max_iterations = options.max_iterations;
  auto along = [&](double lambda) { return space.norm(x + lambda * y); };
  // d/dlambda ||x + lambda y|| = [y, x + lambda y] / ||x + lambda y||.
  auto slope = [&](double lambda) { return space.sip(y, x + lambda * y); };
  const ScalarMinimum m = minimize_convex_1d(along, 0.0, so, slope);

  JamesResult r;
  r.lambda_star = m.argmin;
  r.min_norm = std::min(m.value, nx);
  r.is_orthogonal =
      std::abs(r.lambda_star) <= options.lambda_tolerance && r.min_norm >= nx * (1.0 - options.norm_tolerance);
  return r;
}

Decomposition orthogonal_decompose(const Space& space, const Vector& x, const std::vector<Vector>& basis,
                                   const DecomposeOptions& options) {
  space.check(x);
  const int dim = space.dim();
  const auto k = static_cast<Eigen::Index>(basis.size());
  Decomposition out{space.zero(), x, Eigen::VectorXd::Zero(k), 0};
  if (k == 0) return out;

  Eigen::MatrixXd b(dim, k);
  double max_u = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    space.check(basis[j]);
    b.col(j) = basis[j].values();
    max_u = std::max(max_u, space.norm(basis[j]));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  lu.setThreshold(1e-10);
  if (lu.rank() < k) throw RankDeficientError();

  const double scale = space.norm(x) * max_u;
  if (scale == 0.0) return out;

  Eigen::VectorXd a0;
  if (options.initial_coefficients) {
    if (options.initial_coefficients->size() != k)
      throw InvalidArgument("initial coefficients must have one entry per basis vector");
    a0 = *options.initial_coefficients;
  } else {
    const auto w = space.weights().asDiagonal();
    a0 = (b.transpose() * w * b).ldlt().solve(b.transpose() * w * x.values());
  }

  SmoothObjective obj;
  obj.evaluate = [&](const Eigen::VectorXd& a, Eigen::VectorXd* grad) {
    const Vector r(x.values() - b * a);
    if (grad) {
      grad->resize(k);
      for (Eigen::Index j = 0; j < k; ++j) (*grad)[j] = -space.sip(basis[j], r);
    }
    const double n = space.norm(r);
    return 0.5 * n * n;
  };
  if (space.p() >= 2.0) {
    obj.hessian = [&](const Eigen::VectorXd& a) -> std::optional<Eigen::MatrixXd> {
      auto h = space.half_norm_squared_hessian(Vector(x.values() - b * a));
      if (!h) return std::nullopt;
      return Eigen::MatrixXd(b.transpose() * *h * b);
    };
  }

  DescentOptions dopt;
  dopt.max_iterations = options.max_iterations;
  dopt.gradient_tolerance = options.tolerance * scale;
  dopt.divergence_bound = std::numeric_limits<double>::infinity();
  const DescentResult res = minimize_smooth(obj, a0, dopt);

  const double gnorm = res.gradient.lpNorm<Eigen::Infinity>();
  const bool ok = res.status == DescentStatus::converged ||
                  (res.status == DescentStatus::stalled && gnorm <= 100.0 * options.tolerance * scale);
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << "status " << to_string(res.status) << ", iterations " << res.iterations << ", max |[u_j, x_perp]| "
       << gnorm << ", coefficients [" << res.x.transpose() << "]";
    throw ConvergenceError("orthogonal decomposition did not converge", os.str());
  }

  out.coefficients = res.x;
  out.x0 = Vector(b * res.x);
  out.x_perp = x - out.x0;
  out.iterations = res.iterations;
  return out;
}

namespace {

double smoothness_gap(const Space& space, const Vector& x, const Vector& y) {
  return 0.5 * (space.norm(x + y) + space.norm(x - y)) - space.norm(x);
}

}  // namespace

double modulus_of_smoothness_estimate(const Space& space, double delta, int n_samples, std::uint64_t seed,
                                      Exec exec) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");

  std::vector<double> gap(n_samples);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n_samples; ++i) {
    Rng rng = sample_rng(seed, static_cast<std::uint64_t>(i));
    const Vector x = random_unit_vector(space, rng);
    const Vector y = random_unit_vector(space, rng) * delta;
    gap[i] = smoothness_gap(space, x, y);
  }
  const auto best_it = std::max_element(gap.begin(), gap.end());
  const auto best_i = static_cast<std::uint64_t>(best_it - gap.begin());

  // Local refinement: random-perturbation hill climb from the best pair.
  Rng rng = sample_rng(seed, best_i);
  Vector x = random_unit_vector(space, rng);
  Vector y = random_unit_vector(space, rng);
  double best = *best_it;
  Rng walk = sample_rng(seed ^ 0x5EEDULL, static_cast<std::uint64_t>(n_samples));
  std::normal_distribution<double> normal;
  double sigma = 0.2;
  int failures = 0;
  for (int step = 0; step < 600 && sigma > 1e-6; ++step) {
    Vector xt = x, yt = y;
    for (int i = 0; i < space.dim(); ++i) {
      xt[i] += sigma * normal(walk);
      yt[i] += sigma * normal(walk);
    }
    const double nx = space.norm(xt), ny = space.norm(yt);
    if (nx == 0.0 || ny == 0.0) continue;
    xt /= nx;
    yt /= ny;
    const double g = smoothness_gap(space, xt, yt * delta);
    if (g > best) {
      best = g;
      x = std::move(xt);
      y = std::move(yt);
      failures = 0;
    } else if (++failures >= 25) {
      sigma *= 0.5;
      failures = 0;
    }
  }
  return std::clamp(best, 0.0, delta);
}

double duality_distance(const Space& space, const Vector& x, const Vector& h) {
  return space.dual_norm(space.duality_map(x + h) - space.duality_map(x));
}

ContinuityProbeResult duality_continuity_probe(const Space& space, int n_samples, std::uint64_t seed, Exec exec) {
  if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
  ContinuityProbeResult out;
  for (int k = 1; k <= 8; ++k) out.radii.push_back(std::pow(10.0, -k));
  const auto rungs = out.radii.size();

  std::vector<std::vector<double>> dist(n_samples, std::vector<double>(rungs));
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < n_samples; ++i) {
    Rng rng = sample_rng(seed, static_cast<std::uint64_t>(i));
    const Vector x = random_dense_unit_vector(space, rng);
    const Vector e = random_unit_vector(space, rng);
    for (std::size_t r = 0; r < rungs; ++r) dist[i][r] = duality_distance(space, x, e * out.radii[r]);
  }

  out.max_distance.assign(rungs, 0.0);
  out.samples = n_samples;
  for (const auto& d : dist) {
    for (std::size_t r = 0; r < rungs; ++r) {
      out.max_distance[r] = std::max(out.max_distance[r], d[r]);
      out.max_ratio = std::max(out.max_ratio, d[r] / out.radii[r]);
      if (r > 0 && !(d[r] < d[r - 1])) out.monotone = false;
    }
  }
  return out;
}

}  // namespace sip
