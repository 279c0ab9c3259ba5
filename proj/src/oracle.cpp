#include "sip/oracle.hpp"

#include "sip/error.hpp"
#include "sip/minimize.hpp"
#include "sip/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sip {

void OracleConfig::validate() const {
  if (!(initial_penalty > 0.0) || !(penalty_growth > 1.0))
    throw InvalidArgument("penalty weights must be positive and increasing");
  if (penalty_rounds < 1 || inner_iterations < 1) throw InvalidArgument("penalty schedule needs >= 1 round");
  if (starts < 1) throw InvalidArgument("oracle needs at least one start");
  if (!(feasibility_tolerance > 0.0)) throw InvalidArgument("oracle feasibility tolerance must be > 0");
  if (grid_resolution < 16) throw InvalidArgument("grid resolution must be >= 16 per axis");
}

namespace {

// Rows are the constraint functionals f -> [f, x_i], read off by linearity
// of the first argument: A_ij = [e_j, x_i].
Eigen::MatrixXd constraint_matrix(const InterpolationProblem& problem) {
  const Space& space = problem.space;
  const auto m = static_cast<Eigen::Index>(problem.size());
  Eigen::MatrixXd a(m, space.dim());
  for (Eigen::Index i = 0; i < m; ++i)
    for (int j = 0; j < space.dim(); ++j) a(i, j) = space.sip(Vector::unit(space.dim(), j), problem.points[i]);
  return a;
}

double max_residual(const InterpolationProblem& problem, const Vector& f) {
  double r = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i)
    r = std::max(r, std::abs(problem.space.sip(f, problem.points[i]) - problem.targets[i]));
  return r;
}

struct Candidate {
  Vector f;
  double omega = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

Candidate penalty_run(const InterpolationProblem& problem, const Regulariser& reg, const OracleConfig& config,
                      const Eigen::MatrixXd& a, const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>& a_cod,
                      const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, Eigen::VectorXd f0) {
  const Space& space = problem.space;
  const Eigen::Index n = f0.size();
  double mu = config.initial_penalty;
  Eigen::VectorXd f = std::move(f0);

  for (int round = 0; round < config.penalty_rounds; ++round, mu *= config.penalty_growth) {
    SmoothObjective obj;
    obj.evaluate = [&](const Eigen::VectorXd& v, Eigen::VectorXd* grad) {
      const Eigen::VectorXd r = a * v - y;
      const double value = reg.evaluate(space, Vector(v)) + mu * r.squaredNorm();
      if (grad) {
        // Central differences for Omega, exact gradient for the penalty.
        grad->resize(n);
        Eigen::VectorXd probe = v;
        for (Eigen::Index j = 0; j < n; ++j) {
          const double h = 1e-6 * std::max(1.0, std::abs(v[j]));
          probe[j] = v[j] + h;
          const double up = reg.evaluate(space, Vector(probe));
          probe[j] = v[j] - h;
          const double down = reg.evaluate(space, Vector(probe));
          probe[j] = v[j];
          (*grad)[j] = (up - down) / (2.0 * h);
        }
        *grad += 2.0 * mu * (a.transpose() * r);
      }
      return value;
    };
    DescentOptions opt;
    opt.max_iterations = config.inner_iterations;
    opt.gradient_tolerance = 1e-9 * (1.0 + mu * a.norm());
    opt.use_newton = false;
    opt.divergence_bound = std::numeric_limits<double>::infinity();
    f = minimize_smooth(obj, f, opt).x;
  }

  // Euclidean projection onto {f : A f = y}, then descent on Omega within
  // that affine set: f = f_p + N z with N spanning ker A.
  f -= a_cod.solve(a * f - y);
  if (kernel.cols() > 0 && f.allFinite()) {
    const Eigen::VectorXd f_p = f;
    SmoothObjective obj;
    obj.evaluate = [&](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
      const Eigen::VectorXd v = f_p + kernel * z;
      const double value = reg.evaluate(space, Vector(v));
      if (grad) {
        grad->resize(z.size());
        for (Eigen::Index j = 0; j < z.size(); ++j) {
          const double h = 1e-6 * std::max(1.0, v.cwiseAbs().maxCoeff());
          const double up = reg.evaluate(space, Vector(Eigen::VectorXd(v + h * kernel.col(j))));
          const double down = reg.evaluate(space, Vector(Eigen::VectorXd(v - h * kernel.col(j))));
          (*grad)[j] = (up - down) / (2.0 * h);
        }
      }
      return value;
    };
    DescentOptions opt;
    opt.max_iterations = config.inner_iterations;
    opt.gradient_tolerance = 1e-11 * (1.0 + std::abs(reg.evaluate(space, Vector(f_p))));
    opt.use_newton = false;
    opt.divergence_bound = std::numeric_limits<double>::infinity();
    const DescentResult res = minimize_smooth(obj, Eigen::VectorXd::Zero(kernel.cols()), opt);
    if (res.x.allFinite()) f = f_p + kernel * res.x;
  }

  Candidate c;
  c.f = Vector(f);
  c.feasible = c.f.all_finite() && max_residual(problem, c.f) <= config.feasibility_tolerance;
  if (c.feasible) c.omega = reg.evaluate(space, c.f);
  return c;
}

}  // namespace

Vector solve_constrained_direct(const InterpolationProblem& problem, const Regulariser& reg,
                                const OracleConfig& config) {
  problem.validate();
  config.validate();
  if (config.method == OracleMethod::grid) return grid_min(problem, reg, config);
  if (problem.space.dim() > 10) throw InvalidArgument("penalty oracle is limited to dim <= 10");

  const Eigen::MatrixXd a = constraint_matrix(problem);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(problem.targets.data(), static_cast<Eigen::Index>(problem.size()));
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> a_cod(a);
  a_cod.setThreshold(1e-10);
  const Eigen::VectorXd f_ls = a_cod.solve(y);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  const Eigen::Index rank = svd.rank();
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(a.cols() - rank);
  const double spread = std::max(1.0, problem.space.norm(Vector(f_ls)));

  std::vector<Candidate> candidates(config.starts);
#pragma omp parallel for schedule(dynamic) if (config.exec == Exec::parallel)
  for (int s = 0; s < config.starts; ++s) {
    Eigen::VectorXd start = f_ls;
    if (s > 0) {
      Rng rng = sample_rng(config.seed, static_cast<std::uint64_t>(s));
      start += random_vector(problem.space, rng, 0.1 * spread, spread).values();
    }
    candidates[s] = penalty_run(problem, reg, config, a, a_cod, kernel, y, std::move(start));
  }

  const Candidate* best = nullptr;
  for (const auto& c : candidates)
    if (c.feasible && (!best || c.omega < best->omega)) best = &c;
  if (!best) throw InfeasibleError("oracle infeasible", {max_residual(problem, candidates.front().f)});
  return best->f;
}

namespace {

struct GridSetup {
  Eigen::MatrixXd a;
  Eigen::VectorXd slab;
  double spacing = 0.0;
  int resolution = 0;
};

GridSetup grid_setup(const InterpolationProblem& problem, const OracleConfig& config) {
  const Space& space = problem.space;
  if (space.dim() > 3) throw InvalidArgument("grid oracle is limited to dim <= 3");
  GridSetup g;
  g.a = constraint_matrix(problem);
  g.resolution = config.grid_resolution | 1;  // odd, so the origin is a grid point
  double bound = config.grid_bound;
  if (!(bound > 0.0)) {
    // Any minimal-norm candidate has ||f|| <= ||f_ls||, hence
    // |f_j| <= ||f_ls|| / w_j^(1/p).
    const Eigen::VectorXd y =
        Eigen::Map<const Eigen::VectorXd>(problem.targets.data(), static_cast<Eigen::Index>(problem.size()));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g.a);
    const double n_ls = space.norm(Vector(cod.solve(y)));
    const double w_min = space.weights().minCoeff();
    bound = 1.1 * n_ls / std::pow(w_min, 1.0 / space.p());
    if (!(bound > 0.0)) bound = 1.0;
  }
  g.spacing = 2.0 * bound / (g.resolution - 1);
  g.slab = 0.5 * g.spacing * g.a.cwiseAbs().rowwise().sum() * (1.0 + 1e-12);
  return g;
}

}  // namespace

double grid_spacing(const InterpolationProblem& problem, const OracleConfig& config) {
  problem.validate();
  config.validate();
  return grid_setup(problem, config).spacing;
}

Vector grid_min(const InterpolationProblem& problem, const Regulariser& reg, const OracleConfig& config) {
  problem.validate();
  config.validate();
  const Space& space = problem.space;
  const GridSetup g = grid_setup(problem, config);
  const int dim = space.dim();
  const int res = g.resolution;
  const int center = (res - 1) / 2;
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(problem.targets.data(), static_cast<Eigen::Index>(problem.size()));

  long long inner = 1;
  for (int d = 1; d < dim; ++d) inner *= res;

  // Best (Omega, flat index) per slice of the leading axis, reduced in
  // index order afterwards.
  std::vector<double> slice_value(res, std::numeric_limits<double>::infinity());
  std::vector<long long> slice_index(res, -1);
#pragma omp parallel for schedule(dynamic) if (config.exec == Exec::parallel)
  for (int i0 = 0; i0 < res; ++i0) {
    Vector point = Vector::zero(dim);
    for (long long rest = 0; rest < inner; ++rest) {
      long long code = rest;
      point[0] = (i0 - center) * g.spacing;
      for (int d = 1; d < dim; ++d) {
        point[d] = static_cast<double>(code % res - center) * g.spacing;
        code /= res;
      }
      const Eigen::VectorXd r = g.a * point.values() - y;
      if ((r.cwiseAbs().array() > g.slab.array()).any()) continue;
      const double v = reg.evaluate(space, point);
      if (v < slice_value[i0]) {
        slice_value[i0] = v;
        slice_index[i0] = static_cast<long long>(i0) * inner + rest;
      }
    }
  }

  long long best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i0 = 0; i0 < res; ++i0)
    if (slice_index[i0] >= 0 && slice_value[i0] < best_value) {
      best_value = slice_value[i0];
      best = slice_index[i0];
    }
  if (best < 0) throw Error("refine grid");

  Vector out = Vector::zero(dim);
  out[0] = static_cast<double>(best / inner - center) * g.spacing;
  long long code = best % inner;
  for (int d = 1; d < dim; ++d) {
    out[d] = static_cast<double>(code % res - center) * g.spacing;
    code /= res;
  }
  return out;
}

}  // namespace sip
