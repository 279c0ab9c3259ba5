#include "sip/solver.hpp"

#include "sip/error.hpp"
#include "sip/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sip {

void InterpolationProblem::validate() const {
  if (points.empty()) throw InvalidArgument("interpolation problem needs at least one data point");
  if (points.size() != targets.size())
    throw InvalidArgument("got " + std::to_string(points.size()) + " points but " + std::to_string(targets.size()) +
                          " targets");
  for (std::size_t i = 0; i < points.size(); ++i) {
    space.check(points[i]);
    if (points[i].is_zero()) throw InvalidArgument("data point " + std::to_string(i) + " is zero");
    if (!std::isfinite(targets[i])) throw InvalidArgument("target " + std::to_string(i) + " is not finite");
  }
}

void SolverConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
  if (!(feasibility_tolerance > 0.0) || !(certificate_tolerance > 0.0))
    throw InvalidArgument("solver tolerances must be > 0");
  if (!(armijo > 0.0 && armijo < 1.0) || !(backtrack > 0.0 && backtrack < 1.0))
    throw InvalidArgument("line search parameters must lie in (0, 1)");
  if (max_backtracks < 1) throw InvalidArgument("max_backtracks must be >= 1");
  if (!(divergence_bound > 0.0)) throw InvalidArgument("divergence_bound must be > 0");
}

Eigen::MatrixXd dual_data_matrix(const InterpolationProblem& problem) {
  const auto m = static_cast<Eigen::Index>(problem.size());
  Eigen::MatrixXd d(m, problem.space.dim());
  for (Eigen::Index i = 0; i < m; ++i) d.row(i) = problem.space.duality_map(problem.points[i]).values().transpose();
  return d;
}

namespace {

Eigen::VectorXd targets_of(const InterpolationProblem& problem) {
  return Eigen::Map<const Eigen::VectorXd>(problem.targets.data(), static_cast<Eigen::Index>(problem.size()));
}

double objective_with(const InterpolationProblem& problem, const Eigen::MatrixXd& duals, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
  const DualVector a(duals.transpose() * c);
  const double n = problem.space.dual_norm(a);
  if (grad) {
    const Vector f = problem.space.inverse_duality_map(a);
    grad->resize(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) (*grad)[i] = problem.space.sip(f, problem.points[i]) - y[i];
  }
  return 0.5 * n * n - c.dot(y);
}

double max_residual(const InterpolationProblem& problem, const Vector& f) {
  double r = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i)
    r = std::max(r, std::abs(problem.space.sip(f, problem.points[i]) - problem.targets[i]));
  return r;
}

std::string iterate_state(const DescentResult& res) {
  std::ostringstream os;
  os.precision(17);
  os << "status " << to_string(res.status) << ", iterations " << res.iterations << ", max residual "
     << res.gradient.lpNorm<Eigen::Infinity>() << ", c = [" << res.x.transpose() << "]";
  return os.str();
}

}  // namespace

double dual_objective(const InterpolationProblem& problem, const Eigen::VectorXd& c, Eigen::VectorXd* gradient) {
  problem.validate();
  if (c.size() != static_cast<Eigen::Index>(problem.size()))
    throw InvalidArgument("need one coefficient per data point");
  return objective_with(problem, dual_data_matrix(problem), targets_of(problem), c, gradient);
}

Vector primal_from_coefficients(const InterpolationProblem& problem, const Eigen::VectorXd& c) {
  return problem.space.inverse_duality_map(DualVector(dual_data_matrix(problem).transpose() * c));
}

Solution solve_min_norm(const InterpolationProblem& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();
  const Space& space = problem.space;
  const auto m = static_cast<Eigen::Index>(problem.size());
  const Eigen::VectorXd y = targets_of(problem);
  const double scale = 1.0 + y.lpNorm<Eigen::Infinity>();

  Solution sol;
  sol.coefficients.assign(static_cast<std::size_t>(m), 0.0);
  if ((y.array() == 0.0).all()) {
    sol.f = space.zero();
    sol.converged = true;
    return sol;
  }

  const Eigen::MatrixXd duals = dual_data_matrix(problem);

  // The constraints read duals * f = y; inconsistent data show up as a
  // least-squares residual that does not vanish.
  {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(duals);
    cod.setThreshold(1e-10);
    const Eigen::VectorXd f_ls = cod.solve(y);
    const double ls_residual = (duals * f_ls - y).lpNorm<Eigen::Infinity>();
    if (ls_residual > 1e-8 * (duals.lpNorm<Eigen::Infinity>() * f_ls.lpNorm<Eigen::Infinity>() + scale))
      throw InfeasibleError("constraints infeasible", {ls_residual});
  }

  // Warm start: the p = 2 problem with the same weights, G c = y with
  // G_ij = sum_k w_k x_ik x_jk.
  Eigen::MatrixXd x(m, space.dim());
  for (Eigen::Index i = 0; i < m; ++i) x.row(i) = problem.points[i].values().transpose();
  const Eigen::MatrixXd gram = x * space.weights().asDiagonal() * x.transpose();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> gram_cod(gram);
  gram_cod.setThreshold(1e-12);
  Eigen::VectorXd c0 = gram_cod.solve(y);

  SmoothObjective obj;
  obj.evaluate = [&](const Eigen::VectorXd& c, Eigen::VectorXd* grad) {
    return objective_with(problem, duals, y, c, grad);
  };
  const bool newton = config.hessian_mode == HessianMode::automatic;
  if (newton && space.q() >= 2.0) {
    obj.hessian = [&](const Eigen::VectorXd& c) -> std::optional<Eigen::MatrixXd> {
      auto h = space.half_dual_norm_squared_hessian(DualVector(duals.transpose() * c));
      if (!h) return std::nullopt;
      return Eigen::MatrixXd(duals * *h * duals.transpose());
    };
  } else if (newton) {
    // q < 2: the dual Hessian blows up at zero coordinates. Use the inverse
    // of the primal Hessian at f(c), regularised, as the metric instead.
    obj.hessian = [&](const Eigen::VectorXd& c) -> std::optional<Eigen::MatrixXd> {
      const Vector f = space.inverse_duality_map(DualVector(duals.transpose() * c));
      auto h = space.half_norm_squared_hessian(f);
      if (!h) return std::nullopt;
      const double floor = 1e-40 * h->diagonal().cwiseAbs().maxCoeff();
      h->diagonal().array() += floor;
      Eigen::LLT<Eigen::MatrixXd> llt(*h);
      if (llt.info() != Eigen::Success) return std::nullopt;
      return Eigen::MatrixXd(duals * llt.solve(duals.transpose()));
    };
  }

  DescentOptions dopt;
  dopt.max_iterations = config.max_iterations;
  dopt.gradient_tolerance = config.feasibility_tolerance * scale;
  dopt.armijo = config.armijo;
  dopt.backtrack = config.backtrack;
  dopt.max_backtracks = config.max_backtracks;
  dopt.use_newton = newton;
  dopt.divergence_bound = config.divergence_bound;
  const DescentResult res = minimize_smooth(obj, std::move(c0), dopt);

  switch (res.status) {
    case DescentStatus::converged: break;
    case DescentStatus::diverged: throw InfeasibleError("constraints infeasible", res.gradient_trace);
    case DescentStatus::max_iterations:
      throw ConvergenceError("dual minimization hit max_iterations", iterate_state(res));
    case DescentStatus::stalled:
      // Rounding floor of the residual; anything larger is a real failure.
      if (res.gradient.lpNorm<Eigen::Infinity>() > 100.0 * dopt.gradient_tolerance)
        throw ConvergenceError("dual line search stalled", iterate_state(res));
      break;
  }

  // phi depends on c only through duals^T c: return the least-norm c.
  Eigen::VectorXd c = res.x;
  {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(duals.transpose());
    cod.setThreshold(1e-10);
    if (cod.rank() < m) c = cod.solve(duals.transpose() * c);
  }

  sol.f = space.inverse_duality_map(DualVector(duals.transpose() * c));
  sol.coefficients.assign(c.data(), c.data() + m);
  sol.constraint_residual = max_residual(problem, sol.f);
  sol.peaking_gap = peaking_gap(sol.f, sol.coefficients, problem);
  sol.dual_objective = objective_with(problem, duals, y, c, nullptr);
  sol.objective_value = space.norm(sol.f);
  sol.iterations = res.iterations;
  const double fn = sol.objective_value;
  sol.converged = sol.constraint_residual <= 100.0 * dopt.gradient_tolerance &&
                  sol.peaking_gap <= config.certificate_tolerance * (1.0 + fn * fn);
  return sol;
}

Solution solve_regularised(const InterpolationProblem& problem, const Regulariser& reg, const SolverConfig& config) {
  problem.validate();
  if (!reg.is_radial()) {
    ProbeOptions opt;
    opt.n_samples = 1000;
    const ProbeReport tangential = tangential_monotonicity_probe(reg, problem.space, opt);
    const ProbeReport norm = norm_monotonicity_probe(reg, problem.space, opt);
    if (tangential.verdict != Verdict::pass || norm.verdict != Verdict::pass)
      throw NotAdmissibleError("regulariser not admissible; use oracle.solve_constrained_direct");
  }
  Solution sol = solve_min_norm(problem, config);
  sol.objective_value = reg.evaluate(problem.space, sol.f);
  return sol;
}

double peaking_gap(const Vector& f0, const std::vector<double>& c, const InterpolationProblem& problem) {
  if (c.size() != problem.size()) throw InvalidArgument("need one coefficient per data point");
  const Space& space = problem.space;
  DualVector a = DualVector::zero(space.dim());
  for (std::size_t i = 0; i < c.size(); ++i) a += c[i] * space.duality_map(problem.points[i]);
  const double gap = space.dual_norm(a) * space.norm(f0) - space.pair(a, f0);
  return std::max(0.0, gap);
}

double verify_representer(const Solution& solution, const InterpolationProblem& problem) {
  if (solution.coefficients.size() != problem.size()) throw InvalidArgument("need one coefficient per data point");
  const Space& space = problem.space;
  DualVector diff = space.duality_map(solution.f);
  for (std::size_t i = 0; i < problem.size(); ++i)
    diff -= solution.coefficients[i] * space.duality_map(problem.points[i]);
  return space.dual_norm(diff);
}

std::vector<double> fit_representer_coefficients(const Vector& f, const InterpolationProblem& problem) {
  problem.validate();
  const Eigen::MatrixXd duals = dual_data_matrix(problem);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(duals.transpose());
  const Eigen::VectorXd c = cod.solve(problem.space.duality_map(f).values());
  return {c.data(), c.data() + c.size()};
}

}  // namespace sip
