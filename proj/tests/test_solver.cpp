#include "sip/error.hpp"
#include "sip/geometry.hpp"
#include "sip/minimize.hpp"
#include "sip/solver.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace sip;
using doctest::Approx;

namespace {

InterpolationProblem single_point_p3() { return {Space(2, 3.0), {Vector{1.0, 1.0}}, {1.0}}; }

}  // namespace

TEST_CASE("problem validation") {
  const Space s(2, 3.0);
  CHECK_THROWS_AS((InterpolationProblem{s, {}, {}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((InterpolationProblem{s, {Vector{1.0, 1.0}}, {}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((InterpolationProblem{s, {Vector{0.0, 0.0}}, {1.0}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((InterpolationProblem{s, {Vector{1.0}}, {1.0}}.validate()), InvalidArgument);
  CHECK_THROWS_AS((InterpolationProblem{s, {Vector{1.0, 1.0}}, {NAN}}.validate()), InvalidArgument);
  SolverConfig bad;
  bad.feasibility_tolerance = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("smooth minimizer") {
  // Rosenbrock: BFGS with line search reaches the minimum.
  SmoothObjective rosen;
  rosen.evaluate = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    if (g) *g = Eigen::Vector2d(-2.0 * a - 400.0 * x[0] * b, 200.0 * b);
    return a * a + 100.0 * b * b;
  };
  DescentOptions opt;
  opt.max_iterations = 2000;
  opt.gradient_tolerance = 1e-9;
  const DescentResult r = minimize_smooth(rosen, Eigen::Vector2d(-1.2, 1.0), opt);
  CHECK(r.status == DescentStatus::converged);
  CHECK(r.x[0] == Approx(1.0).epsilon(1e-7));
  CHECK(r.x[1] == Approx(1.0).epsilon(1e-7));

  // Unbounded linear objective is reported as divergence.
  SmoothObjective lin;
  lin.evaluate = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = Eigen::VectorXd::Constant(1, -1.0);
    return -x[0];
  };
  CHECK(minimize_smooth(lin, Eigen::VectorXd::Zero(1)).status == DescentStatus::diverged);
}

TEST_CASE("dual gradient is the constraint residual") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const InterpolationProblem problem = testing::random_problem(61, static_cast<std::uint64_t>(p * 4), 4, p, 3);
    Rng rng = sample_rng(62, 0);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd c(3);
      for (int i = 0; i < 3; ++i) c[i] = nd(rng);
      Eigen::VectorXd grad;
      dual_objective(problem, c, &grad);
      for (int i = 0; i < 3; ++i) {
        auto phi = [&](double t) {
          Eigen::VectorXd cc = c;
          cc[i] += t;
          return dual_objective(problem, cc);
        };
        CHECK(grad[i] == Approx(testing::derivative(phi, 0.0, 1e-4)).epsilon(1e-6).scale(1.0));
      }
      const Vector f = primal_from_coefficients(problem, c);
      for (int i = 0; i < 3; ++i)
        CHECK(grad[i] == Approx(problem.space.sip(f, problem.points[i]) - problem.targets[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("single point p = 3") {
  const InterpolationProblem problem = single_point_p3();
  const Solution sol = solve_min_norm(problem);
  CHECK(sol.converged);
  // frozen: f = x / ||x||^2 = 2^(-2/3) (1, 1)
  CHECK(sol.f[0] == Approx(0.6299605249474366).epsilon(1e-12));
  CHECK(sol.f[1] == Approx(0.6299605249474366).epsilon(1e-12));
  CHECK(problem.space.norm(sol.f) == Approx(0.7937005259840998).epsilon(1e-12));
  CHECK(sol.peaking_gap <= 1e-8);
  CHECK(verify_representer(sol, problem) <= 1e-8);
  CHECK(sol.constraint_residual <= 1e-10);
  CHECK(sol.objective_value == Approx(problem.space.norm(sol.f)));
}

TEST_CASE("two points, frozen mpmath references") {
  SUBCASE("p = 4") {
    const InterpolationProblem problem{Space(3, 4.0), {Vector{1.0, 0.0, 1.0}, Vector{0.0, 1.0, 1.0}}, {1.0, 2.0}};
    const Solution sol = solve_min_norm(problem);
    REQUIRE(sol.converged);
    CHECK(std::abs(sol.f[0]) <= 1e-9);
    CHECK(sol.f[1] == Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(sol.f[2] == Approx(std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("p = 1.5 (Newton on the dual)") {
    const InterpolationProblem problem{Space(3, 1.5), {Vector{1.0, 2.0, 0.0}, Vector{0.0, 1.0, -1.0}}, {1.0, -0.5}};
    const Solution sol = solve_min_norm(problem);
    REQUIRE(sol.converged);
    CHECK(sol.f[0] == Approx(0.5066459583129732).epsilon(1e-9));
    CHECK(sol.f[1] == Approx(0.0937539089427005).epsilon(1e-9));
    CHECK(sol.f[2] == Approx(0.4906041719347504).epsilon(1e-9));
    CHECK(problem.space.norm(sol.f) == Approx(0.8129360044409685).epsilon(1e-10));
  }
  SUBCASE("weighted p = 3") {
    const InterpolationProblem problem{Space(SpaceConfig{3, 3.0, {0.5, 2.0, 1.0}}),
                                       {Vector{1.0, 2.0, 0.0}, Vector{0.0, 1.0, -1.0}},
                                       {1.0, -0.5}};
    const Solution sol = solve_min_norm(problem);
    REQUIRE(sol.converged);
    CHECK(sol.f[0] == Approx(0.6528897100083950).epsilon(1e-9));
    CHECK(sol.f[1] == Approx(0.2774221037281934).epsilon(1e-9));
    CHECK(sol.f[2] == Approx(1.2759689926100909).epsilon(1e-9));
  }
}

TEST_CASE("Hilbert case matches the pseudoinverse solution") {
  for (int k = 0; k < 20; ++k) {
    const InterpolationProblem problem = testing::random_problem(71, static_cast<std::uint64_t>(k), 5, 2.0, 1 + k % 4);
    const Solution sol = solve_min_norm(problem);
    REQUIRE(sol.converged);
    const Vector ref(testing::hilbert_least_norm(problem));
    CHECK(problem.space.norm(sol.f - ref) <= 1e-10 * problem.space.norm(ref));
  }
}

TEST_CASE("zero targets give the zero solution") {
  InterpolationProblem problem = single_point_p3();
  problem.targets = {0.0};
  const Solution sol = solve_min_norm(problem);
  CHECK(sol.converged);
  CHECK(sol.f.is_zero());
  CHECK(sol.coefficients == std::vector<double>{0.0});
}

TEST_CASE("infeasible targets") {
  const InterpolationProblem problem{Space(2, 3.0), {Vector{1.0, 1.0}, Vector{2.0, 2.0}}, {1.0, 1.0}};
  CHECK_THROWS_WITH_AS(solve_min_norm(problem), "constraints infeasible", InfeasibleError);
  try {
    solve_min_norm(problem);
  } catch (const InfeasibleError& e) {
    CHECK_FALSE(e.residual_trace().empty());
  }
}

TEST_CASE("dependent but consistent data") {
  // x2 = 2 x1, so [f, x2] = 2 [f, x1]; the targets are consistent.
  const Space s(2, 3.0);
  const InterpolationProblem problem{s, {Vector{1.0, 1.0}, Vector{2.0, 2.0}}, {1.0, 2.0}};
  const Solution sol = solve_min_norm(problem);
  CHECK(sol.converged);
  CHECK(sol.f[0] == Approx(0.6299605249474366).epsilon(1e-10));
  // Least-norm c among all c with c1 + 2 c2 fixed: c proportional to (1, 2).
  CHECK(sol.coefficients[1] == Approx(2.0 * sol.coefficients[0]).epsilon(1e-9));
}

TEST_CASE("max_iterations exhausted") {
  const InterpolationProblem problem = testing::random_problem(81, 0, 6, 4.0, 3);
  SolverConfig cfg;
  cfg.max_iterations = 1;
  CHECK_THROWS_AS(solve_min_norm(problem, cfg), ConvergenceError);
}

TEST_CASE("gradient-only mode gives the same solution") {
  const InterpolationProblem problem = testing::random_problem(82, 0, 5, 1.5, 3);
  SolverConfig cfg;
  cfg.hessian_mode = HessianMode::gradient_only;
  const Solution a = solve_min_norm(problem), b = solve_min_norm(problem, cfg);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(problem.space.norm(a.f - b.f) <= 1e-9 * problem.space.norm(a.f));
}

TEST_CASE("optimality against feasible competitors") {
  for (double p : {1.5, 3.0, 4.0}) {
    const InterpolationProblem problem = testing::random_problem(91, static_cast<std::uint64_t>(p), 5, p, 2);
    const Solution sol = solve_min_norm(problem);
    REQUIRE(sol.converged);
    const Space& s = problem.space;
    // Directions z with [z, x_i] = 0 for all i: the kernel of the dual data matrix.
    const Eigen::MatrixXd d = dual_data_matrix(problem);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    const Eigen::MatrixXd kernel = lu.kernel();
    for (int k = 0; k < 100; ++k) {
      Rng rng = sample_rng(92, static_cast<std::uint64_t>(k));
      std::normal_distribution<double> nd;
      Eigen::VectorXd coef(kernel.cols());
      for (Eigen::Index j = 0; j < coef.size(); ++j) coef[j] = nd(rng);
      const Vector g = sol.f + Vector(kernel * coef) * log_uniform(rng, 1e-4, 1.0);
      CHECK(s.norm(sol.f) <= s.norm(g) + 1e-8);
    }
  }
}

TEST_CASE("scaling targets") {
  const InterpolationProblem base = testing::random_problem(93, 0, 4, 3.0, 2);
  for (double lambda : {-2.0, 0.1, 10.0}) {
    InterpolationProblem scaled = base;
    for (double& y : scaled.targets) y *= lambda;
    const Solution sol = solve_min_norm(scaled);
    REQUIRE(sol.converged);
    for (std::size_t i = 0; i < base.size(); ++i)
      CHECK(scaled.space.sip(sol.f, base.points[i]) == Approx(lambda * base.targets[i]).epsilon(1e-9));
    // The duality map is homogeneous, so f scales linearly and c by lambda.
    const Solution one = solve_min_norm(base);
    CHECK(scaled.space.norm(sol.f - lambda * one.f) <= 1e-9 * scaled.space.norm(sol.f));
  }
}

TEST_CASE("peaking gap") {
  const InterpolationProblem problem = single_point_p3();
  const Solution sol = solve_min_norm(problem);
  CHECK(peaking_gap(sol.f, sol.coefficients, problem) <= 1e-8);
  CHECK(peaking_gap(Vector{3.0, -1.0}, {0.0}, problem) == 0.0);
  CHECK_THROWS_AS(peaking_gap(sol.f, {1.0, 2.0}, problem), InvalidArgument);

  // Perturbing c turns the functional away from f.
  const InterpolationProblem two{Space(3, 3.0), {Vector{1.0, 2.0, 0.0}, Vector{0.0, 1.0, -1.0}}, {1.0, -0.5}};
  const Solution s2 = solve_min_norm(two);
  REQUIRE(s2.converged);
  CHECK(s2.peaking_gap <= 1e-8);
  std::vector<double> c = s2.coefficients;
  c[0] += 0.1;
  CHECK(peaking_gap(s2.f, c, two) > 1e-3);
}

TEST_CASE("representer deviation") {
  const Space s(SpaceConfig{4, 3.0, {1.0, 2.0, 0.5, 1.0}});
  const InterpolationProblem problem{s, {Vector{1.0, 0.5, 0.0, -1.0}, Vector{0.0, 1.0, 2.0, 1.0}}, {1.0, 0.5}};
  Solution sol = solve_min_norm(problem);
  REQUIRE(sol.converged);
  CHECK(verify_representer(sol, problem) <= 1e-8 * (1.0 + s.norm(sol.f)));

  // Adding a component orthogonal to the data moves f* out of the span.
  const Eigen::MatrixXd d = dual_data_matrix(problem);
  const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(d).kernel();
  Solution off = sol;
  off.f = sol.f + Vector(Eigen::VectorXd(kernel.col(0)));
  off.coefficients = fit_representer_coefficients(off.f, problem);
  CHECK(verify_representer(off, problem) > 1e-3);

  // With m = dim independent duals every vector is representable.
  std::vector<Vector> pts;
  for (int i = 0; i < 4; ++i) pts.push_back(Vector::unit(4, i) + 0.3 * Vector::unit(4, (i + 1) % 4));
  const InterpolationProblem full{s, pts, {1.0, 2.0, 3.0, 4.0}};
  Solution any;
  any.f = Vector{0.3, -2.0, 1.0, 0.7};
  any.coefficients = fit_representer_coefficients(any.f, full);
  CHECK(verify_representer(any, full) <= 1e-8);
}

TEST_CASE("regularised solve") {
  const InterpolationProblem problem = single_point_p3();
  const Solution base = solve_min_norm(problem);
  const Solution r = solve_regularised(problem, Regulariser::radial(RadialProfile::power(2.0)));
  CHECK(r.f == base.f);
  const double n = problem.space.norm(r.f);
  CHECK(r.objective_value == Approx(n * n * n * n).epsilon(1e-14));
  const Solution half = solve_regularised(problem, Regulariser::radial(RadialProfile::power(0.5)));
  CHECK(half.f == base.f);
  CHECK_THROWS_WITH_AS(solve_regularised(problem, Regulariser::builtin("abs_first_coord")),
                       "regulariser not admissible; use oracle.solve_constrained_direct", NotAdmissibleError);
  // A custom but radial-in-disguise regulariser passes the probes.
  const Regulariser disguised =
      Regulariser::custom([](const Space& s, const Vector& f) { return s.norm(f); }, "norm");
  CHECK(solve_regularised(problem, disguised).f == base.f);
}
