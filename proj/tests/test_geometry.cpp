#include "sip/error.hpp"
#include "sip/geometry.hpp"
#include "sip/random.hpp"
#include "sip/scalar_search.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace sip;
using doctest::Approx;

TEST_CASE("convex line search") {
  const auto m = minimize_convex_1d([](double t) { return (t - 3.7) * (t - 3.7) + 1.0; }, 0.0);
  CHECK(m.argmin == Approx(3.7).epsilon(1e-7));
  CHECK(m.value == Approx(1.0).epsilon(1e-15));
  const auto n = minimize_convex_1d([](double t) { return std::abs(t + 1e5); }, 0.0);
  CHECK(n.argmin == Approx(-1e5).epsilon(1e-12));

  ScalarSearchOptions tight;
  tight.max_iterations = 3;
  CHECK_THROWS_AS(minimize_convex_1d([](double t) { return std::abs(t - 1e9); }, 0.0, tight), ConvergenceError);

  // The slope refinement resolves the minimizer of a flat function exactly.
  const auto f = [](double t) { return std::pow(std::abs(t - 0.25), 4.0); };
  const auto s = minimize_convex_1d(f, 0.0, {}, [](double t) { return t - 0.25; });
  CHECK(std::abs(s.argmin - 0.25) <= 1e-14);
}

TEST_CASE("tangent component") {
  const Space s3(2, 3.0);
  CHECK_THROWS_WITH_AS(tangent_component(s3, Vector{1.0, 0.0}, Vector::zero(2)), "tangent undefined at origin",
                       InvalidArgument);
  const Vector f{1.0, 1.0};
  CHECK(s3.norm(tangent_component(s3, 2.0 * f, f)) <= 1e-15);

  const Vector t2 = tangent_component(Space(2, 2.0), Vector{1.0, 1.0}, Vector{1.0, 0.0});
  CHECK(t2[0] == Approx(0.0));
  CHECK(t2[1] == Approx(1.0));

  const Vector t3 = tangent_component(s3, Vector{1.0, 0.0}, f);
  // [g, f] / [f, f] = 2^(-1/3) / 2^(2/3) = 1/2 on this example.
  CHECK(t3[0] == Approx(0.5).epsilon(1e-14));
  CHECK(t3[1] == Approx(-0.5).epsilon(1e-14));
  CHECK(std::abs(s3.sip(t3, f)) <= 1e-15);
  CHECK(james_orthogonality_check(s3, t3, f).is_orthogonal);

  for (double p : {1.2, 1.5, 3.0, 7.0}) {
    const Space s(SpaceConfig{5, p, {1.0, 2.0, 0.5, 1.5, 3.0}});
    for (int k = 0; k < 100; ++k) {
      Rng rng = sample_rng(21, static_cast<std::uint64_t>(k));
      const Vector ff = random_vector(s, rng), g = random_vector(s, rng);
      CHECK(std::abs(s.sip(tangent_component(s, g, ff), ff)) <= 1e-10 * s.norm(g) * s.norm(ff));
    }
  }
}

TEST_CASE("James orthogonality") {
  const Space h(2, 2.0);
  const JamesResult r = james_orthogonality_check(h, Vector{0.0, 1.0}, Vector{1.0, 0.0});
  CHECK(r.is_orthogonal);
  CHECK(std::abs(r.lambda_star) <= 1e-9);
  CHECK(r.min_norm == Approx(1.0));

  const Space s(3, 3.0);
  const Vector x{1.0, -2.0, 0.5};
  const JamesResult same = james_orthogonality_check(s, x, x);
  CHECK(same.lambda_star == Approx(-1.0).epsilon(1e-9));
  CHECK(same.min_norm <= 1e-9);
  CHECK_FALSE(same.is_orthogonal);

  CHECK_THROWS_AS(james_orthogonality_check(s, Vector::zero(3), x), InvalidArgument);
  CHECK_THROWS_AS(james_orthogonality_check(s, x, Vector::zero(3)), InvalidArgument);

  // Agrees with the sign of [y, x] on generic pairs.
  for (int k = 0; k < 200; ++k) {
    Rng rng = sample_rng(31, static_cast<std::uint64_t>(k));
    const Vector a = random_vector(s, rng), b = random_vector(s, rng);
    const JamesResult jr = james_orthogonality_check(s, b, a);
    const bool sip_orth = std::abs(s.sip(b, a)) <= 1e-9 * s.norm(a) * s.norm(b);
    CHECK(jr.is_orthogonal == sip_orth);
    if (!sip_orth) CHECK(jr.lambda_star * s.sip(b, a) < 0.0);
  }
}

TEST_CASE("orthogonal decomposition") {
  const Space s(SpaceConfig{4, 2.5, {1.0, 0.5, 2.0, 1.5}});
  SUBCASE("vector in the span") {
    const std::vector<Vector> basis{{1.0, 0.0, 1.0, 0.0}, {0.0, 1.0, -1.0, 2.0}};
    const Vector x = 0.3 * basis[0] - 1.7 * basis[1];
    const Decomposition d = orthogonal_decompose(s, x, basis);
    CHECK(s.norm(d.x_perp) <= 1e-10 * s.norm(x));
    CHECK(d.x0 + d.x_perp == x);
  }
  SUBCASE("coordinate subspace") {
    for (double p : {1.5, 3.0}) {
      const Space sp(2, p);
      const Decomposition d = orthogonal_decompose(sp, Vector{0.7, -2.0}, {Vector{1.0, 0.0}});
      CHECK(d.x0[0] == Approx(0.7).epsilon(1e-12));
      CHECK(std::abs(d.x0[1]) == 0.0);
      CHECK(std::abs(d.x_perp[0]) <= 1e-12);
      CHECK(d.x_perp[1] == -2.0);
    }
  }
  SUBCASE("random p = 2.5 problem") {
    Rng rng = sample_rng(41, 0);
    const Vector x = random_vector(s, rng, 1.0, 3.0);
    const std::vector<Vector> basis{random_vector(s, rng, 1.0, 2.0), random_vector(s, rng, 1.0, 2.0)};
    const Decomposition d = orthogonal_decompose(s, x, basis);
    for (const auto& u : basis) {
      CHECK(std::abs(s.sip(u, d.x_perp)) <= 1e-8);
      const JamesResult jr = james_orthogonality_check(s, u, d.x_perp);
      CHECK(jr.is_orthogonal);
    }
    CHECK(d.x0 + d.x_perp == x);
    // x0 is the nearest point: no other point of the span is closer.
    for (int k = 0; k < 200; ++k) {
      Rng r2 = sample_rng(42, static_cast<std::uint64_t>(k));
      std::uniform_real_distribution<double> c(-3.0, 3.0);
      const Vector u = c(r2) * basis[0] + c(r2) * basis[1];
      CHECK(s.norm(x - u) >= s.norm(d.x_perp) - 1e-12);
    }
    // Uniqueness: a different start lands on the same point.
    DecomposeOptions opt;
    opt.initial_coefficients = Eigen::Vector2d(5.0, -4.0);
    const Decomposition d2 = orthogonal_decompose(s, x, basis, opt);
    CHECK(s.norm(d2.x0 - d.x0) <= 1e-8);
  }
  SUBCASE("dependent basis") {
    CHECK_THROWS_WITH_AS(orthogonal_decompose(s, Vector{1.0, 2.0, 3.0, 4.0},
                                              {Vector{1.0, 0.0, 1.0, 0.0}, Vector{2.0, 0.0, 2.0, 0.0}}),
                         "rank deficient subspace basis", RankDeficientError);
  }
  SUBCASE("p < 2 uses the gradient-only path") {
    const Space sp(SpaceConfig{4, 1.3, {1.0, 0.5, 2.0, 1.5}});
    Rng rng = sample_rng(43, 0);
    const Vector x = random_vector(sp, rng, 1.0, 3.0);
    const std::vector<Vector> basis{random_vector(sp, rng, 1.0, 2.0)};
    const Decomposition d = orthogonal_decompose(sp, x, basis);
    CHECK(std::abs(sp.sip(basis[0], d.x_perp)) <= 1e-8);
  }
}

TEST_CASE("modulus of smoothness") {
  for (double p : {1.5, 2.0, 3.0}) {
    const Space s(3, p);
    double last = 1.0;
    for (double delta : {1.0, 0.1, 0.01}) {
      const double rho = modulus_of_smoothness_estimate(s, delta, 500);
      CHECK(rho >= 0.0);
      CHECK(rho <= delta);
      CHECK(rho / delta <= last);
      last = rho / delta;
    }
  }
  // In a Hilbert space every pair attains sqrt(1 + delta^2) - 1.
  const Space h(SpaceConfig{4, 2.0, {1.0, 2.0, 3.0, 4.0}});
  for (double delta : {0.5, 0.05}) {
    CHECK(modulus_of_smoothness_estimate(h, delta, 200) ==
          Approx(testing::hilbert_modulus(delta)).epsilon(1e-9));
  }
  CHECK(modulus_of_smoothness_estimate(Space(2, 3.0), 1e-9, 50) <= 1e-9);
}

TEST_CASE("duality map continuity") {
  const Space h(3, 2.0);
  const Vector x{1.0, 2.0, -1.0};
  CHECK(duality_distance(h, x, Vector::zero(3)) == 0.0);
  CHECK(duality_distance(h, x, Vector{0.1, 0.0, 0.0}) == Approx(0.1).epsilon(1e-12));

  const ContinuityProbeResult hr = duality_continuity_probe(h, 20);
  CHECK(hr.max_ratio == Approx(1.0).epsilon(1e-6));

  const ContinuityProbeResult r = duality_continuity_probe(Space(5, 1.5), 100);
  CHECK(r.monotone);
  CHECK(r.samples == 100);
  REQUIRE(r.radii.size() == r.max_distance.size());
  for (std::size_t k = 0; k < r.radii.size(); ++k)
    if (r.radii[k] <= 1e-6 * 1.0001) CHECK(r.max_distance[k] < 1e-3);
}
