#include "sip/axioms.hpp"

#include "sip/error.hpp"
#include "sip/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sip {

void AxiomSuiteConfig::validate() const {
  if (p_list.empty() || dims.empty()) throw InvalidArgument("axiom suite needs at least one p and one dim");
  for (double p : p_list) Space(1, p);  // throws on p outside (1, inf)
  for (int d : dims)
    if (d < 1) throw InvalidArgument("dimensions must be >= 1");
  if (samples < 1) throw InvalidArgument("axiom suite needs samples >= 1");
  if (!(axiom_tolerance > 0.0) || !(identity_tolerance > 0.0))
    throw InvalidArgument("axiom suite tolerances must be > 0");
}

std::string to_string(Check c) {
  switch (c) {
    case Check::linearity: return "linearity";
    case Check::positivity: return "positivity";
    case Check::cauchy_schwarz: return "cauchy_schwarz";
    case Check::homogeneity: return "homogeneity";
    case Check::isometry: return "isometry";
    case Check::riesz: return "riesz";
    case Check::round_trip: return "round_trip";
  }
  return "unknown";
}

AxiomSample axiom_sample(const AxiomSuiteConfig& config, std::uint64_t index) {
  const std::size_t np = config.p_list.size();
  AxiomSample s;
  s.p = config.p_list[index % np];
  s.dim = config.dims[(index / np) % config.dims.size()];
  const Space space(s.dim, s.p);
  Rng rng = sample_rng(config.seed, index);
  std::bernoulli_distribution drop(0.2);
  auto draw = [&] {
    Vector v = random_vector(space, rng);
    for (int i = 0; i < s.dim; ++i)
      if (drop(rng)) v[i] = 0.0;
    return v;
  };
  s.x = draw();
  s.y = draw();
  s.z = draw();
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> lam(-5.0, 5.0);
  s.a = coef(rng);
  s.b = coef(rng);
  s.lambda = lam(rng);
  return s;
}

std::array<double, kCheckCount> axiom_violations(const AxiomSample& s) {
  const Space space(s.dim, s.p);
  const double nx = space.norm(s.x), ny = space.norm(s.y), nz = space.norm(s.z);
  std::array<double, kCheckCount> v{};
  auto rel = [](double err, double scale) { return scale > 0.0 ? err / scale : err; };

  const double lhs = space.sip(s.a * s.x + s.b * s.y, s.z);
  const double rhs = s.a * space.sip(s.x, s.z) + s.b * space.sip(s.y, s.z);
  v[static_cast<int>(Check::linearity)] = rel(std::abs(lhs - rhs), (std::abs(s.a) * nx + std::abs(s.b) * ny) * nz);

  const double xx = space.sip(s.x, s.x);
  if (nx == 0.0) {
    v[static_cast<int>(Check::positivity)] = std::abs(xx);
  } else {
    // [x, x] >= 0, and [x, x] = ||x||^2 (which also gives definiteness).
    v[static_cast<int>(Check::positivity)] = std::max(std::max(0.0, -xx), std::abs(xx - nx * nx)) / (nx * nx);
  }

  const double xy = space.sip(s.x, s.y);
  const double yy = space.sip(s.y, s.y);
  v[static_cast<int>(Check::cauchy_schwarz)] = rel(std::max(0.0, xy * xy - xx * yy), nx * nx * ny * ny);

  v[static_cast<int>(Check::homogeneity)] =
      rel(std::abs(space.sip(s.x, s.lambda * s.y) - s.lambda * xy), std::abs(s.lambda) * nx * ny);

  const DualVector xs = space.duality_map(s.x);
  v[static_cast<int>(Check::isometry)] = rel(std::abs(space.dual_norm(xs) - nx), nx);
  v[static_cast<int>(Check::riesz)] = rel(std::abs(space.pair(xs, s.y) - space.sip(s.y, s.x)), nx * ny);
  v[static_cast<int>(Check::round_trip)] =
      rel(space.norm(space.inverse_duality_map(xs) - s.x), nx);
  return v;
}

AxiomSuiteReport run_axiom_suite(const AxiomSuiteConfig& config) {
  config.validate();
  const int n = config.samples;
  std::vector<std::array<double, kCheckCount>> results(n);
#pragma omp parallel for schedule(static) if (config.exec == Exec::parallel)
  for (int k = 0; k < n; ++k) results[k] = axiom_violations(axiom_sample(config, static_cast<std::uint64_t>(k)));

  AxiomSuiteReport report;
  report.samples = n;
  for (std::size_t c = 0; c < kCheckCount; ++c)
    report.tolerance[c] = c < 4 ? config.axiom_tolerance : config.identity_tolerance;

  double worst_ratio = 1.0;
  long long worst = -1;
  for (int k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < kCheckCount; ++c) {
      const double v = results[k][c];
      report.max_violation[c] = std::max(report.max_violation[c], v);
      const double ratio = v / report.tolerance[c];
      if (ratio > worst_ratio || (!std::isfinite(v) && std::isfinite(worst_ratio))) {
        worst_ratio = std::isfinite(v) ? ratio : std::numeric_limits<double>::infinity();
        worst = k;
        report.offending_check = static_cast<Check>(c);
      }
    }
  }
  if (worst >= 0) {
    report.passed = false;
    report.offending = axiom_sample(config, static_cast<std::uint64_t>(worst));
  }
  return report;
}

}  // namespace sip
