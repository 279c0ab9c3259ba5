#include "sip/regulariser.hpp"

#include "sip/error.hpp"
#include "sip/geometry.hpp"
#include "sip/quadrature.hpp"
#include "sip/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sip {

RadialProfile RadialProfile::power(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw InvalidArgument("power profile needs alpha > 0");
  return RadialProfile(Power{alpha});
}

RadialProfile RadialProfile::piecewise(std::vector<double> knots, std::vector<double> values,
                                       std::vector<double> slopes, std::vector<double> at_jump) {
  const std::size_t k = knots.size();
  if (values.size() != k + 1)
    throw InvalidArgument("piecewise profile needs one value per segment (" + std::to_string(k + 1) + ")");
  if (slopes.empty()) slopes.assign(k + 1, 0.0);
  if (slopes.size() != k + 1) throw InvalidArgument("piecewise profile needs one slope per segment");
  for (std::size_t i = 0; i < k; ++i) {
    if (!std::isfinite(knots[i]) || !(knots[i] > 0.0)) throw InvalidArgument("knot radii must be finite and > 0");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw InvalidArgument("knot radii must be strictly increasing");
  }
  for (std::size_t i = 0; i <= k; ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(slopes[i]))
      throw InvalidArgument("piecewise values and slopes must be finite");
    if (slopes[i] < 0.0) throw InvalidArgument("piecewise slopes must be >= 0 (h non-decreasing)");
  }
  if (values[0] < 0.0) throw InvalidArgument("regulariser must be non-negative: values[0] < 0");

  RadialProfile out(Piecewise{std::move(knots), std::move(values), std::move(slopes), {}});
  const bool default_jump = at_jump.empty();
  if (!default_jump && at_jump.size() != k) throw InvalidArgument("piecewise profile needs one at_jump per knot");
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = out.left_limit(i), hi = out.right_limit(i);
    if (!(lo <= hi)) {
      std::ostringstream os;
      os << "profile decreases across knot " << i << " (left limit " << lo << " > right limit " << hi << ")";
      throw InvalidArgument(os.str());
    }
    if (default_jump) {
      at_jump.push_back(0.5 * (lo + hi));
    } else if (!std::isfinite(at_jump[i]) || at_jump[i] < lo || at_jump[i] > hi) {
      std::ostringstream os;
      os << "at_jump value " << at_jump[i] << " at knot " << i << " outside monotone bounds [" << lo << ", " << hi
         << "]";
      throw InvalidArgument(os.str());
    }
  }
  std::get<Piecewise>(out.data_).at_jump = std::move(at_jump);
  return out;
}

double RadialProfile::left_limit(std::size_t k) const {
  const auto& pw = std::get<Piecewise>(data_);
  const double r0 = k == 0 ? 0.0 : pw.knots[k - 1];
  const double r1 = pw.knots[k];
  return pw.values[k] + pw.slopes[k] * (r1 * r1 - r0 * r0);
}

double RadialProfile::right_limit(std::size_t k) const { return std::get<Piecewise>(data_).values[k + 1]; }

double RadialProfile::at_radius(double s) const {
  if (const auto* pw = as_power()) return std::pow(s * s, pw->alpha);
  const auto& pw = std::get<Piecewise>(data_);
  const auto it = std::lower_bound(pw.knots.begin(), pw.knots.end(), s);
  const auto k = static_cast<std::size_t>(it - pw.knots.begin());
  if (it != pw.knots.end() && *it == s) return pw.at_jump[k];
  const double r0 = k == 0 ? 0.0 : pw.knots[k - 1];
  return pw.values[k] + pw.slopes[k] * (s * s - r0 * r0);
}

double RadialProfile::operator()(double t) const { return at_radius(std::sqrt(t)); }

std::vector<double> RadialProfile::breakpoints() const {
  if (const auto* pw = as_piecewise()) return pw->knots;
  return {};
}

std::vector<double> RadialProfile::jump_radii() const {
  std::vector<double> out;
  if (const auto* pw = as_piecewise())
    for (std::size_t k = 0; k < pw->knots.size(); ++k)
      if (left_limit(k) < right_limit(k)) out.push_back(pw->knots[k]);
  return out;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  if (const auto* pw = as_power()) {
    os << "power(alpha=" << pw->alpha << ")";
  } else {
    os << "piecewise(" << std::get<Piecewise>(data_).knots.size() << " knots)";
  }
  return os.str();
}

Regulariser Regulariser::radial(RadialProfile profile) {
  Regulariser r;
  r.label_ = profile.describe();
  r.profile_ = std::move(profile);
  return r;
}

Regulariser Regulariser::custom(Function fn, std::string label) {
  if (!fn) throw InvalidArgument("custom regulariser needs a callable");
  Regulariser r;
  r.fn_ = std::move(fn);
  r.label_ = std::move(label);
  return r;
}

Regulariser Regulariser::builtin(std::string_view name) {
  if (name == "abs_first_coord")
    return custom([](const Space&, const Vector& f) { return std::abs(f[0]); }, "abs_first_coord");
  throw InvalidArgument("unknown builtin regulariser '" + std::string(name) + "'");
}

std::vector<std::string> Regulariser::builtin_names() { return {"abs_first_coord"}; }

double Regulariser::evaluate(const Space& space, const Vector& f) const {
  if (profile_) return profile_->at_radius(space.norm(f));
  space.check(f);
  const double v = fn_(space, f);
  if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("invalid regulariser output");
  return v;
}

std::string to_string(Verdict v) { return v == Verdict::pass ? "pass" : "counterexample"; }

namespace {

constexpr double kTangentLadder[] = {1e-3, 1e-2, 1e-1, 1.0, 10.0};

struct TangentSample {
  double violation = -std::numeric_limits<double>::infinity();
  bool flagged = false;
  TangentWitness witness;
};

TangentSample tangent_sample(const Regulariser& reg, const Space& space, const ProbeOptions& opt,
                             std::uint64_t index) {
  TangentSample out;
  Rng rng = sample_rng(opt.seed, index);
  const Vector f = random_vector(space, rng);
  const Vector g = random_vector(space, rng);
  const Vector t = tangent_component(space, g, f);
  const double nt = space.norm(t);
  if (nt == 0.0) return out;
  const double nf = space.norm(f);
  const double omega_f = reg.evaluate(space, f);
  for (double scale : kTangentLadder) {
    const Vector f_t = t * (scale * nf / nt);
    const double omega_ft = reg.evaluate(space, f + f_t);
    const double violation = omega_f - omega_ft;
    const bool flagged = violation > opt.tolerance * (1.0 + std::abs(omega_f));
    if (flagged > out.flagged || (flagged == out.flagged && violation > out.violation)) {
      out.violation = violation;
      out.flagged = flagged;
      out.witness = TangentWitness{f, f_t, omega_f, omega_ft};
    }
  }
  return out;
}

struct NormSample {
  double violation = -std::numeric_limits<double>::infinity();
  bool flagged = false;
  bool valid = false;
  NormWitness witness;
};

NormSample norm_sample(const Regulariser& reg, const Space& space, const ProbeOptions& opt, std::uint64_t index) {
  NormSample out;
  Rng rng = sample_rng(opt.seed, index);
  Vector a = random_vector(space, rng);
  Vector b = random_vector(space, rng);
  double na = space.norm(a), nb = space.norm(b);
  if (na > nb) {
    std::swap(a, b);
    std::swap(na, nb);
  }
  if (nb - na < 1e-6 * nb) return out;
  out.valid = true;
  const double omega_hat = reg.evaluate(space, a);
  const double omega = reg.evaluate(space, b);
  out.violation = omega_hat - omega;
  out.flagged = out.violation > opt.tolerance * (1.0 + std::abs(omega));
  out.witness = NormWitness{a, b, omega_hat, omega};
  return out;
}

void check_probe_options(const ProbeOptions& opt) {
  if (opt.n_samples < 1) throw InvalidArgument("probe needs n_samples >= 1");
  if (!(opt.tolerance > 0.0)) throw InvalidArgument("probe tolerance must be > 0");
}

// Index of the preferred sample: flagged before unflagged, then larger
// violation, then lower index.
template <class Sample>
std::size_t pick(const std::vector<Sample>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].flagged != s[best].flagged) {
      if (s[i].flagged) best = i;
    } else if (s[i].violation > s[best].violation) {
      best = i;
    }
  }
  return best;
}

}  // namespace

ProbeReport tangential_monotonicity_probe(const Regulariser& reg, const Space& space, const ProbeOptions& opt) {
  check_probe_options(opt);
  std::vector<TangentSample> samples(opt.n_samples);
#pragma omp parallel for schedule(static) if (opt.exec == Exec::parallel)
  for (int i = 0; i < opt.n_samples; ++i)
    samples[i] = tangent_sample(reg, space, opt, static_cast<std::uint64_t>(i));

  ProbeReport report;
  report.probe = "tangential";
  report.samples_run = opt.n_samples;
  report.seed = opt.seed;
  const TangentSample& best = samples[pick(samples)];
  report.max_violation = std::isfinite(best.violation) ? best.violation : 0.0;
  if (best.flagged) {
    // Re-verify: tangency at 10x tighter tolerance and a fresh evaluation.
    const auto& w = best.witness;
    const double tangency = std::abs(space.sip(w.f_t, w.f));
    const bool tangent = tangency <= 0.1 * opt.tolerance * space.norm(w.f_t) * space.norm(w.f);
    const double v = reg.evaluate(space, w.f) - reg.evaluate(space, w.f + w.f_t);
    if (tangent && v > opt.tolerance * (1.0 + std::abs(w.omega_f))) {
      report.verdict = Verdict::counterexample;
      report.witness = w;
    }
  }
  return report;
}

ProbeReport norm_monotonicity_probe(const Regulariser& reg, const Space& space, const ProbeOptions& opt) {
  check_probe_options(opt);
  std::vector<NormSample> samples(opt.n_samples);
#pragma omp parallel for schedule(static) if (opt.exec == Exec::parallel)
  for (int i = 0; i < opt.n_samples; ++i) samples[i] = norm_sample(reg, space, opt, static_cast<std::uint64_t>(i));

  ProbeReport report;
  report.probe = "norm";
  report.samples_run = opt.n_samples;
  report.seed = opt.seed;
  const NormSample& best = samples[pick(samples)];
  report.max_violation = std::isfinite(best.violation) ? best.violation : 0.0;
  if (best.flagged) {
    const auto& w = best.witness;
    const bool ordered = space.norm(w.f_hat) < space.norm(w.f);
    const double v = reg.evaluate(space, w.f_hat) - reg.evaluate(space, w.f);
    if (ordered && v > opt.tolerance * (1.0 + std::abs(w.omega_f))) {
      report.verdict = Verdict::counterexample;
      report.witness = w;
    }
  }
  return report;
}

double mollifier_kernel(double t, double width) {
  if (t <= -width || t >= 0.0) return 0.0;
  const double u = 2.0 * t / width + 1.0;
  const double b = 1.0 - u * u;
  return 35.0 / (16.0 * width) * b * b * b;
}

Regulariser mollify_radial(const Regulariser& reg, const Space& space, double width, int n_quad) {
  if (!std::isfinite(width) || !(width > 0.0)) throw InvalidArgument("mollifier width must be > 0");
  if (n_quad < 8) throw InvalidArgument("mollification needs n_quad >= 8");
  const QuadratureRule rule = gauss_legendre(n_quad);

  double mass = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    const double t = -0.5 * width * (1.0 - rule.nodes[i]);
    mass += 0.5 * width * rule.weights[i] * mollifier_kernel(t, width);
  }
  if (std::abs(mass - 1.0) > 1e-10) throw Error("mollifier mass check failed: " + std::to_string(mass));

  const std::vector<double> breaks = reg.is_radial() ? reg.profile()->breakpoints() : std::vector<double>{};

  // Integral over [-width, 0] of rho(t) * omega_along(s - t), split where
  // s - t crosses a breakpoint of a radial profile.
  auto integrate = [rule, width, breaks](double s, const std::function<double(double)>& omega_along) {
    std::vector<double> cuts{-width};
    for (double r : breaks) {
      const double t = s - r;
      if (t > -width && t < 0.0) cuts.push_back(t);
    }
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = mid + half * rule.nodes[i];
        total += half * rule.weights[i] * mollifier_kernel(t, width) * omega_along(s - t);
      }
    }
    return total;
  };

  std::ostringstream label;
  label << "mollified(" << reg.label() << ", width=" << width << ")";
  auto fn = [reg, space, integrate](const Space&, const Vector& f) {
    const double s = space.norm(f);
    if (const RadialProfile* h = reg.profile()) {
      return integrate(s, [h](double radius) { return h->at_radius(radius); });
    }
    if (s == 0.0) throw InvalidArgument("mollification undefined at origin for non-radial regulariser");
    const Vector e = f / s;
    return integrate(s, [&](double radius) { return reg.evaluate(space, e * radius); });
  };
  return Regulariser::custom(std::move(fn), label.str());
}

}  // namespace sip
