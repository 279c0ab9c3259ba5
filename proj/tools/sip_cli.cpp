#include "sip_cli.hpp"

#include "sip/axioms.hpp"
#include "sip/error.hpp"
#include "sip/exec.hpp"
#include "sip/geometry.hpp"
#include "sip/io.hpp"
#include "sip/oracle.hpp"
#include "sip/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace sip::cli {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string output;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_common(CLI::App& cmd, Common& c, bool with_seed) {
  cmd.add_option("-o,--output", c.output, "Write the JSON report to this file instead of stdout");
  cmd.add_option("-j,--jobs", c.jobs, "Worker threads for independent cases (0: all cores)")->check(CLI::NonNegativeNumber);
  if (with_seed) cmd.add_option("--seed", c.seed, "Random seed (default: $SIP_INTERP_SEED or 0)");
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  const char* env = std::getenv("SIP_INTERP_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::char_traits<char>::length(env)) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument(std::string("SIP_INTERP_SEED is not an unsigned integer: '") + env + "'");
}

Exec resolve_exec(const Common& c) {
  if (c.jobs == 1) return Exec::serial;
  set_threads(c.jobs);
  return Exec::parallel;
}

Json header(const std::string& command, std::uint64_t seed) {
  Json j;
  j["format"] = io::kFormatVersion;
  j["tool"] = "sip-interp";
  j["version"] = kVersion;
  j["command"] = command;
  j["seed"] = seed;
  return j;
}

void emit(Json& report, Clock::time_point start, const Common& c, std::ostream& out) {
  report["wall_time"] = std::chrono::duration<double>(Clock::now() - start).count();
  const std::string text = io::dump(report);
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!(file << text)) throw io::FormatError(c.output + ": cannot write report");
}

// Inline JSON, a file path or (for regularisers) a shorthand.
Json json_argument(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return io::parse_json(text, what);
  return io::read_json_file(text);
}

Regulariser regulariser_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if ((first == std::string::npos || text[first] != '{') && std::filesystem::is_regular_file(text))
    return io::regulariser_from_json(io::read_json_file(text));
  return io::regulariser_from_string(text);
}

std::vector<Regulariser> regulariser_list(const std::string& text) {
  std::vector<Regulariser> regs;
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '[') {
    const Json list = io::parse_json(text, "--regs");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "--regs[" + std::to_string(i) + "]";
      regs.push_back(list[i].is_string() ? io::regulariser_from_string(list[i].get<std::string>())
                                         : io::regulariser_from_json(list[i], where));
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      const std::string item = text.substr(pos, comma - pos);
      if (!item.empty()) regs.push_back(io::regulariser_from_string(item));
      pos = comma + 1;
    }
  }
  if (regs.empty()) throw InvalidArgument("--regs lists no regularisers");
  return regs;
}

struct RunConfig {
  SolverConfig solver;
  OracleConfig oracle;
  double oracle_tolerance = 1e-4;
};

RunConfig load_config(const std::string& path) {
  RunConfig rc;
  if (path.empty()) return rc;
  const Json j = io::read_json_file(path);
  if (!j.is_object()) throw io::FormatError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "solver") {
      io::apply_solver_config(value, rc.solver);
    } else if (key == "oracle") {
      io::apply_oracle_config(value, rc.oracle);
    } else if (key == "oracle_tolerance") {
      if (!value.is_number() || !(value.get<double>() > 0.0))
        throw io::FormatError(path + ": oracle_tolerance: expected a positive number");
      rc.oracle_tolerance = value.get<double>();
    } else if (key != "format") {
      throw io::FormatError(path + ": " + key + ": unknown setting");
    }
  }
  return rc;
}

double relative_distance(const Space& space, const Vector& a, const Vector& b) {
  return space.norm(a - b) / (1.0 + std::max(space.norm(a), space.norm(b)));
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  std::string input;
  std::string config;
  bool oracle_check = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const std::uint64_t seed = resolve_seed(a.common);
  RunConfig rc = load_config(a.config);
  rc.oracle.seed = seed;
  rc.oracle.exec = resolve_exec(a.common);
  const io::ProblemFile pf = io::problem_from_json(io::read_json_file(a.input));
  const InterpolationProblem& problem = pf.problem;

  const Solution sol = solve_regularised(problem, pf.regulariser, rc.solver);
  int code = sol.converged ? ok : not_converged;

  Json report = header("solve", seed);
  report["space"] = io::space_to_json(problem.space);
  report["regulariser"] = io::regulariser_to_json(pf.regulariser);
  report["solution"] = io::solution_to_json(sol, problem);
  if (a.oracle_check) {
    const Vector f_oracle = solve_constrained_direct(problem, pf.regulariser, rc.oracle);
    const double dist = relative_distance(problem.space, f_oracle, sol.f);
    const bool agree = dist <= rc.oracle_tolerance;
    report["oracle"] = {{"f", io::vector_to_json(f_oracle)},
                        {"relative_distance", dist},
                        {"tolerance", rc.oracle_tolerance},
                        {"verdict", agree ? "pass" : "fail"}};
    if (!agree && code == ok) code = verification_failed;
  }
  report["verdict"] = code == ok ? "pass" : "fail";
  emit(report, start, a.common, out);
  return code;
}

// --------------------------------------------------------- verify-axioms

struct AxiomArgs {
  Common common;
  std::vector<double> p_list;
  std::vector<int> dims;
  int samples = 10000;
};

Json sample_to_json(const AxiomSample& s) {
  return {{"p", s.p},
          {"dim", s.dim},
          {"x", io::vector_to_json(s.x)},
          {"y", io::vector_to_json(s.y)},
          {"z", io::vector_to_json(s.z)},
          {"a", s.a},
          {"b", s.b},
          {"lambda", s.lambda}};
}

int cmd_verify_axioms(const AxiomArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  AxiomSuiteConfig cfg;
  if (!a.p_list.empty()) cfg.p_list = a.p_list;
  if (!a.dims.empty()) cfg.dims = a.dims;
  cfg.samples = a.samples;
  cfg.seed = resolve_seed(a.common);
  cfg.exec = resolve_exec(a.common);
  const AxiomSuiteReport r = run_axiom_suite(cfg);

  Json report = header("verify-axioms", cfg.seed);
  report["p_list"] = cfg.p_list;
  report["dims"] = cfg.dims;
  report["samples"] = r.samples;
  Json checks = Json::array();
  for (std::size_t c = 0; c < kCheckCount; ++c)
    checks.push_back({{"check", to_string(static_cast<Check>(c))},
                      {"max_violation", r.max_violation[c]},
                      {"tolerance", r.tolerance[c]},
                      {"verdict", r.max_violation[c] <= r.tolerance[c] ? "pass" : "fail"}});
  report["checks"] = std::move(checks);
  if (r.offending) {
    report["offending"] = sample_to_json(*r.offending);
    report["offending"]["check"] = to_string(*r.offending_check);
    err << "axiom check '" << to_string(*r.offending_check) << "' failed\n";
  }
  report["verdict"] = r.passed ? "pass" : "fail";
  emit(report, start, a.common, out);
  return r.passed ? ok : verification_failed;
}

// ----------------------------------------------------- probe-regulariser

struct ProbeArgs {
  Common common;
  std::string description;
  std::string space = R"({"dim": 2, "p": 2})";
  int samples = 10000;
  double tolerance = 1e-9;
};

int cmd_probe(const ProbeArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  const Regulariser reg = regulariser_argument(a.description);
  const Space space(io::space_from_json(json_argument(a.space, "--space")));
  ProbeOptions opt;
  opt.n_samples = a.samples;
  opt.seed = resolve_seed(a.common);
  opt.tolerance = a.tolerance;
  opt.exec = resolve_exec(a.common);
  if (opt.n_samples < 1) throw InvalidArgument("--samples must be >= 1");
  if (!(opt.tolerance > 0.0)) throw InvalidArgument("--tolerance must be > 0");

  const ProbeReport tangential = tangential_monotonicity_probe(reg, space, opt);
  const ProbeReport norm = norm_monotonicity_probe(reg, space, opt);
  const bool pass = tangential.verdict == Verdict::pass && norm.verdict == Verdict::pass;

  Json report = header("probe-regulariser", opt.seed);
  report["regulariser"] = io::regulariser_to_json(reg);
  report["space"] = io::space_to_json(space);
  report["tolerance"] = opt.tolerance;
  report["probes"] = Json::array({io::probe_report_to_json(tangential), io::probe_report_to_json(norm)});
  report["verdict"] = pass ? "pass" : "counterexample";
  emit(report, start, a.common, out);
  return pass ? ok : counterexample;
}

// -------------------------------------------------- compare-regularisers

struct CompareArgs {
  Common common;
  std::string input;
  std::string config;
  std::string regs = "power:0.5,power:1,power:2";
  double tolerance = 1e-4;
  int samples = 1000;
};

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const std::uint64_t seed = resolve_seed(a.common);
  RunConfig rc = load_config(a.config);
  rc.oracle.seed = seed;
  rc.oracle.exec = resolve_exec(a.common);
  if (!(a.tolerance > 0.0)) throw InvalidArgument("--tolerance must be > 0");
  if (a.samples < 1) throw InvalidArgument("--samples must be >= 1");
  const io::ProblemFile pf = io::problem_from_json(io::read_json_file(a.input));
  const InterpolationProblem& problem = pf.problem;
  const std::vector<Regulariser> regs = regulariser_list(a.regs);

  Json report = header("compare-regularisers", seed);
  report["space"] = io::space_to_json(problem.space);
  Json entries = Json::array();
  bool admissible = true;
  ProbeOptions popt;
  popt.n_samples = a.samples;
  popt.seed = seed;
  popt.exec = rc.oracle.exec;
  for (const Regulariser& reg : regs) {
    const ProbeReport t = tangential_monotonicity_probe(reg, problem.space, popt);
    const ProbeReport n = norm_monotonicity_probe(reg, problem.space, popt);
    const bool pass = t.verdict == Verdict::pass && n.verdict == Verdict::pass;
    Json e;
    e["regulariser"] = io::regulariser_to_json(reg);
    e["probe_verdict"] = pass ? "pass" : "counterexample";
    if (!pass) {
      e["probes"] = Json::array({io::probe_report_to_json(t), io::probe_report_to_json(n)});
      err << "regulariser " << reg.label() << " is not admissible\n";
    }
    admissible = admissible && pass;
    entries.push_back(std::move(e));
  }

  if (!admissible) {
    report["regularisers"] = std::move(entries);
    report["verdict"] = "counterexample";
    emit(report, start, a.common, out);
    return counterexample;
  }

  std::vector<Vector> solutions;
  for (std::size_t k = 0; k < regs.size(); ++k) {
    solutions.push_back(solve_constrained_direct(problem, regs[k], rc.oracle));
    entries[k]["f"] = io::vector_to_json(solutions.back());
  }
  Json matrix = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < regs.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < regs.size(); ++j) {
      const double d = relative_distance(problem.space, solutions[i], solutions[j]);
      worst = std::max(worst, d);
      row.push_back(d);
    }
    matrix.push_back(std::move(row));
  }
  const bool pass = worst <= a.tolerance;
  report["regularisers"] = std::move(entries);
  report["distance_matrix"] = std::move(matrix);
  report["max_distance"] = worst;
  report["tolerance"] = a.tolerance;
  report["verdict"] = pass ? "pass" : "fail";
  emit(report, start, a.common, out);
  return pass ? ok : verification_failed;
}

// ------------------------------------------------------------- decompose

struct DecomposeArgs {
  Common common;
  std::string input;
  double tolerance = 1e-8;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  const auto start = Clock::now();
  if (!(a.tolerance > 0.0)) throw InvalidArgument("--tolerance must be > 0");
  const io::DecomposeFile df = io::decompose_from_json(io::read_json_file(a.input));
  const Decomposition d = orthogonal_decompose(df.space, df.x, df.basis);

  const double nx = df.space.norm(df.x);
  Json sips = Json::array();
  bool pass = true;
  for (const Vector& u : df.basis) {
    const double v = df.space.sip(u, d.x_perp);
    pass = pass && std::abs(v) <= a.tolerance * (1.0 + df.space.norm(u) * nx);
    sips.push_back(v);
  }
  Json report = header("decompose", 0);
  report.erase("seed");
  report["space"] = io::space_to_json(df.space);
  report["x0"] = io::vector_to_json(d.x0);
  report["x_perp"] = io::vector_to_json(d.x_perp);
  report["coefficients"] = std::vector<double>(d.coefficients.begin(), d.coefficients.end());
  report["sip_basis_x_perp"] = std::move(sips);
  report["iterations"] = d.iterations;
  report["tolerance"] = a.tolerance;
  report["verdict"] = pass ? "pass" : "fail";
  emit(report, start, a.common, out);
  return pass ? ok : verification_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-inner products, minimal-norm interpolation and regulariser checks on weighted l^p spaces",
               "sip-interp"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Solve an interpolation problem file");
  c_solve->add_option("input", solve.input, "Problem JSON file")->required();
  c_solve->add_option("--config", solve.config, "Solver/oracle settings JSON file");
  c_solve->add_flag("--oracle-check", solve.oracle_check, "Cross-check against the brute-force oracle");
  add_common(*c_solve, solve.common, true);

  AxiomArgs axioms;
  auto* c_axioms = app.add_subcommand("verify-axioms", "Randomized semi-inner product axiom suite");
  c_axioms->add_option("--p-list", axioms.p_list, "Exponents, comma separated")->delimiter(',');
  c_axioms->add_option("--dims", axioms.dims, "Dimensions, comma separated")->delimiter(',');
  c_axioms->add_option("--samples", axioms.samples, "Number of random triples");
  add_common(*c_axioms, axioms.common, true);

  ProbeArgs probe;
  auto* c_probe = app.add_subcommand("probe-regulariser", "Run both admissibility probes on a regulariser");
  c_probe->add_option("regulariser", probe.description, "JSON description, file, or shorthand (power:2)")
      ->required();
  c_probe->add_option("--space", probe.space, "Space JSON or file")->capture_default_str();
  c_probe->add_option("--samples", probe.samples, "Samples per probe")->capture_default_str();
  c_probe->add_option("--tolerance", probe.tolerance, "Relative probe tolerance")->capture_default_str();
  add_common(*c_probe, probe.common, true);

  CompareArgs compare;
  auto* c_compare = app.add_subcommand("compare-regularisers", "Oracle solutions under several regularisers");
  c_compare->add_option("input", compare.input, "Problem JSON file")->required();
  c_compare->add_option("--regs", compare.regs, "Comma separated shorthands or a JSON array")->capture_default_str();
  c_compare->add_option("--tolerance", compare.tolerance, "Max pairwise relative distance")->capture_default_str();
  c_compare->add_option("--samples", compare.samples, "Probe samples per regulariser")->capture_default_str();
  c_compare->add_option("--config", compare.config, "Solver/oracle settings JSON file");
  add_common(*c_compare, compare.common, true);

  DecomposeArgs decompose;
  auto* c_decompose = app.add_subcommand("decompose", "Orthogonal decomposition against a subspace");
  c_decompose->add_option("input", decompose.input, "JSON file with space, x and basis")->required();
  c_decompose->add_option("--tolerance", decompose.tolerance, "Max |[u, x_perp]| relative")->capture_default_str();
  add_common(*c_decompose, decompose.common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_input;
  }

  try {
    if (c_solve->parsed()) return cmd_solve(solve, out);
    if (c_axioms->parsed()) return cmd_verify_axioms(axioms, out, err);
    if (c_probe->parsed()) return cmd_probe(probe, out);
    if (c_compare->parsed()) return cmd_compare(compare, out, err);
    if (c_decompose->parsed()) return cmd_decompose(decompose, out);
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\nresidual trace:";
    for (double r : e.residual_trace()) err << ' ' << r;
    err << '\n';
    return infeasible;
  } catch (const NotAdmissibleError& e) {
    err << "error: " << e.what() << '\n';
    return counterexample;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return not_converged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return invalid_input;
  }
  return invalid_input;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sip::cli
