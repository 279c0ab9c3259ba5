#include "sip/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sip::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw FormatError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Library validation errors get the field path prepended.
template <class F>
auto located(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const FormatError&) {
    throw;
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
}

void check_format(const Json& j) {
  if (const Json* f = optional_field(j, "format"))
    if (integer(*f, "format") != kFormatVersion)
      fail("format", "unsupported format version " + f->dump() + " (expected 1)");
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find(": ", msg.find("parse error")); pos != std::string::npos) msg = msg.substr(pos + 2);
    std::ostringstream os;
    os << source << ":" << line << ":" << column << ": " << msg;
    throw FormatError(os.str());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

SpaceConfig space_from_json(const Json& j, const std::string& where) {
  SpaceConfig c;
  c.dim = integer(field(j, "dim", where), where + ".dim");
  c.p = number(field(j, "p", where), where + ".p");
  if (const Json* w = optional_field(j, "weights")) c.weights = numbers(*w, where + ".weights");
  located(where, [&] { return Space(c); });
  return c;
}

Json space_to_json(const Space& space) {
  Json j;
  j["dim"] = space.dim();
  j["p"] = space.p();
  j["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
  return j;
}

Regulariser regulariser_from_json(const Json& j, const std::string& where) {
  const std::string type = string(field(j, "type", where), where + ".type");
  if (type == "power") {
    const double alpha = number(field(j, "alpha", where), where + ".alpha");
    return located(where, [&] { return Regulariser::radial(RadialProfile::power(alpha)); });
  }
  if (type == "piecewise") {
    auto knots = numbers(field(j, "knots", where), where + ".knots");
    auto values = numbers(field(j, "values", where), where + ".values");
    std::vector<double> slopes, at_jump;
    if (const Json* s = optional_field(j, "slopes")) slopes = numbers(*s, where + ".slopes");
    if (const Json* a = optional_field(j, "at_jump")) at_jump = numbers(*a, where + ".at_jump");
    return located(where, [&] {
      return Regulariser::radial(
          RadialProfile::piecewise(std::move(knots), std::move(values), std::move(slopes), std::move(at_jump)));
    });
  }
  if (type == "builtin_custom") {
    const std::string name = string(field(j, "name", where), where + ".name");
    return located(where, [&] { return Regulariser::builtin(name); });
  }
  fail(where + ".type", "unknown regulariser type '" + type + "' (power, piecewise, builtin_custom)");
}

Json regulariser_to_json(const Regulariser& reg) {
  Json j;
  if (const RadialProfile* prof = reg.profile()) {
    if (const auto* pw = prof->as_power()) {
      j["type"] = "power";
      j["alpha"] = pw->alpha;
    } else {
      const auto* pc = prof->as_piecewise();
      j["type"] = "piecewise";
      j["knots"] = pc->knots;
      j["values"] = pc->values;
      j["slopes"] = pc->slopes;
      j["at_jump"] = pc->at_jump;
    }
    return j;
  }
  const auto names = Regulariser::builtin_names();
  if (std::find(names.begin(), names.end(), reg.label()) == names.end())
    throw InvalidArgument("regulariser '" + reg.label() + "' has no JSON form");
  j["type"] = "builtin_custom";
  j["name"] = reg.label();
  return j;
}

Regulariser regulariser_from_string(std::string_view text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string_view::npos && text[first] == '{')
    return regulariser_from_json(parse_json(text, "<regulariser>"));
  const std::string s(text);
  if (s.rfind("power:", 0) == 0) {
    double alpha = 0.0;
    std::size_t used = 0;
    try {
      alpha = std::stod(s.substr(6), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() - 6) throw FormatError("regulariser '" + s + "': bad exponent");
    return located("regulariser '" + s + "'", [&] { return Regulariser::radial(RadialProfile::power(alpha)); });
  }
  return located("regulariser '" + s + "'", [&] { return Regulariser::builtin(s); });
}

Json vector_to_json(const Vector& v) { return std::vector<double>(v.values().begin(), v.values().end()); }

Vector vector_from_json(const Json& j, const std::string& where) { return Vector(numbers(j, where)); }

ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) fail("<root>", "expected an object");
  check_format(j);
  const SpaceConfig cfg = space_from_json(field(j, "space", "<root>"));
  ProblemFile file{InterpolationProblem{Space(cfg), {}, {}}};
  const Json& data = field(j, "data", "<root>");
  if (!data.is_array()) fail("data", "expected an array");
  if (data.empty()) fail("data", "needs at least one data point");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string at = "data[" + std::to_string(i) + "]";
    Vector x = vector_from_json(field(data[i], "x", at), at + ".x");
    if (x.size() != cfg.dim)
      fail(at + ".x", "has " + std::to_string(x.size()) + " entries, space has dim " + std::to_string(cfg.dim));
    if (x.is_zero()) fail(at + ".x", "data point is zero");
    file.problem.points.push_back(std::move(x));
    file.problem.targets.push_back(number(field(data[i], "y", at), at + ".y"));
  }
  if (const Json* r = optional_field(j, "regulariser")) file.regulariser = regulariser_from_json(*r);
  file.problem.validate();
  return file;
}

Json problem_to_json(const ProblemFile& file) {
  Json j;
  j["format"] = kFormatVersion;
  j["space"] = space_to_json(file.problem.space);
  Json data = Json::array();
  for (std::size_t i = 0; i < file.problem.size(); ++i)
    data.push_back({{"x", vector_to_json(file.problem.points[i])}, {"y", file.problem.targets[i]}});
  j["data"] = std::move(data);
  j["regulariser"] = regulariser_to_json(file.regulariser);
  return j;
}

DecomposeFile decompose_from_json(const Json& j) {
  if (!j.is_object()) fail("<root>", "expected an object");
  check_format(j);
  const SpaceConfig cfg = space_from_json(field(j, "space", "<root>"));
  DecomposeFile file{Space(cfg), vector_from_json(field(j, "x", "<root>"), "x"), {}};
  located("x", [&] { file.space.check(file.x); return 0; });
  const Json& basis = field(j, "basis", "<root>");
  if (!basis.is_array()) fail("basis", "expected an array of vectors");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string at = "basis[" + std::to_string(i) + "]";
    Vector u = vector_from_json(basis[i], at);
    located(at, [&] { file.space.check(u); return 0; });
    file.basis.push_back(std::move(u));
  }
  return file;
}

namespace {

// Calls setter(key, value, path) for every key and rejects keys it does not
// know (setter returns false).
template <class F>
void for_fields(const Json& j, const std::string& where, F&& setter) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!setter(key, value, where + "." + key)) fail(where + "." + key, "unknown setting");
}

}  // namespace

void apply_solver_config(const Json& j, SolverConfig& config, const std::string& where) {
  for_fields(j, where, [&](const std::string& key, const Json& v, const std::string& at) {
    if (key == "max_iterations") config.max_iterations = integer(v, at);
    else if (key == "feasibility_tolerance") config.feasibility_tolerance = number(v, at);
    else if (key == "certificate_tolerance") config.certificate_tolerance = number(v, at);
    else if (key == "armijo") config.armijo = number(v, at);
    else if (key == "backtrack") config.backtrack = number(v, at);
    else if (key == "max_backtracks") config.max_backtracks = integer(v, at);
    else if (key == "divergence_bound") config.divergence_bound = number(v, at);
    else if (key == "hessian_mode") {
      const std::string mode = string(v, at);
      if (mode == "automatic") config.hessian_mode = HessianMode::automatic;
      else if (mode == "gradient_only") config.hessian_mode = HessianMode::gradient_only;
      else fail(at, "expected \"automatic\" or \"gradient_only\"");
    } else return false;
    return true;
  });
  located(where, [&] { config.validate(); return 0; });
}

void apply_oracle_config(const Json& j, OracleConfig& config, const std::string& where) {
  for_fields(j, where, [&](const std::string& key, const Json& v, const std::string& at) {
    if (key == "method") {
      const std::string m = string(v, at);
      if (m == "penalty") config.method = OracleMethod::penalty;
      else if (m == "grid") config.method = OracleMethod::grid;
      else fail(at, "expected \"penalty\" or \"grid\"");
    } else if (key == "initial_penalty") config.initial_penalty = number(v, at);
    else if (key == "penalty_growth") config.penalty_growth = number(v, at);
    else if (key == "penalty_rounds") config.penalty_rounds = integer(v, at);
    else if (key == "inner_iterations") config.inner_iterations = integer(v, at);
    else if (key == "starts") config.starts = integer(v, at);
    else if (key == "feasibility_tolerance") config.feasibility_tolerance = number(v, at);
    else if (key == "grid_bound") config.grid_bound = number(v, at);
    else if (key == "grid_resolution") config.grid_resolution = integer(v, at);
    else return false;
    return true;
  });
  located(where, [&] { config.validate(); return 0; });
}

Json solution_to_json(const Solution& sol, const InterpolationProblem& problem) {
  Json j;
  j["f"] = vector_to_json(sol.f);
  j["norm"] = problem.space.norm(sol.f);
  j["coefficients"] = sol.coefficients;
  j["constraint_residual"] = sol.constraint_residual;
  j["peaking_gap"] = sol.peaking_gap;
  j["representer_deviation"] = verify_representer(sol, problem);
  j["dual_objective"] = sol.dual_objective;
  j["objective_value"] = sol.objective_value;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  return j;
}

Json probe_report_to_json(const ProbeReport& report) {
  Json j;
  j["probe"] = report.probe;
  j["verdict"] = to_string(report.verdict);
  j["samples_run"] = report.samples_run;
  j["seed"] = report.seed;
  j["max_violation"] = report.max_violation;
  if (const auto* w = std::get_if<TangentWitness>(&report.witness)) {
    j["witness"] = {{"f", vector_to_json(w->f)},
                    {"f_t", vector_to_json(w->f_t)},
                    {"omega_f", w->omega_f},
                    {"omega_f_plus_t", w->omega_f_plus_t}};
  } else if (const auto* n = std::get_if<NormWitness>(&report.witness)) {
    j["witness"] = {{"f_hat", vector_to_json(n->f_hat)},
                    {"f", vector_to_json(n->f)},
                    {"omega_f_hat", n->omega_f_hat},
                    {"omega_f", n->omega_f}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sip::io
