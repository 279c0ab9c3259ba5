#pragma once

#include "sip/error.hpp"
#include "sip/geometry.hpp"
#include "sip/oracle.hpp"
#include "sip/regulariser.hpp"
#include "sip/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace sip::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Parse error or schema violation in an input document. what() names the
/// source, the line/column for syntax errors and the offending field path
/// (e.g. "data[2].x") for schema errors.
class FormatError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Throws FormatError("<source>:<line>:<column>: ...") on malformed JSON.
Json parse_json(std::string_view text, std::string_view source = "<input>");
/// Reads and parses a file; unreadable files throw FormatError as well.
Json read_json_file(const std::filesystem::path& path);

/// {"dim": 2, "p": 3, "weights": [1, 1]?}
SpaceConfig space_from_json(const Json& j, const std::string& where = "space");
Json space_to_json(const Space& space);

/// {"type": "power", "alpha": 2}
/// {"type": "piecewise", "knots": [...], "values": [...], "slopes": [...]?, "at_jump": [...]?}
/// {"type": "builtin_custom", "name": "abs_first_coord"}
Regulariser regulariser_from_json(const Json& j, const std::string& where = "regulariser");
/// Inverse of regulariser_from_json; throws InvalidArgument for custom
/// regularisers that are not builtins.
Json regulariser_to_json(const Regulariser& reg);

/// Shorthand for the command line: "power:0.5", "abs_first_coord", or a JSON
/// object.
Regulariser regulariser_from_string(std::string_view text);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where);

struct ProblemFile {
  InterpolationProblem problem;
  Regulariser regulariser = Regulariser::radial(RadialProfile::power(1.0));
};

/// {"format": 1?, "space": {...}, "data": [{"x": [...], "y": 1.0}, ...],
///  "regulariser": {...}?}. The regulariser defaults to power(1).
ProblemFile problem_from_json(const Json& j);
Json problem_to_json(const ProblemFile& file);

struct DecomposeFile {
  Space space;
  Vector x;
  std::vector<Vector> basis;
};

/// {"space": {...}, "x": [...], "basis": [[...], ...]}
DecomposeFile decompose_from_json(const Json& j);

/// Overrides the fields present in j; unknown keys are errors.
///   solver: max_iterations, feasibility_tolerance, certificate_tolerance,
///           armijo, backtrack, max_backtracks, divergence_bound,
///           hessian_mode ("automatic" | "gradient_only")
///   oracle: method ("penalty" | "grid"), initial_penalty, penalty_growth,
///           penalty_rounds, inner_iterations, starts, feasibility_tolerance,
///           grid_bound, grid_resolution
void apply_solver_config(const Json& j, SolverConfig& config, const std::string& where = "solver");
void apply_oracle_config(const Json& j, OracleConfig& config, const std::string& where = "oracle");

Json solution_to_json(const Solution& sol, const InterpolationProblem& problem);
Json probe_report_to_json(const ProbeReport& report);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace sip::io
