#include "sip/io.hpp"
#include "sip_cli.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sip;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("sip_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

const char* kSinglePoint = R"({"format": 1, "space": {"dim": 2, "p": 3}, "data": [{"x": [1, 1], "y": 1}]})";

Json without_wall_time(Json j) {
  j.erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("solve") {
  const std::string path = write_file("single.json", kSinglePoint);
  SUBCASE("single point p = 3") {
    const Result r = run({"solve", path});
    REQUIRE(r.code == 0);
    const Json rep = r.report();
    CHECK(rep["format"] == 1);
    CHECK(rep["tool"] == "sip-interp");
    CHECK(rep["verdict"] == "pass");
    CHECK(rep["solution"]["f"][0].get<double>() == doctest::Approx(0.6299605249474366).epsilon(1e-10));
    CHECK(rep["solution"]["peaking_gap"].get<double>() <= 1e-8);
    CHECK(rep["solution"]["representer_deviation"].get<double>() <= 1e-8);
    CHECK(rep.contains("wall_time"));
    CHECK(rep.contains("version"));
  }
  SUBCASE("oracle check") {
    const Result r = run({"solve", path, "--oracle-check"});
    REQUIRE(r.code == 0);
    CHECK(r.report()["oracle"]["relative_distance"].get<double>() <= 1e-4);
  }
  SUBCASE("Hilbert problem") {
    const std::string p2 = write_file(
        "p2.json", R"({"space": {"dim": 3, "p": 2, "weights": [1, 2, 0.5]},
                       "data": [{"x": [1, 0, 2], "y": 1}, {"x": [0, 1, -1], "y": -2}]})");
    const Result r = run({"solve", p2});
    REQUIRE(r.code == 0);
    const io::ProblemFile pf = io::problem_from_json(io::read_json_file(p2));
    const Eigen::VectorXd ref = testing::hilbert_least_norm(pf.problem);
    for (int i = 0; i < 3; ++i)
      CHECK(r.report()["solution"]["f"][i].get<double>() == doctest::Approx(ref[i]).epsilon(1e-10));
  }
  SUBCASE("zero targets") {
    const std::string zero =
        write_file("zero.json", R"({"space": {"dim": 2, "p": 3}, "data": [{"x": [1, 1], "y": 0}]})");
    const Result r = run({"solve", zero});
    REQUIRE(r.code == 0);
    CHECK(r.report()["solution"]["f"] == Json::parse("[0.0, 0.0]"));
  }
  SUBCASE("malformed JSON") {
    const std::string bad = write_file("bad.json", "{\"space\": {\"dim\": 2,\n \"p\": 3},\n \"data\": [,]}");
    const Result r = run({"solve", bad});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("bad.json:3:") != std::string::npos);
  }
  SUBCASE("invalid field") {
    const std::string bad =
        write_file("badfield.json", R"({"space": {"dim": 2, "p": 3}, "data": [{"x": [1, 1, 1], "y": 1}]})");
    const Result r = run({"solve", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("data[0].x") != std::string::npos);
  }
  SUBCASE("missing file") { CHECK(run({"solve", "/nonexistent.json"}).code == 1); }
  SUBCASE("infeasible") {
    const std::string inf = write_file(
        "inf.json", R"({"space": {"dim": 2, "p": 3}, "data": [{"x": [1, 1], "y": 1}, {"x": [2, 2], "y": 1}]})");
    const Result r = run({"solve", inf});
    CHECK(r.code == 2);
    CHECK(r.err.find("residual trace") != std::string::npos);
  }
  SUBCASE("not admissible") {
    const std::string custom = write_file(
        "custom.json", R"({"space": {"dim": 2, "p": 3}, "data": [{"x": [1, 1], "y": 1}],
                           "regulariser": {"type": "builtin_custom", "name": "abs_first_coord"}})");
    CHECK(run({"solve", custom}).code == 4);
  }
  SUBCASE("non-convergence") {
    const std::string cfg = write_file("cfg.json", R"({"solver": {"max_iterations": 1}})");
    const std::string hard = write_file(
        "hard.json", R"({"space": {"dim": 4, "p": 4}, "data": [{"x": [1, 0.2, 0, 3], "y": 1}, {"x": [0, 1, -1, 0.5], "y": -2}]})");
    CHECK(run({"solve", hard, "--config", cfg}).code == 5);
  }
  SUBCASE("bad config") {
    const std::string cfg = write_file("badcfg.json", R"({"solver": {"max_iter": 1}})");
    const Result r = run({"solve", path, "--config", cfg});
    CHECK(r.code == 1);
    CHECK(r.err.find("solver.max_iter") != std::string::npos);
  }
  SUBCASE("--output keeps stdout empty") {
    const std::string out = (scratch_dir() / "report.json").string();
    const Result r = run({"solve", path, "--output", out});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const Json rep = io::read_json_file(out);
    CHECK(rep["command"] == "solve");
  }
  SUBCASE("deterministic reports") {
    const Result a = run({"solve", path, "--oracle-check", "--seed", "3"});
    const Result b = run({"solve", path, "--oracle-check", "--seed", "3", "--jobs", "4"});
    CHECK(without_wall_time(a.report()) == without_wall_time(b.report()));
    CHECK(without_wall_time(a.report()).dump() == without_wall_time(b.report()).dump());
    CHECK(a.report()["seed"] == 3);
  }
}

TEST_CASE("seed from the environment") {
  const std::string path = write_file("single_env.json", kSinglePoint);
  ::setenv("SIP_INTERP_SEED", "42", 1);
  CHECK(run({"solve", path}).report()["seed"] == 42);
  CHECK(run({"solve", path, "--seed", "5"}).report()["seed"] == 5);
  ::setenv("SIP_INTERP_SEED", "nope", 1);
  CHECK(run({"solve", path}).code == 1);
  ::unsetenv("SIP_INTERP_SEED");
  CHECK(run({"solve", path}).report()["seed"] == 0);
}

TEST_CASE("verify-axioms") {
  const Result r = run({"verify-axioms"});
  REQUIRE(r.code == 0);
  const Json rep = r.report();
  CHECK(rep["samples"] == 10000);
  CHECK(rep["checks"].size() == 7);
  for (const auto& c : rep["checks"]) CHECK(c["verdict"] == "pass");

  CHECK(run({"verify-axioms", "--p-list", "1.0"}).code == 1);
  CHECK(run({"verify-axioms", "--samples", "0"}).code == 1);
  CHECK(run({"verify-axioms", "--dims", "0"}).code == 1);
  const Result small = run({"verify-axioms", "--p-list", "1.5,3", "--dims", "2,4", "--samples", "100"});
  CHECK(small.code == 0);
  CHECK(small.report()["p_list"] == Json::parse("[1.5, 3.0]"));
}

TEST_CASE("probe-regulariser") {
  CHECK(run({"probe-regulariser", R"({"type": "power", "alpha": 2})", "--samples", "2000"}).code == 0);
  CHECK(run({"probe-regulariser", "power:2", "--space", R"({"dim": 3, "p": 1.5})", "--samples", "500"}).code == 0);

  const Result r = run({"probe-regulariser", R"({"type": "builtin_custom", "name": "abs_first_coord"})"});
  CHECK(r.code == 4);
  const Json rep = r.report();
  CHECK(rep["verdict"] == "counterexample");
  CHECK(rep["probes"][0]["witness"].contains("f_t"));

  CHECK(run({"probe-regulariser", R"({"type": "piecewise", "knots": [1], "values": [0, 1], "at_jump": [3]})"}).code ==
        1);
  CHECK(run({"probe-regulariser", "nope"}).code == 1);
  CHECK(run({"probe-regulariser", "power:1", "--space", R"({"dim": 2, "p": 1})"}).code == 1);

  const std::string file = write_file("reg.json", R"({"type": "piecewise", "knots": [1], "values": [0, 1]})");
  CHECK(run({"probe-regulariser", file, "--samples", "500"}).code == 0);
}

TEST_CASE("compare-regularisers") {
  const std::string path = write_file("single_cmp.json", kSinglePoint);
  const Result r = run({"compare-regularisers", path, "--regs", "power:0.5,power:1,power:2"});
  REQUIRE(r.code == 0);
  const Json rep = r.report();
  CHECK(rep["distance_matrix"].size() == 3);
  CHECK(rep["max_distance"].get<double>() <= 1e-4);

  CHECK(run({"compare-regularisers", path, "--regs", "power:1"}).code == 0);
  CHECK(run({"compare-regularisers", path, "--regs", R"([{"type": "power", "alpha": 2}, "power:1"])"}).code == 0);
  CHECK(run({"compare-regularisers", path, "--regs", "power:1,abs_first_coord"}).code == 4);
  CHECK(run({"compare-regularisers", path, "--regs", ""}).code == 1);
}

TEST_CASE("decompose") {
  SUBCASE("vector in the span") {
    const std::string f = write_file("dec1.json", R"({"space": {"dim": 3, "p": 3}, "x": [1, 2, 2], "basis": [[1, 2, 2]]})");
    const Result r = run({"decompose", f});
    REQUIRE(r.code == 0);
    for (const auto& v : r.report()["x_perp"]) CHECK(std::abs(v.get<double>()) <= 1e-12);
  }
  SUBCASE("coordinate split") {
    const std::string f = write_file("dec2.json", R"({"space": {"dim": 2, "p": 4}, "x": [3, -1], "basis": [[1, 0]]})");
    const Result r = run({"decompose", f});
    REQUIRE(r.code == 0);
    CHECK(r.report()["x0"][0].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.report()["x_perp"][1].get<double>() == -1.0);
  }
  SUBCASE("random dim 4") {
    const std::string f = write_file(
        "dec3.json",
        R"({"space": {"dim": 4, "p": 2.5, "weights": [1, 0.5, 2, 1.5]}, "x": [0.3, -1.2, 2.0, 0.7], "basis": [[1, 0.4, -0.2, 0.9], [0.1, -1, 0.5, 0.3]]})");
    const Result r = run({"decompose", f});
    REQUIRE(r.code == 0);
    for (const auto& v : r.report()["sip_basis_x_perp"]) CHECK(std::abs(v.get<double>()) <= 1e-8);
  }
  SUBCASE("dependent basis") {
    const std::string f =
        write_file("dec4.json", R"({"space": {"dim": 3, "p": 3}, "x": [1, 2, 3], "basis": [[1, 0, 1], [2, 0, 2]]})");
    const Result r = run({"decompose", f});
    CHECK(r.code == 1);
    CHECK(r.err.find("rank deficient subspace basis") != std::string::npos);
  }
}

TEST_CASE("command line errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"solve"}).code == 1);
  CHECK(run({"verify-axioms", "--samples", "many"}).code == 1);
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify-axioms") != std::string::npos);
}
