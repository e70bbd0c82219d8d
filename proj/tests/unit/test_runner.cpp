#include <filesystem>
#include <fstream>
#include <sstream>

#include "dispersia/error.hpp"
#include "dispersia/runner.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace dispersia;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dispersia_runner_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int error_line(const std::string& text) {
  try {
    validate_run_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const char* kWeyl = R"({
  "version": "1",
  "seed": 42,
  "experiments": [
    {"name": "weyl_saturation", "id": "w", "expected_slope": 2, "tolerance": 0.1,
     "params": {"d": 2, "cutoffs": [8, 16, 32]}}
  ]
})";

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("{\"version\": \"1\",\n \"experiments\": [\n {\"name\": \"nope\"}]}") == 3);
  CHECK(error_line("{\"version\": \"2\", \"experiments\": []}") == 1);
  CHECK(error_line("{\"version\": \"1\",\n \"bogus\": 1,\n \"experiments\": []}") == 2);
  CHECK(error_line("{\"version\": \"1\", \"experiments\": [") == 1);
  CHECK(error_line(R"({"version": "1", "experiments": [
    {"name": "weyl_saturation", "id": "a", "params": {"d": 2, "cutoffs": [8, 16, 32]}},
    {"name": "weyl_saturation", "id": "a", "params": {"d": 2, "cutoffs": [8, 16, 32]}}]})") == 3);
  CHECK(error_line(R"({"version": "1", "experiments": [
    {"name": "packet", "id": "p",
     "params": {"d": 1, "cutoffs": [8, 16, 32],
                "p": 0.5}}]})") == 4);
  CHECK(error_line(kWeyl) == -1);
}

TEST_CASE("empty run writes headers only") {
  const auto dir = scratch("empty");
  RunOptions o;
  o.output_dir = dir.string();
  const auto out = run_config_text(R"({"version": "1", "experiments": []})", o);
  CHECK(out.all_pass);
  CHECK(out.experiments == 0);
  const auto csv = slurp(dir / "results.csv");
  CHECK(csv == "experiment,name,quantity,N,value,predicted_slope,fitted_slope,residual,pass,seed,config_hash,params\n");
}

TEST_CASE("invalid configs write nothing") {
  const auto dir = scratch("invalid");
  RunOptions o;
  o.output_dir = dir.string();
  CHECK_THROWS_AS(run_config_text("{\"version\": \"1\", \"experiments\": [{\"name\": \"x\"}]}", o), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("weyl run summary and determinism") {
  const auto a = scratch("weyl_a"), b = scratch("weyl_b"), c = scratch("weyl_c");
  RunOptions o;
  o.output_dir = a.string();
  const auto out = run_config_text(kWeyl, o);
  CHECK(out.all_pass);
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  const double slope = summary["experiments"][0]["fit"]["slope"];
  CHECK(std::abs(slope - 2) < 0.1);
  CHECK(summary["config_hash"].get<std::string>().size() == 16);
  CHECK(fs::exists(a / "plotdata" / "w.csv"));

  o.output_dir = b.string();
  run_config_text(kWeyl, o);
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));

  o.output_dir = c.string();
  o.seed = 7;
  run_config_text(kWeyl, o);
  const auto sc = nlohmann::json::parse(slurp(c / "summary.json"));
  CHECK(sc["experiments"][0]["seed"] == 7);
  CHECK(sc["config_hash"] != summary["config_hash"]);
}

TEST_CASE("failed checks are reported") {
  const auto dir = scratch("fail");
  RunOptions o;
  o.output_dir = dir.string();
  const auto out = run_config_text(R"({"version": "1", "experiments": [
    {"name": "weyl_saturation", "id": "w", "expected_slope": 3, "tolerance": 0.1,
     "params": {"d": 2, "cutoffs": [8, 16, 32]}}]})", o);
  CHECK_FALSE(out.all_pass);
  CHECK_FALSE(out.failures.empty());
  CHECK(fs::exists(dir / "results.csv"));
}

TEST_CASE("hartree configs") {
  const auto dir = scratch("hartree");
  RunOptions o;
  o.output_dir = dir.string();
  const char* text = R"({"version": "1",
    "propagator": {"kind": "fractional_schrodinger", "alpha": 2},
    "potential": {"kind": "zero"},
    "initial": [{"weight": 1, "state": {"d": 1, "entries": [[[0], 0.6, 0], [[2], 0, 0.8]]}}],
    "solver": {"dt": 0.01, "t_end": 0.1},
    "checks": {"max_mass_drift": 1e-10, "max_relative_energy_drift": 1e-12}})";
  const auto out = run_hartree_text(text, o);
  CHECK(out.all_pass);
  CHECK(fs::exists(dir / "trajectory.csv"));
  const auto cons = nlohmann::json::parse(slurp(dir / "conservation.json"));
  CHECK(cons["all_pass"] == true);

  CHECK_THROWS_AS(validate_hartree_config(R"({"version": "1",
    "initial": [{"weight": -1, "state": {"d": 1, "entries": [[[0], 1, 0]]}}]})"), ConfigError);
  CHECK_THROWS_AS(validate_hartree_config(R"({"version": "1",
    "potential": {"kind": "explicit", "coefficients": {"d": 1, "entries": [[[1], 0, 1]]}},
    "initial": [{"weight": 1, "state": {"d": 1, "entries": [[[0], 1, 0]]}}]})"), ConfigError);
}

TEST_CASE("fixtures") {
  const auto dir = scratch("fixtures");
  const auto names = emit_fixtures(dir.string());
  CHECK(names.size() >= 5);
  for (const auto& n : names) {
    const auto j = nlohmann::json::parse(slurp(dir / n));
    CHECK(j.contains("d"));
    CHECK(j.contains("entries"));
  }
  const auto ball = nlohmann::json::parse(slurp(dir / "ball_d2_N10.json"));
  CHECK(ball["entries"].size() == 317);
}
