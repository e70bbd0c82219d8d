#include <algorithm>
#include <filesystem>
#include <sstream>

#include "config_reader.hpp"
#include "dispersia/error.hpp"
#include "dispersia/hartree.hpp"
#include "dispersia/lattice.hpp"
#include "dispersia/runner.hpp"
#include "output.hpp"

namespace dispersia {

using detail::ConfigReader;
using detail::JsonLocator;
using nlohmann::json;

namespace {

struct HartreePlan {
  std::string output_dir;
  std::uint64_t hash = 0;
  std::uint64_t seed = 0;
  PropagatorSpec propagator = PropagatorSpec::fractional_schrodinger(2.0);
  PotentialSpec potential = PotentialSpec::zero();
  HartreeState initial;
  SolverConfig solver;
  bool snapshots = false;
  double max_mass_drift = 1e-10;
  double max_trace_drift = 1e-10;
  std::optional<double> max_relative_energy_drift;
  std::optional<double> max_density_variation;
  std::optional<int> levels;
  double order_min = 1.8, order_max = 2.2, energy_ratio_min = 3.5;
};

FourierState read_state(const json& node, const std::string& ptr, const JsonLocator& loc) {
  try {
    return fourier_state_from_json(node);
  } catch (const std::exception& e) {
    throw ConfigError(ptr + ": " + e.what(), loc.line(ptr));
  }
}

std::optional<double> optional_number(ConfigReader& r, const std::string& key) {
  if (!r.has(key)) {
    r.child(key);
    r.echo(key, nullptr);
    return std::nullopt;
  }
  return r.number(key);
}

HartreePlan parse_hartree(std::string_view text, const RunOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(),
                      detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const JsonLocator loc(text);
  ConfigReader top(doc, "", loc);
  HartreePlan plan;
  const auto version = top.string("version");
  if (version != "1") top.fail("version", "unsupported schema version \"" + version + "\" (expected \"1\")");
  plan.seed = top.unsigned_integer("seed", 0);
  if (options.seed) plan.seed = *options.seed;
  plan.output_dir = top.string("output_dir", "hartree_results");
  if (options.output_dir) plan.output_dir = *options.output_dir;
  plan.snapshots = top.boolean("snapshots", false);

  if (const json* p = top.child("propagator")) {
    ConfigReader r(*p, "/propagator", loc);
    const auto kind = r.string("kind", "fractional_schrodinger", {"fractional_schrodinger", "klein_gordon", "wave"});
    try {
      if (kind == "fractional_schrodinger") plan.propagator = PropagatorSpec::fractional_schrodinger(r.number("alpha", 2.0));
      else if (kind == "klein_gordon") plan.propagator = PropagatorSpec::klein_gordon(r.number("mass", 1.0));
      else plan.propagator = PropagatorSpec::wave();
    } catch (const InvalidArgument& e) {
      r.fail_here(e.what());
    }
    r.finish();
  }

  const json* init = top.child("initial");
  if (!init) top.fail_here("missing required key \"initial\"");
  if (!init->is_array() || init->empty()) top.fail("initial", "must be a nonempty array of {weight, state}");
  for (std::size_t j = 0; j < init->size(); ++j) {
    const std::string ptr = "/initial/" + std::to_string(j);
    ConfigReader r((*init)[j], ptr, loc);
    const double w = r.number("weight");
    if (w < 0) r.fail("weight", "must be >= 0");
    const json* st = r.child("state");
    if (!st) r.fail_here("missing required key \"state\"");
    plan.initial.weights.push_back(w);
    plan.initial.states.push_back(read_state(*st, ptr + "/state", loc));
    r.finish();
  }
  try {
    plan.initial.validate();
  } catch (const InvalidArgument& e) {
    top.fail("initial", e.what());
  }
  const int d = plan.initial.dimension();

  if (const json* p = top.child("potential")) {
    ConfigReader r(*p, "/potential", loc);
    const auto kind = r.string("kind", "zero", {"zero", "multiplier", "explicit"});
    try {
      if (kind == "multiplier") plan.potential = PotentialSpec::multiplier(r.number("a", 0.0));
      if (kind == "explicit") {
        const json* c = r.child("coefficients");
        if (!c) r.fail_here("missing required key \"coefficients\"");
        auto w = read_state(*c, "/potential/coefficients", loc);
        if (w.dimension() != d) r.fail("coefficients", "kernel dimension differs from the states");
        plan.potential = PotentialSpec::kernel(std::move(w));
      }
      plan.potential.with_offset(r.number("offset", 0.0));
    } catch (const InvalidArgument& e) {
      r.fail_here(e.what());
    }
    r.finish();
  }

  const json* sv = top.child("solver");
  if (!sv) top.fail_here("missing required key \"solver\"");
  {
    ConfigReader r(*sv, "/solver", loc);
    plan.solver.dt = r.positive("dt");
    plan.solver.t_end = r.number("t_end");
    if (plan.solver.t_end < 0) r.fail("t_end", "must be >= 0");
    const double n = plan.solver.t_end / plan.solver.dt;
    if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) r.fail("t_end", "must be an integer multiple of dt");
    if (n > 1e7) r.fail("dt", "more than 1e7 steps requested");
    plan.solver.scheme = r.string("scheme", "strang", {"strang", "lie"}) == "strang" ? SplitScheme::strang : SplitScheme::lie;
    plan.solver.grid = static_cast<int>(r.integer("grid", 0, 0, 1024));
    const int need = default_hartree_grid(plan.initial);
    if (plan.solver.grid != 0 && plan.solver.grid < need)
      r.fail("grid", "grid " + std::to_string(plan.solver.grid) + " is below the dealiasing minimum " + std::to_string(need));
    plan.solver.output_every = static_cast<int>(r.integer("output_every", 1, 1, 1 << 30));
    plan.solver.blowup_factor = r.number("blowup_factor", 1e6);
    if (!(plan.solver.blowup_factor > 1)) r.fail("blowup_factor", "must exceed 1");
    r.finish();
  }
  const int M = plan.solver.grid == 0 ? default_hartree_grid(plan.initial) : plan.solver.grid;
  if (plan.potential.kind() == PotentialSpec::Kind::kernel &&
      2 * plan.potential.kernel_coefficients().max_abs_frequency() >= M)
    top.fail("potential", "kernel frequencies exceed the grid band");

  if (const json* c = top.child("checks")) {
    ConfigReader r(*c, "/checks", loc);
    plan.max_mass_drift = r.number("max_mass_drift", 1e-10);
    plan.max_trace_drift = r.number("max_trace_drift", 1e-10);
    plan.max_relative_energy_drift = optional_number(r, "max_relative_energy_drift");
    plan.max_density_variation = optional_number(r, "max_density_variation");
    r.finish();
  }
  if (const json* c = top.child("convergence")) {
    ConfigReader r(*c, "/convergence", loc);
    plan.levels = static_cast<int>(r.integer("levels", 3, 2, 8));
    plan.order_min = r.number("order_min", 1.8);
    plan.order_max = r.number("order_max", 2.2);
    plan.energy_ratio_min = r.number("energy_ratio_min", 3.5);
    r.finish();
  }
  top.finish();
  doc["seed"] = plan.seed;
  plan.hash = fnv1a64(doc.dump());
  return plan;
}

json state_json(const HartreeState& s) {
  json states = json::array();
  for (const auto& f : s.states) states.push_back(to_json(f));
  return {{"time", s.time}, {"weights", s.weights}, {"states", states}};
}

}  // namespace

void validate_hartree_config(std::string_view text) { parse_hartree(text, {}); }

RunOutcome run_hartree_text(std::string_view text, const RunOptions& options) {
  const HartreePlan plan = parse_hartree(text, options);
  const auto tr = solve(plan.initial, plan.potential, plan.propagator, plan.solver);
  const auto& rep = tr.conservation;

  RunOutcome out;
  out.output_dir = plan.output_dir;
  out.experiments = 1;
  json checks = json::array();
  auto add = [&](const std::string& name, double value, const std::string& rel, double threshold) {
    const bool pass = rel == "<=" ? value <= threshold : value >= threshold;
    checks.push_back({{"name", name}, {"value", value}, {"relation", rel}, {"threshold", threshold}, {"pass", pass}});
    if (!pass) {
      out.all_pass = false;
      out.failures.push_back("hartree: check " + name + " failed (" + detail::fmt(value) + " " + rel + " " +
                             detail::fmt(threshold) + " does not hold)");
    }
  };
  add("max_mass_drift", rep.max_mass_drift, "<=", plan.max_mass_drift);
  add("trace_drift", rep.trace_drift, "<=", plan.max_trace_drift);
  if (plan.max_relative_energy_drift) add("relative_energy_drift", rep.relative_energy_drift, "<=", *plan.max_relative_energy_drift);
  const auto rho = grid_density(tr.final_state);
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  if (plan.max_density_variation) add("final_density_variation", *hi - *lo, "<=", *plan.max_density_variation);
  add("no_blowup", rep.blowup ? 0.0 : 1.0, ">=", 1.0);

  json summary = {{"config_hash", detail::hex64(plan.hash)},
                  {"seed", plan.seed},
                  {"steps", tr.steps},
                  {"grid", tr.final_state.M},
                  {"t_end", tr.final_state.time},
                  {"max_mass_drift", rep.max_mass_drift},
                  {"trace_drift", rep.trace_drift},
                  {"energy_drift", rep.energy_drift},
                  {"relative_energy_drift", rep.relative_energy_drift},
                  {"blowup", rep.blowup},
                  {"final_density_min", *lo},
                  {"final_density_max", *hi}};
  summary["blowup_step"] = rep.blowup_step ? json(*rep.blowup_step) : json();

  if (plan.levels) {
    const auto cv = convergence_study(plan.initial, plan.potential, plan.propagator, plan.solver, *plan.levels);
    json conv = {{"dts", cv.dts}, {"errors", cv.errors}, {"energy_drifts", cv.energy_drifts}, {"orders", cv.orders},
                 {"energy_ratios", cv.energy_ratios}, {"reference_dt", cv.reference_dt}};
    summary["convergence"] = conv;
    for (std::size_t i = 0; i < cv.orders.size(); ++i) {
      add("order_" + std::to_string(i) + "_min", cv.orders[i], ">=", plan.order_min);
      add("order_" + std::to_string(i) + "_max", cv.orders[i], "<=", plan.order_max);
      add("energy_ratio_" + std::to_string(i), cv.energy_ratios[i], ">=", plan.energy_ratio_min);
    }
  }
  summary["checks"] = checks;
  summary["all_pass"] = out.all_pass;

  std::ostringstream csv;
  csv << "step,t,j,mass,trace,energy\n";
  for (const auto& o : tr.samples)
    for (std::size_t j = 0; j < o.masses.size(); ++j)
      csv << o.step << ',' << detail::fmt(o.time) << ',' << j << ',' << detail::fmt(o.masses[j]) << ','
          << detail::fmt(o.trace) << ',' << detail::fmt(o.energy) << '\n';

  namespace fs = std::filesystem;
  const fs::path dir(plan.output_dir);
  detail::write_file(dir / "trajectory.csv", csv.str());
  detail::write_file(dir / "conservation.json", summary.dump(2) + "\n");
  if (plan.snapshots) {
    detail::write_file(dir / "snapshots" / "initial.json", state_json(plan.initial).dump(2) + "\n");
    detail::write_file(dir / "snapshots" / "final.json", state_json(tr.final_state.to_state()).dump(2) + "\n");
  }
  return out;
}

RunOutcome run_hartree_file(const std::string& path, const RunOptions& options) {
  return run_hartree_text(detail::read_file(path), options);
}

std::vector<std::string> emit_fixtures(const std::string& dir) {
  std::vector<std::pair<std::string, FourierState>> fixtures;
  fixtures.push_back({"constant_mode_d1.json", FourierState::mode({0})});
  fixtures.push_back({"single_mode_d1.json", FourierState::mode({1})});
  fixtures.push_back({"ball_d1_N2.json", FourierState::from_modes(enumerate(1, 2, Shape::ball))});
  fixtures.push_back({"ball_d2_N10.json", FourierState::from_modes(enumerate(2, 10, Shape::ball))});
  fixtures.push_back({"shell_d2_N5.json", FourierState::from_modes(enumerate(2, 5, Shape::shell))});
  const double r = 1 / std::sqrt(2.0);
  FourierState u1(1), u2(1);
  u1.set({0}, r);
  u1.set({1}, r);
  u2.set({0}, r);
  u2.set({1}, -r);
  fixtures.push_back({"two_mode_u1.json", u1});
  fixtures.push_back({"two_mode_u2.json", u2});
  std::vector<std::string> names;
  for (const auto& [name, f] : fixtures) {
    detail::write_file(std::filesystem::path(dir) / name, to_json(f).dump(2) + "\n");
    names.push_back(name);
  }
  return names;
}

}  // namespace dispersia
