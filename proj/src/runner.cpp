#include "dispersia/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "config_reader.hpp"
#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"
#include "dispersia/lattice.hpp"
#include "output.hpp"

namespace dispersia {

using detail::ConfigReader;
using detail::JsonLocator;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct Row {
  std::string quantity;
  double N = 0;
  double value = 0;
  bool fitted = false;  // belongs to the fitted series
};

struct Check {
  std::string name;
  double value = 0;
  std::string relation;  // "<=" or ">="
  double threshold = 0;
  bool pass = false;
};

Check check_le(std::string name, double value, double threshold) {
  return {std::move(name), value, "<=", threshold, value <= threshold};
}
Check check_ge(std::string name, double value, double threshold) {
  return {std::move(name), value, ">=", threshold, value >= threshold};
}

struct Outcome {
  std::vector<Row> rows;
  std::optional<ExponentFit> fit;
  std::vector<Check> checks;
};

struct Planned {
  std::string id;
  std::string name;
  int line = 0;
  json params;
  std::optional<double> expected;
  double tolerance = 0;
  std::string comparison = "two_sided";
  std::uint64_t seed = 0;
  bool has_fit = true;
  std::function<Outcome()> run;
};

struct Plan {
  std::uint64_t seed = 0;
  std::string output_dir;
  std::uint64_t hash = 0;
  std::vector<Planned> experiments;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError(std::string("malformed JSON: ") + e.what(), detail::line_of_offset(text, at));
  }
}

PropagatorSpec read_propagator(ConfigReader& parent, const std::string& key) {
  const json* node = parent.child(key);
  if (!node) {
    parent.echo(key, json{{"kind", "fractional_schrodinger"}, {"alpha", 2.0}});
    return PropagatorSpec::fractional_schrodinger(2.0);
  }
  ConfigReader r(*node, parent.pointer() + "/" + key, parent.locator());
  const auto kind = r.string("kind", "fractional_schrodinger", {"fractional_schrodinger", "klein_gordon", "wave"});
  try {
    PropagatorSpec P = PropagatorSpec::wave();
    if (kind == "fractional_schrodinger") P = PropagatorSpec::fractional_schrodinger(r.number("alpha", 2.0));
    if (kind == "klein_gordon") P = PropagatorSpec::klein_gordon(r.number("mass", 1.0));
    r.finish();
    parent.echo(key, r.echoed());
    return P;
  } catch (const InvalidArgument& e) {
    r.fail_here(e.what());
  }
}

int read_dimension(ConfigReader& r, std::int64_t fallback) {
  return static_cast<int>(r.integer("d", fallback, 1, kMaxDimension));
}

double read_alpha(ConfigReader& r) {
  const double a = r.positive("alpha", 2.0);
  if (a == 1) r.fail("alpha", "alpha = 1 is excluded");
  return a;
}

void require_at_least_two(ConfigReader& r, const std::string& key, const Exponent& e) {
  if (!e.is_infinite() && e.value() < 2) r.fail(key, "must be >= 2");
}

// ---------------------------------------------------------------------------

std::function<Outcome()> plan_packet(ConfigReader& r) {
  PacketConfig c;
  c.d = read_dimension(r, 1);
  c.alpha = read_alpha(r);
  c.p = r.exponent("p", 4.0);
  c.q = r.exponent("q", 4.0);
  c.cutoffs = r.cutoffs("cutoffs");
  c.window = r.positive("window", 0.125);
  c.samples_per_axis = static_cast<int>(r.integer("samples_per_axis", 16, 4, 4096));
  c.normalized = r.boolean("normalized", true);
  return [c] {
    const auto rep = packet_experiment(c);
    Outcome o;
    for (std::size_t i = 0; i < rep.cutoffs.size(); ++i)
      o.rows.push_back({c.normalized ? "windowed_norm" : "windowed_norm_unnormalized", rep.cutoffs[i], rep.values[i], true});
    o.fit = rep.fit;
    return o;
  };
}

std::function<Outcome()> plan_weyl(ConfigReader& r) {
  WeylConfig c;
  c.d = read_dimension(r, 2);
  c.propagator = read_propagator(r, "propagator");
  c.p = r.exponent("p", 4.0);
  c.q = r.exponent("q", 4.0);
  require_at_least_two(r, "p", c.p);
  require_at_least_two(r, "q", c.q);
  c.cutoffs = r.cutoffs("cutoffs");
  c.nu = r.number("nu", 1.0);
  if (c.nu == 0) r.fail("nu", "must be nonzero");
  c.time_samples = static_cast<std::size_t>(r.integer("time_samples", 4, 1, 4096));
  c.space_samples = static_cast<int>(r.integer("space_samples", 8, 1, 1024));
  c.t_start = r.number("t_start", 0.0);
  c.t_end = r.number("t_end", 1.0);
  if (!(c.t_end > c.t_start)) r.fail("t_end", "must exceed t_start");
  const double tol = r.number("identity_tolerance", 0.0);
  if (tol < 0) r.fail("identity_tolerance", "must be >= 0");
  return [c, tol] {
    const auto rep = weyl_saturation_experiment(c);
    Outcome o;
    double worst = 0;
    for (const auto& cell : rep.cells) {
      o.rows.push_back({"density_norm", cell.N, cell.norm, true});
      o.rows.push_back({"lattice_count", cell.N, static_cast<double>(cell.count)});
      o.rows.push_back({"identity_error", cell.N, cell.max_identity_error});
      worst = std::max(worst, cell.max_identity_error);
    }
    o.fit = rep.scaling.fit;
    o.checks.push_back(check_le("identity_error", worst, tol));
    return o;
  };
}

std::function<Outcome()> plan_shell(ConfigReader& r, bool& has_fit) {
  ShellConfig c;
  c.d = read_dimension(r, 2);
  c.q = r.exponent("q", 4.0);
  c.cutoffs = r.cutoffs("cutoffs", 1, true);
  c.window = r.positive("window", 0.125);
  c.samples_per_axis = static_cast<int>(r.integer("samples_per_axis", 32, 1, 4096));
  for (double N : c.cutoffs)
    if (count_representations(c.d, static_cast<std::int64_t>(N * N)) == 0) {
      std::string admissible;
      for (std::int64_t m = 1; m <= static_cast<std::int64_t>(c.cutoffs.back()); ++m)
        if (count_representations(c.d, m * m) > 0) admissible += " " + std::to_string(m);
      r.fail("cutoffs", "empty shell |k| = " + std::to_string(static_cast<std::int64_t>(N)) + "; admissible N:" + admissible);
    }
  has_fit = c.cutoffs.size() >= 3;
  return [c] {
    const auto rep = shell_eigenfunction_experiment(c);
    Outcome o;
    for (const auto& cell : rep.cells) {
      const auto N = static_cast<double>(cell.N);
      o.rows.push_back({"windowed_norm", N, cell.windowed_norm, true});
      o.rows.push_back({"shell_count", N, static_cast<double>(cell.shell_count)});
      o.rows.push_back({"l2_norm_sq", N, cell.l2_norm_sq});
      o.rows.push_back({"value_at_origin", N, cell.value_at_origin.real()});
      o.rows.push_back({"ratio_to_prediction", N, cell.ratio});
    }
    if (c.cutoffs.size() >= 3) o.fit = rep.scaling.fit;
    o.checks.push_back(check_ge("identities_exact", rep.identities_exact ? 1.0 : 0.0, 1.0));
    return o;
  };
}

std::function<Outcome()> plan_cluster(ConfigReader& r) {
  ClusterConfig c;
  c.d = read_dimension(r, 2);
  c.alpha = read_alpha(r);
  c.j_values = r.cutoffs("j_values", 1);
  c.width = r.positive("width", 1.0);
  for (double j : c.j_values)
    if (!(j > c.width)) r.fail("j_values", "each j must exceed the width");
  c.epsilon = r.positive("epsilon", 0.01);
  c.samples_per_axis = static_cast<int>(r.integer("samples_per_axis", 5, 1, 1024));
  c.min_ratio = r.number("min_ratio", 0.5);
  const double gram_tol = r.number("gram_tolerance", 1e-10);
  return [c, gram_tol] {
    const auto rep = torus_cluster_experiment(c);
    Outcome o;
    for (const auto& cell : rep.cells) {
      o.rows.push_back({"min_ratio", cell.j, cell.min_ratio});
      o.rows.push_back({"shell_count", cell.j, static_cast<double>(cell.shell_count)});
    }
    o.checks.push_back(check_ge("smallest_ratio", rep.smallest_ratio, c.min_ratio));
    o.checks.push_back(check_le("gram_deviation", rep.gram_deviation, gram_tol));
    return o;
  };
}

std::function<Outcome()> plan_zonal(ConfigReader& r) {
  ZonalConfig c;
  c.cutoffs = r.cutoffs("cutoffs", 3, true);
  c.p = r.exponent("p", 4.0);
  c.q = r.exponent("q", 4.0);
  require_at_least_two(r, "p", c.p);
  require_at_least_two(r, "q", c.q);
  c.phi_samples = static_cast<int>(r.integer("phi_samples", 8, 1, 4096));
  c.interval_length = r.positive("interval_length", 1.0);
  c.normalization_degree = static_cast<int>(r.integer("normalization_degree", 0, 0, 4096));
  const double tol = r.number("normalization_tolerance", 1e-6);
  return [c, tol] {
    const auto rep = zonal_sphere_experiment(c);
    Outcome o;
    for (std::size_t i = 0; i < rep.scaling.cutoffs.size(); ++i)
      o.rows.push_back({"density_norm", rep.scaling.cutoffs[i], rep.scaling.values[i], true});
    o.fit = rep.scaling.fit;
    o.checks.push_back(check_le("normalization_error", rep.max_normalization_error, tol));
    return o;
  };
}

std::function<Outcome()> plan_decoupling(ConfigReader& r, std::uint64_t seed, bool& has_fit) {
  DecouplingInstance base;
  base.d = read_dimension(r, 1);
  if (base.d != 1) r.fail("d", "only d = 1 is implemented");
  base.alpha = read_alpha(r);
  const Exponent p = r.exponent("p", 6.0);
  if (p.is_infinite() || p.value() < 2 || p.value() > 6) r.fail("p", "must lie in [2, 2(d+2)/d] = [2, 6]");
  const auto deltas = r.numbers("deltas");
  if (deltas.size() < 2) r.fail("deltas", "needs at least 2 entries");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0 && deltas[i] <= 1)) r.fail("deltas", "entries must lie in (0, 1]");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) r.fail("deltas", "entries must be strictly decreasing");
    const double blocks = 2 / std::sqrt(deltas[i]);
    if (std::abs(blocks - std::round(blocks)) > 1e-9 * blocks) r.fail("deltas", "2 / sqrt(delta) must be an integer");
  }
  const auto density = r.string("density", "constant", {"constant", "random_phase", "single_block"});
  base.density = density == "constant"       ? DecouplingDensity::constant
                 : density == "random_phase" ? DecouplingDensity::random_phase
                                             : DecouplingDensity::single_block;
  base.block = static_cast<int>(r.integer("block", 0, 0, 1 << 20));
  base.nodes_per_block = static_cast<int>(r.integer("nodes_per_block", 8, 8, 1024));
  base.grid_spacing = r.positive("grid_spacing", 0.25);
  base.min_grid = static_cast<int>(r.integer("min_grid", 32, 32, 1 << 16));
  base.weight_extent = r.number("weight_extent", 2.0);
  if (base.weight_extent < 1) r.fail("weight_extent", "must be >= 1");
  const double radius_factor = r.number("radius_factor", 1.0);
  if (radius_factor < 1) r.fail("radius_factor", "must be >= 1");
  const double growth = r.number("growth_exponent", 0.1);
  base.seed = seed;
  has_fit = deltas.size() >= 3;
  return [base, p, deltas, radius_factor, growth] {
    Outcome o;
    std::vector<double> ratios;
    for (double delta : deltas) {
      auto in = base;
      in.delta = delta;
      in.radius = radius_factor * std::pow(delta, -std::max(1.0, in.alpha / 2));
      const auto res = decoupling_ratio(in, p);
      o.rows.push_back({"ratio", 1 / delta, res.ratio, true});
      o.rows.push_back({"lhs", 1 / delta, res.lhs});
      o.rows.push_back({"rhs", 1 / delta, res.rhs});
      ratios.push_back(res.ratio);
    }
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      const double allowed = std::pow(deltas[i - 1] / deltas[i], growth);
      o.checks.push_back(check_le("growth_" + std::to_string(i), ratios[i] / ratios[i - 1], allowed));
    }
    if (deltas.size() >= 3) {
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t i = 0; i < deltas.size(); ++i) pairs.push_back({1 / deltas[i], ratios[i]});
      o.fit = fit_exponent(pairs);
    }
    return o;
  };
}

std::function<Outcome()> plan_restriction(ConfigReader& r, std::uint64_t seed) {
  RestrictionConfig c;
  c.d = read_dimension(r, 1);
  c.alpha = read_alpha(r);
  c.p = r.exponent("p", 6.0);
  const double p_max = 2.0 * (c.d + 2) / c.d;
  if (c.p.is_infinite() || c.p.value() < 2 || c.p.value() > p_max)
    r.fail("p", "must lie in [2, 2(d+2)/d]");
  c.cutoffs = r.cutoffs("cutoffs");
  for (double N : c.cutoffs)
    if (N < 1) r.fail("cutoffs", "entries must be >= 1");
  c.radius_factor = r.number("radius_factor", 1.0);
  if (c.radius_factor < 1) r.fail("radius_factor", "must be >= 1");
  c.trials = static_cast<int>(r.integer("trials", 20, 1, 100000));
  c.samples = static_cast<int>(r.integer("samples", 16384, 1, 1 << 26));
  c.seed = seed;
  return [c] {
    const auto rep = discrete_restriction_experiment(c);
    Outcome o;
    for (const auto& cell : rep.cells) {
      o.rows.push_back({"max_ratio", cell.N, cell.max_ratio, true});
      o.rows.push_back({"mean_ratio", cell.N, cell.mean_ratio});
    }
    o.fit = rep.scaling.fit;
    return o;
  };
}

std::function<Outcome()> plan_duality(ConfigReader& r, std::uint64_t seed) {
  DualityConfig c;
  c.p = r.exponent("p", 4.0);
  c.q = r.exponent("q", 4.0);
  require_at_least_two(r, "p", c.p);
  require_at_least_two(r, "q", c.q);
  c.beta = r.exponent("beta", 2.0);
  c.samples = static_cast<int>(r.integer("samples", 200, 0, 1000000));
  c.slack = r.number("slack", 1e-6);
  if (c.slack < 0) r.fail("slack", "must be >= 0");
  c.seed = seed;
  const auto instances = static_cast<int>(r.integer("instances", 1, 1, 100000));
  const double oracle_tol = r.number("oracle_tolerance", 1e-9);

  const json* op = r.child("operator");
  if (!op) r.fail_here("missing required key \"operator\"");
  ConfigReader o(*op, r.pointer() + "/operator", r.locator());
  const auto kind = o.string("kind", "random", {"random", "rank_one", "propagator"});
  std::function<FiniteOperator(int)> make;
  SampleGrid grid;
  if (kind == "propagator") {
    const int d = static_cast<int>(o.integer("d", 1, 1, kMaxDimension));
    const double N = o.number("N", 2.0);
    const int M = static_cast<int>(o.integer("M", 8, 1, 64));
    const int nt = static_cast<int>(o.integer("time_count", 4, 1, 64));
    const double t_end = o.positive("t_end", 1.0);
    PropagatorSpec P = read_propagator(o, "propagator");
    const auto basis = enumerate(d, N, Shape::ball);
    if (basis.size() < 1 || basis.size() > 64) o.fail("N", "ball must contain 1..64 modes");
    const auto st = SpaceTimeGrid::uniform(d, M, 0.0, t_end, static_cast<std::size_t>(nt));
    if (st.size() > 4096) o.fail("M", "sample grid exceeds 4096 points");
    grid = {nt, static_cast<int>(st.points_per_slice())};
    make = [basis, st, P](int) { return propagator_operator(basis, st, P); };
  } else {
    grid.time_count = static_cast<int>(o.integer("time_count", 4, 1, 512));
    grid.space_count = static_cast<int>(o.integer("space_count", 4, 1, 512));
    if (grid.size() > 4096) o.fail("space_count", "sample grid exceeds 4096 points");
    const auto cols = static_cast<Eigen::Index>(o.integer("cols", 8, 1, 64));
    const auto rows = static_cast<Eigen::Index>(grid.size());
    if (kind == "rank_one") {
      make = [rows, cols](int) {
        FiniteOperator T{Eigen::MatrixXcd::Zero(rows, cols)};
        T.matrix.col(0).setConstant(1 / std::sqrt(static_cast<double>(rows)));
        return T;
      };
    } else {
      make = [rows, cols, seed](int i) {
        Rng rng(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(i + 1)));
        FiniteOperator T{Eigen::MatrixXcd(rows, cols)};
        for (Eigen::Index c2 = 0; c2 < cols; ++c2)
          for (Eigen::Index r2 = 0; r2 < rows; ++r2) T.matrix(r2, c2) = rng.complex_normal();
        return T;
      };
    }
  }
  o.finish();
  r.echo("operator", o.echoed());
  const bool rank_one = kind == "rank_one";
  return [c, grid, make, instances, rank_one, oracle_tol] {
    Outcome out;
    double worst = 0;
    for (int i = 0; i < instances; ++i) {
      const auto T = make(i);
      auto cfg = c;
      cfg.seed = c.seed + static_cast<std::uint64_t>(i);
      const auto rep = duality_probe(T, grid, cfg);
      const double n = static_cast<double>(i);
      out.rows.push_back({"c_sys", n, rep.c_sys});
      out.rows.push_back({"c_dual", n, rep.c_dual});
      out.rows.push_back({"c_dual_random", n, rep.c_dual_random});
      out.rows.push_back({"certificate_excess", n, rep.certificate_excess});
      out.rows.push_back({"reverse_gap", n, rep.reverse_gap});
      if (rep.c_dual > 0) worst = std::max(worst, rep.c_sys / rep.c_dual);
      if (rank_one) {
        // Rank one onto the normalized constant: C = n_t^{2/p} n_x^{2/q} / (n_t n_x).
        const double oracle = std::pow(grid.time_count, c.p.half().reciprocal()) *
                              std::pow(grid.space_count, c.q.half().reciprocal()) / static_cast<double>(grid.size());
        out.checks.push_back(check_le("oracle_c_sys_" + std::to_string(i), std::abs(rep.c_sys - oracle) / oracle, oracle_tol));
        out.checks.push_back(check_le("oracle_c_dual_" + std::to_string(i), std::abs(rep.c_dual - oracle) / oracle, oracle_tol));
      }
    }
    out.checks.insert(out.checks.begin(), check_le("c_sys_over_c_dual", worst, 1 + c.slack));
    return out;
  };
}

const std::vector<std::string> kExperimentNames = {"packet",         "weyl_saturation",      "shell_eigenfunction",
                                                   "torus_cluster",  "zonal_sphere",         "decoupling",
                                                   "discrete_restriction", "duality_probe"};

Plan parse_plan(std::string_view text, const RunOptions& options) {
  json doc = parse_json(text);
  const JsonLocator loc(text);
  ConfigReader top(doc, "", loc);
  const auto version = top.string("version");
  if (version != "1") top.fail("version", "unsupported schema version \"" + version + "\" (expected \"1\")");
  Plan plan;
  plan.seed = top.unsigned_integer("seed", 0);
  if (options.seed) plan.seed = *options.seed;
  plan.output_dir = top.string("output_dir", "results");
  if (options.output_dir) plan.output_dir = *options.output_dir;
  const json* list = top.child("experiments");
  if (!list) top.fail_here("missing required key \"experiments\"");
  if (!list->is_array()) top.fail("experiments", "must be an array");
  top.finish();

  std::set<std::string> ids;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string ptr = "/experiments/" + std::to_string(i);
    ConfigReader e((*list)[i], ptr, loc);
    Planned x;
    x.line = e.line();
    x.name = e.string("name", std::nullopt, kExperimentNames);
    x.id = e.string("id", x.name);
    if (x.id.empty() || x.id.find_first_of("/\\,\" \n") != std::string::npos)
      e.fail("id", "must be nonempty without separators, quotes or whitespace");
    if (!ids.insert(x.id).second) e.fail("id", "duplicate experiment id \"" + x.id + "\"");
    x.seed = e.unsigned_integer("seed", plan.seed);
    if (options.seed) x.seed = *options.seed;
    if (e.has("expected_slope")) {
      x.expected = e.number("expected_slope");
      x.tolerance = e.number("tolerance");
      if (x.tolerance < 0) e.fail("tolerance", "must be >= 0");
    } else if (e.has("tolerance")) {
      e.fail("tolerance", "given without expected_slope");
    }
    x.comparison = e.string("comparison", "two_sided", {"two_sided", "upper", "lower"});

    const json empty = json::object();
    const json* params = e.child("params");
    ConfigReader p(params ? *params : empty, ptr + "/params", loc);
    if (x.name == "packet") x.run = plan_packet(p);
    else if (x.name == "weyl_saturation") x.run = plan_weyl(p);
    else if (x.name == "shell_eigenfunction") x.run = plan_shell(p, x.has_fit);
    else if (x.name == "torus_cluster") { x.run = plan_cluster(p); x.has_fit = false; }
    else if (x.name == "zonal_sphere") x.run = plan_zonal(p);
    else if (x.name == "decoupling") x.run = plan_decoupling(p, x.seed, x.has_fit);
    else if (x.name == "discrete_restriction") x.run = plan_restriction(p, x.seed);
    else { x.run = plan_duality(p, x.seed); x.has_fit = false; }
    p.finish();
    e.finish();
    if (x.expected && !x.has_fit) e.fail("expected_slope", "experiment \"" + x.id + "\" has no fitted slope");
    x.params = p.echoed();
    plan.experiments.push_back(std::move(x));
  }

  doc["seed"] = plan.seed;
  plan.hash = fnv1a64(doc.dump());
  return plan;
}

struct Finished {
  const Planned* plan;
  Outcome outcome;
  bool pass = true;
  double seconds = 0;
};

void apply_slope_check(const Planned& p, Outcome& o) {
  if (!p.expected || !o.fit) return;
  const double s = o.fit->slope, e = *p.expected;
  if (p.comparison == "two_sided") o.checks.push_back(check_le("slope_deviation", std::abs(s - e), p.tolerance));
  else if (p.comparison == "upper") o.checks.push_back(check_le("slope", s, e + p.tolerance));
  else o.checks.push_back(check_ge("slope", s, e - p.tolerance));
}

}  // namespace

void validate_run_config(std::string_view text) { parse_plan(text, {}); }

RunOutcome run_config_text(std::string_view text, const RunOptions& options) {
  const Plan plan = parse_plan(text, options);
  std::vector<Finished> done;
  for (const auto& p : plan.experiments) {
    Finished f{&p, {}};
    const auto start = std::chrono::steady_clock::now();
    try {
      f.outcome = p.run();
    } catch (const InvalidArgument& e) {
      throw ConfigError("experiment \"" + p.id + "\": " + e.what(), p.line);
    }
    f.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    apply_slope_check(p, f.outcome);
    for (const auto& c : f.outcome.checks) f.pass = f.pass && c.pass;
    done.push_back(std::move(f));
  }

  RunOutcome out;
  out.output_dir = plan.output_dir;
  out.experiments = done.size();
  const std::string hash = detail::hex64(plan.hash);

  std::ostringstream csv;
  csv << "experiment,name,quantity,N,value,predicted_slope,fitted_slope,residual,pass,seed,config_hash,params\n";
  json summary = {{"version", "1"}, {"seed", plan.seed}, {"config_hash", hash}, {"experiments", json::array()}};
  std::vector<std::pair<std::string, std::string>> plots;
  std::ostringstream timing;
  timing << "experiment,seconds\n";
  for (const auto& f : done) {
    const auto& p = *f.plan;
    const auto& o = f.outcome;
    const std::string params = detail::csv_quote(p.params.dump());
    std::ostringstream plot;
    plot << "# log_N log_value\n";
    for (const auto& row : o.rows) {
      std::ostringstream line;
      line << p.id << ',' << p.name << ',' << row.quantity << ',' << detail::fmt(row.N) << ',' << detail::fmt(row.value)
           << ',' << (p.expected ? detail::fmt(*p.expected) : "") << ',' << (o.fit && row.fitted ? detail::fmt(o.fit->slope) : "")
           << ',' << (o.fit && row.fitted ? detail::fmt(fit_residual(*o.fit, row.N, row.value)) : "") << ','
           << (f.pass ? "true" : "false") << ',' << p.seed << ',' << hash << ',' << params;
      csv << line.str() << '\n';
      if (!f.pass && row.fitted) out.failures.push_back(line.str());
      if (row.fitted) plot << detail::fmt(std::log(row.N)) << ' ' << detail::fmt(std::log(row.value)) << '\n';
    }
    if (o.fit) plots.push_back({p.id, plot.str()});
    json checks = json::array();
    for (const auto& c : o.checks) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"threshold", c.threshold}, {"pass", c.pass}});
      if (!c.pass)
        out.failures.push_back(p.id + ": check " + c.name + " failed (" + detail::fmt(c.value) + " " + c.relation + " " +
                               detail::fmt(c.threshold) + " does not hold)");
    }
    json entry = {{"id", p.id}, {"name", p.name}, {"pass", f.pass}, {"seed", p.seed}, {"params", p.params}, {"checks", checks},
                  {"comparison", p.comparison}};
    entry["expected_slope"] = p.expected ? json(*p.expected) : json();
    entry["tolerance"] = p.expected ? json(p.tolerance) : json();
    if (o.fit) entry["fit"] = {{"slope", o.fit->slope}, {"intercept", o.fit->intercept}, {"max_residual", o.fit->max_residual}};
    summary["experiments"].push_back(entry);
    out.all_pass = out.all_pass && f.pass;
    timing << p.id << ',' << detail::fmt(f.seconds) << '\n';
  }
  summary["all_pass"] = out.all_pass;

  namespace fs = std::filesystem;
  const fs::path dir(plan.output_dir);
  detail::write_file(dir / "results.csv", csv.str());
  detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
  detail::write_file(dir / "timing.csv", timing.str());
  for (const auto& [id, body] : plots) detail::write_file(dir / "plotdata" / (id + ".csv"), body);
  return out;
}

RunOutcome run_config_file(const std::string& path, const RunOptions& options) {
  return run_config_text(detail::read_file(path), options);
}

}  // namespace dispersia
