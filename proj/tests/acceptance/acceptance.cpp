// One line per acceptance criterion: [PASS] or [FAIL], measured values and
// wall time. Exit status 0 only when every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dispersia/experiments.hpp"
#include "dispersia/hartree.hpp"
#include "dispersia/lattice.hpp"
#include "dispersia/runner.hpp"
#include "oracles.hpp"

using namespace dispersia;

namespace {

// Tolerances and runtime budgets.
constexpr double kWeylSlope = 2.0, kWeylTol = 0.05;
constexpr double kPacketSlope = 0.5 - 1.0 / 4.0 - 2.0 / 4.0, kPacketTol = 0.1;
constexpr double kZonalNormTol = 1e-6, kZonalSlope = 2.0 - 4.0 / 4.0, kZonalTol = 0.15;
constexpr double kDecouplingGrowth = 0.1;
constexpr double kRestrictionSlopeMax = 0.15;
constexpr double kDualitySlack = 1e-3, kRankOneTol = 1e-9;
constexpr double kQuadratureTol = 1e-8, kFrobeniusTol = 1e-10;
constexpr double kMassTol = 1e-10, kTraceTol = 1e-10, kEnergyRatioMin = 3.5;
constexpr double kOrderMin = 1.8, kOrderMax = 2.2, kFreeTol = 1e-12;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " (violated)");
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Verdict lattice() {
  Verdict v;
  v.require(count_representations(2, 25) == 12 && oracle::reps(2, 25) == 12, "r_2(25)=12");
  v.require(count_representations(1, 4) == 2 && oracle::reps(1, 4) == 2, "r_1(4)=2");
  v.require(enumerate(2, 10, Shape::ball).size() == 317 && oracle::ball_count(2, 10) == 317, "ball(2,10)=317");
  std::mt19937_64 gen(2024);
  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + static_cast<int>(gen() % 3);
    const auto R = 1 + static_cast<std::int64_t>(gen() % 10000);
    const auto avg = average_representation(d, R);
    const auto ball = enumerate(d, std::sqrt(static_cast<double>(R)), Shape::ball).size();
    if (avg.total + 1 != ball || static_cast<std::int64_t>(ball) != oracle::ball_count(d, std::sqrt(static_cast<double>(R))))
      ++bad;
  }
  v.require(bad == 0, "50 random shell sums, mismatches " + std::to_string(bad));
  return v;
}

Verdict weyl() {
  WeylConfig c;
  c.d = 2;
  c.cutoffs = {8, 16, 32, 64};
  const auto rep = weyl_saturation_experiment(c);
  Verdict v;
  bool exact = true;
  for (const auto& cell : rep.cells)
    exact = exact && cell.max_identity_error == 0.0 &&
            static_cast<std::int64_t>(cell.count) == oracle::ball_count(2, cell.N);
  v.require(exact, "density equals lattice count at every sample");
  v.require(std::abs(rep.scaling.fit.slope - kWeylSlope) <= kWeylTol, "slope " + num(rep.scaling.fit.slope));
  return v;
}

Verdict packet() {
  PacketConfig c;
  c.d = 1;
  c.alpha = 2;
  c.p = 4.0;
  c.q = 4.0;
  c.cutoffs = {8, 16, 32, 64};
  const auto rep = packet_experiment(c);
  Verdict v;
  v.require(std::abs(rep.fit.slope - kPacketSlope) <= kPacketTol, "slope " + num(rep.fit.slope));
  return v;
}

Verdict shell() {
  ShellConfig c;
  c.d = 2;
  c.cutoffs = {5, 25, 65};
  const auto rep = shell_eigenfunction_experiment(c);
  Verdict v;
  for (const auto& cell : rep.cells) {
    const double r = static_cast<double>(oracle::reps(2, cell.N * cell.N));
    v.require(cell.l2_norm_sq == r && cell.value_at_origin == Complex(r),
              "N=" + std::to_string(cell.N) + " r=" + num(r));
  }
  return v;
}

Verdict zonal() {
  double worst = 0;
  for (int j = 0; j <= 128; ++j) worst = std::max(worst, std::abs(zonal_l2_norm(j, 128) - 1));
  ZonalConfig c;
  c.cutoffs = {16, 32, 64};
  c.p = 4.0;
  c.q = 4.0;
  const auto rep = zonal_sphere_experiment(c);
  Verdict v;
  v.require(worst <= kZonalNormTol, "max norm error " + num(worst));
  v.require(std::abs(rep.scaling.fit.slope - kZonalSlope) <= kZonalTol, "slope " + num(rep.scaling.fit.slope));
  return v;
}

Verdict decoupling() {
  Verdict v;
  const double growth = std::pow(4.0, kDecouplingGrowth);
  for (double alpha : {2.0, 3.0})
    for (auto density : {DecouplingDensity::constant, DecouplingDensity::random_phase}) {
      std::vector<double> ratios;
      for (double delta : {0.25, 1.0 / 16, 1.0 / 64}) {
        DecouplingInstance in;
        in.alpha = alpha;
        in.delta = delta;
        in.density = density;
        in.seed = 20240601;
        ratios.push_back(decoupling_ratio(in, 6.0).ratio);
      }
      bool ok = true;
      for (std::size_t i = 1; i < ratios.size(); ++i) ok = ok && ratios[i] <= ratios[i - 1] * growth;
      v.require(ok, std::string("alpha=") + num(alpha) + (density == DecouplingDensity::constant ? " const " : " random ") +
                        num(ratios[0]) + "/" + num(ratios[1]) + "/" + num(ratios[2]));
    }
  return v;
}

Verdict restriction() {
  RestrictionConfig c;
  c.d = 1;
  c.alpha = 2;
  c.p = 6.0;
  c.cutoffs = {4, 8, 16};
  c.trials = 20;
  c.seed = 20240601;
  const auto rep = discrete_restriction_experiment(c);
  Verdict v;
  v.require(rep.scaling.fit.slope <= kRestrictionSlopeMax, "slope " + num(rep.scaling.fit.slope));
  return v;
}

Verdict duality() {
  const SampleGrid grid{4, 4};
  const int cols = 8;
  double worst = -1;
  for (int i = 0; i < 200; ++i) {
    Rng rng(0xACCE55ULL + static_cast<std::uint64_t>(i));
    FiniteOperator T{Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.size()), cols)};
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < T.matrix.rows(); ++r) T.matrix(r, c) = rng.complex_normal();
    DualityConfig cfg;
    cfg.p = 4.0;
    cfg.q = 4.0;
    cfg.beta = 2.0;
    cfg.samples = 4;
    cfg.seed = 7000 + static_cast<std::uint64_t>(i);
    const auto rep = duality_probe(T, grid, cfg);
    worst = std::max(worst, rep.c_sys / rep.c_dual - 1);
  }
  FiniteOperator R{Eigen::MatrixXcd::Zero(16, cols)};
  R.matrix.col(0).setConstant(0.25);
  DualityConfig cfg;
  cfg.beta = 1.0;
  cfg.samples = 50;
  const auto rep = duality_probe(R, grid, cfg);
  // n_t^{2/p} n_x^{2/q} / (n_t n_x) with p = q = 4
  const double oracle = std::sqrt(4.0) * std::sqrt(4.0) / 16.0;
  const double err = std::max(std::abs(rep.c_sys - oracle), std::abs(rep.c_dual - oracle)) / oracle;
  Verdict v;
  v.require(worst <= kDualitySlack, "200 instances, max (c_sys / c_dual - 1) " + num(worst));
  v.require(err <= kRankOneTol, "rank one error " + num(err));
  return v;
}

Verdict norms() {
  Verdict v;
  const double s3 = schatten_norm({Eigen::MatrixXcd::Identity(3, 3)}, 2.0);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 3;
  D(1, 1) = 4;
  const double s4 = schatten_norm({D}, Exponent::infinity()), s7 = schatten_norm({D}, 1.0);
  v.require(std::abs(s3 - std::sqrt(3.0)) < 1e-14 && std::abs(s4 - 4) < 1e-14 && std::abs(s7 - 7) < 1e-14,
            "sqrt3, 4, 7");

  FourierState f(1);
  f.set({0}, 1.0);
  f.set({1}, 1.0);
  const auto g = SpaceTimeGrid::uniform(1, 64, 0, 1, 1);
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const double q = mixed_norm(density(OrthonormalSystem{{1.0}, {f}}, g, P), MixedNormSpec::for_grid(g, 1.0, 2.0, 0, 1));
  v.require(std::abs(q - std::sqrt(6.0)) <= kQuadratureTol, "sqrt6 quadrature error " + num(std::abs(q - std::sqrt(6.0))));

  const auto one = density(OrthonormalSystem{{1.0}, {FourierState::mode({0})}}, g, P);
  v.require(std::abs(mixed_norm(one, MixedNormSpec::for_grid(g, 3.0, 5.0, 0, 1)) - 1) < 1e-14, "unit field");

  Rng rng(99);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    Eigen::MatrixXcd A(6, 4);
    double fro = 0;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 4; ++c) {
        A(r, c) = rng.complex_normal();
        fro += std::norm(A(r, c));
      }
    worst = std::max(worst, std::abs(schatten_norm({A}, 2.0) - std::sqrt(fro)) / std::sqrt(fro));
  }
  v.require(worst <= kFrobeniusTol, "Frobenius on 100 matrices, max rel error " + num(worst));
  return v;
}

Verdict hartree() {
  const double h = std::sqrt(0.5);
  FourierState a(1), b(1);
  a.set({0}, h);
  a.set({1}, h);
  b.set({0}, h);
  b.set({1}, -h);
  const HartreeState init{{1.0, 0.5}, {a, b}, 0.0};
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto W = PotentialSpec::multiplier(0.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const auto traj = solve(init, W, P, cfg);
  const auto conv = convergence_study(init, W, P, cfg, 3);

  Verdict v;
  v.require(traj.conservation.max_mass_drift <= kMassTol, "mass drift " + num(traj.conservation.max_mass_drift));
  v.require(traj.conservation.trace_drift <= kTraceTol, "trace drift " + num(traj.conservation.trace_drift));
  bool ratios = !conv.energy_ratios.empty(), orders = !conv.orders.empty();
  for (double r : conv.energy_ratios) ratios = ratios && r >= kEnergyRatioMin;
  for (double o : conv.orders) orders = orders && o >= kOrderMin && o <= kOrderMax;
  v.require(ratios, "energy drift ratio " + num(conv.energy_ratios.empty() ? 0 : conv.energy_ratios[0]));
  v.require(orders, "order " + num(conv.orders.empty() ? 0 : conv.orders[0]));

  // W = 0 against the free flow e^{-2 pi i t w}.
  const auto free = solve(init, PotentialSpec::zero(), P, cfg).final_state.to_state(1e-300);
  double diff = 0;
  for (std::size_t j = 0; j < init.states.size(); ++j) {
    const auto want = evolve(init.states[j], -cfg.t_end, P);
    for (const auto& [k, c] : want.entries()) diff = std::max(diff, std::abs(c - free.states[j].coefficient(k)));
    for (const auto& [k, c] : free.states[j].entries()) diff = std::max(diff, std::abs(c - want.coefficient(k)));
  }
  v.require(diff <= kFreeTol, "free reduction error " + num(diff));
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const std::string cfg = slurp(fs::path(DISPERSIA_CONFIGS) / "scaling.json");
  const auto base = fs::temp_directory_path() / "dispersia_acceptance";
  fs::remove_all(base);
  RunOptions o;
  o.output_dir = (base / "a").string();
  run_config_text(cfg, o);
  o.output_dir = (base / "b").string();
  run_config_text(cfg, o);
  const auto x = slurp(base / "a" / "results.csv"), y = slurp(base / "b" / "results.csv");
  Verdict v;
  v.require(!x.empty() && x == y, "results.csv " + std::to_string(x.size()) + " bytes, identical");
  return v;
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "lattice identities", 5, lattice},
      {"AC2", "Weyl scaling", 30, weyl},
      {"AC3", "packet lower bound", 120, packet},
      {"AC4", "shell eigenfunction", 60, shell},
      {"AC5", "zonal sphere", 120, zonal},
      {"AC6", "decoupling growth", 300, decoupling},
      {"AC7", "discrete restriction", 300, restriction},
      {"AC8", "duality probe", 60, duality},
      {"AC9", "Schatten and mixed norms", 60, norms},
      {"AC10", "Hartree conservation and order", 60, hartree},
      {"AC11", "determinism", 300, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      v.pass = false;
      v.detail += "; over time budget " + num(c.budget_s) + " s";
    }
    failed += !v.pass;
    std::printf("[%s] %s %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
