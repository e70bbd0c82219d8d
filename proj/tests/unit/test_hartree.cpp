#include <cmath>
#include <numbers>

#include "dispersia/error.hpp"
#include "dispersia/hartree.hpp"
#include "doctest.h"

using namespace dispersia;

namespace {

const double kTwoPi = 2 * std::numbers::pi;

HartreeState two_mode() {
  const double h = std::sqrt(0.5);
  FourierState a(1), b(1);
  a.set({0}, h);
  a.set({1}, h);
  b.set({0}, h);
  b.set({1}, -h);
  return {{1.0, 0.5}, {a, b}, 0.0};
}

double max_coef_diff(const FourierState& a, const FourierState& b) {
  double m = 0;
  for (const auto& [k, v] : a.entries()) m = std::max(m, std::abs(v - b.coefficient(k)));
  for (const auto& [k, v] : b.entries()) m = std::max(m, std::abs(v - a.coefficient(k)));
  return m;
}

}  // namespace

TEST_CASE("densities on the grid") {
  HartreeState s{{1.0}, {FourierState::mode({0})}};
  for (double v : compute_density(s, 8)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  s = {{3.0}, {FourierState::mode({1})}};
  for (double v : compute_density(s, 8)) CHECK(v == doctest::Approx(3.0).epsilon(1e-14));

  FourierState f(1);
  f.set({0}, 1.0);
  f.set({1}, 1.0);
  s = {{1.0}, {f}};
  const auto rho = compute_density(s, 16);
  for (int n = 0; n < 16; ++n) {
    const double x = n / 16.0;
    CHECK(std::abs(rho[static_cast<std::size_t>(n)] - (2 + 2 * std::cos(kTwoPi * x))) < 1e-13);
    CHECK(std::abs(rho[static_cast<std::size_t>(n)] - std::norm(1.0 + std::polar(1.0, kTwoPi * x))) < 1e-13);
  }
  CHECK_THROWS_AS(compute_density(HartreeState{{1.0}, {FourierState::mode({3})}}, 12), InvalidArgument);
}

TEST_CASE("potential application") {
  const int M = 16;
  std::vector<double> c(M, 2.5), cosine(M);
  for (int n = 0; n < M; ++n) cosine[static_cast<std::size_t>(n)] = std::cos(kTwoPi * n / M);
  for (double a : {0.0, 0.5, 2.0}) {
    for (double v : apply_potential(c, 1, M, PotentialSpec::multiplier(a))) CHECK(v == doctest::Approx(2.5));
  }
  const auto w = apply_potential(cosine, 1, M, PotentialSpec::multiplier(0.0));
  for (int n = 0; n < M; ++n)
    CHECK(std::abs(w[static_cast<std::size_t>(n)] - cosine[static_cast<std::size_t>(n)] / std::sqrt(2.0)) < 1e-14);
  for (double v : apply_potential(cosine, 1, M, PotentialSpec::zero())) CHECK(v == 0.0);

  FourierState k(1);
  k.set({1}, 0.5);
  k.set({-1}, 0.5);
  const auto conv = apply_potential(cosine, 1, M, PotentialSpec::kernel(k));
  for (int n = 0; n < M; ++n)
    CHECK(std::abs(conv[static_cast<std::size_t>(n)] - 0.5 * cosine[static_cast<std::size_t>(n)]) < 1e-14);

  FourierState bad(1);
  bad.set({1}, Complex(0, 1));
  CHECK_THROWS_AS(PotentialSpec::kernel(bad), InvalidArgument);
  CHECK(PotentialSpec::multiplier(1.0).symbol({0}) == Complex(1.0));
}

TEST_CASE("zero potential reduces to the free flow") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  FourierState f(2);
  f.set({0, 1}, {0.3, 0.1});
  f.set({2, -1}, {-0.2, 0.5});
  f.set({-3, 3}, {0.7, 0.0});
  const HartreeState init{{1.0}, {f}};
  SolverConfig cfg;
  cfg.dt = 0.0137;
  cfg.t_end = 0.0137 * 20;
  for (auto scheme : {SplitScheme::strang, SplitScheme::lie}) {
    cfg.scheme = scheme;
    const auto traj = solve(init, PotentialSpec::zero(), P, cfg);
    const auto out = traj.final_state.to_state(1e-300);
    // e^{-2 pi i t w}: the conjugate direction of evolve.
    CHECK(max_coef_diff(out.states[0], evolve(f, -cfg.t_end, P)) <= 1e-12);
    CHECK(traj.conservation.relative_energy_drift <= 1e-12);
  }
}

TEST_CASE("constant data evolves by a pure phase") {
  const double c = 0.8, nu = 1.5, a = 0.5;
  const HartreeState init{{nu}, {FourierState::mode({0}, c)}};
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto W = PotentialSpec::multiplier(a);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  auto g = GridState::from(init, 8);
  for (int n = 1; n <= 100; ++n) {
    step(g, W, P, cfg.dt, SplitScheme::strang);
    const double t = n * cfg.dt;
    const Complex want = c * std::polar(1.0, -kTwoPi * (P.dispersion(0) + nu * c * c * 1.0) * t);
    const auto got = g.to_state(1e-300).states[0].coefficient({0});
    CHECK(std::abs(got - want) < 1e-12);
  }
  for (double v : grid_density(g)) CHECK(v == doctest::Approx(nu * c * c).epsilon(1e-12));
}

TEST_CASE("gauge offset leaves the density unchanged") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  auto W0 = PotentialSpec::multiplier(0.0);
  auto W1 = PotentialSpec::multiplier(0.0);
  W1.with_offset(3.7);
  const auto a = solve(two_mode(), W0, P, cfg), b = solve(two_mode(), W1, P, cfg);
  const auto ra = grid_density(a.final_state), rb = grid_density(b.final_state);
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(std::abs(ra[i] - rb[i]) < 1e-12);
  CHECK(a.samples.back().energy == doctest::Approx(b.samples.back().energy).epsilon(1e-12));
}

TEST_CASE("two mode conservation and order") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto W = PotentialSpec::multiplier(0.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const auto traj = solve(two_mode(), W, P, cfg);
  CHECK(traj.steps == 100);
  CHECK(traj.conservation.max_mass_drift <= 1e-10);
  CHECK(traj.conservation.trace_drift <= 1e-10);
  CHECK_FALSE(traj.conservation.blowup);

  const auto strang = convergence_study(two_mode(), W, P, cfg, 3);
  REQUIRE(strang.orders.size() == 2);
  for (double o : strang.orders) CHECK((o >= 1.8 && o <= 2.2));
  for (double r : strang.energy_ratios) CHECK(r >= 3.5);

  cfg.scheme = SplitScheme::lie;
  const auto lie = convergence_study(two_mode(), W, P, cfg, 3);
  for (double o : lie.orders) CHECK((o >= 0.8 && o <= 1.2));
  CHECK(lie.errors[0] > strang.errors[0]);
}

TEST_CASE("observables") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto g = GridState::from(two_mode(), 16);
  const auto obs = observe(g, PotentialSpec::zero(), P);
  CHECK(obs.masses[0] == doctest::Approx(1.0));
  CHECK(obs.masses[1] == doctest::Approx(1.0));
  CHECK(obs.trace == doctest::Approx(1.5));
  // kinetic part only: sum nu_j sum w |u_k|^2 = 1 * 0.5 + 0.5 * 0.5
  CHECK(obs.energy == doctest::Approx(0.75));
  const auto back = g.to_state(1e-14);
  CHECK(max_coef_diff(back.states[1], two_mode().states[1]) < 1e-15);
}

TEST_CASE("sobolev schatten norm") {
  const HartreeState s{{2.0, 1.0}, {FourierState::mode({0}), FourierState::mode({2})}};
  CHECK(sobolev_schatten_norm(s, 0.0, 1.0) == doctest::Approx(3.0));
  CHECK(sobolev_schatten_norm(s, 0.0, Exponent::infinity()) == doctest::Approx(2.0));
  CHECK(sobolev_schatten_norm(s, 1.0, 1.0) == doctest::Approx(2.0 + 5.0));
}

TEST_CASE("hartree argument checks") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  SolverConfig cfg;
  cfg.dt = 0.03;
  cfg.t_end = 0.1;
  CHECK_THROWS_AS(solve(two_mode(), PotentialSpec::zero(), P, cfg), InvalidArgument);
  HartreeState neg = two_mode();
  neg.weights[0] = -1;
  CHECK_THROWS_AS(neg.validate(), InvalidArgument);
  HartreeState wide{{1.0}, {FourierState::mode({100})}};
  CHECK_THROWS_AS(wide.validate(), InvalidArgument);
  CHECK(default_hartree_grid(two_mode()) >= 8);
}
