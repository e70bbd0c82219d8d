#include <cmath>
#include <numbers>

#include "dispersia/error.hpp"
#include "dispersia/random.hpp"
#include "dispersia/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace dispersia;

namespace {

FourierState random_state(int d, int K, int count, Rng& rng) {
  FourierState f(d);
  for (int i = 0; i < count; ++i) {
    std::int64_t c[3] = {0, 0, 0};
    for (int j = 0; j < d; ++j) c[j] = static_cast<std::int64_t>(rng.next() % (2 * K + 1)) - K;
    f.set(LatticePoint(std::span<const std::int64_t>(c, static_cast<std::size_t>(d))), rng.complex_normal());
  }
  return f;
}

double max_coef_diff(const FourierState& a, const FourierState& b) {
  double m = 0;
  for (const auto& [k, v] : a.entries()) m = std::max(m, std::abs(v - b.coefficient(k)));
  for (const auto& [k, v] : b.entries()) m = std::max(m, std::abs(v - a.coefficient(k)));
  return m;
}

}  // namespace

TEST_CASE("fourier state storage and json") {
  FourierState f(2);
  f.set({1, -2}, {0.5, 0.25});
  f.set({0, 0}, 0.0);
  CHECK(f.size() == 1);
  f.add({1, -2}, {-0.5, -0.25});
  CHECK(f.empty());
  CHECK_THROWS_AS(f.set({1}, 1.0), InvalidArgument);

  Rng rng(3);
  const auto g = random_state(3, 5, 20, rng);
  const auto back = fourier_state_from_json(nlohmann::json::parse(to_json(g).dump()));
  CHECK(back == g);
  CHECK(inner_product(g, g).real() == doctest::Approx(g.norm_sq()));
}

TEST_CASE("bump profile and projection") {
  const BumpProfile psi;
  CHECK(psi(0) == 1.0);
  CHECK(psi(2) == 0.0);
  CHECK(psi(3) == 0.0);
  const double a = psi(1.2), b = psi(1.5), c = psi(1.8);
  CHECK(a > b);
  CHECK(b > c);
  CHECK(b > 0);
  CHECK(b < 1);
  // transition g(2 - s) / (g(2 - s) + g(s - 1)), g(r) = exp(-1/r)
  CHECK(b == doctest::Approx(0.5));
  CHECK(a == doctest::Approx(std::exp(-1 / 0.8) / (std::exp(-1 / 0.8) + std::exp(-1 / 0.2))));

  FourierState f(1);
  f.set({0}, 1.0);
  f.set({30}, 2.0);
  f.set({15}, 1.0);
  const auto g = project_frequency(f, psi, 10);
  CHECK(g.coefficient({0}) == Complex(1.0));
  CHECK(g.coefficient({30}) == Complex(0.0));
  CHECK(g.coefficient({15}).real() == doctest::Approx(psi(1.5)));
}

TEST_CASE("littlewood paley pieces telescope") {
  Rng rng(11);
  const auto f = random_state(2, 1024, 60, rng);
  FourierState sum(2);
  for (int l = 0; l <= 12; ++l) {
    const auto piece = littlewood_paley_piece(f, l);
    for (const auto& [k, v] : piece.entries()) sum.add(k, v);
  }
  CHECK(max_coef_diff(sum, f) < 1e-12);

  const auto single = FourierState::mode({32});
  for (int l = 0; l <= 10; ++l) {
    const bool nonzero = !littlewood_paley_piece(single, l).empty();
    if (nonzero) CHECK((l >= 4 && l <= 6));
  }
  CHECK(littlewood_paley_piece(single, 5) == single);
  const auto delta = FourierState::mode({0});
  for (int l = 1; l <= 6; ++l) CHECK(littlewood_paley_piece(delta, l).empty());
  CHECK(littlewood_paley_piece(delta, 0) == delta);
}

TEST_CASE("propagator phases") {
  Rng rng(5);
  const auto f = random_state(2, 6, 25, rng);
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  CHECK(evolve(f, 0.0, P) == f);
  CHECK(max_coef_diff(evolve(f, 1.0, P), f) == 0.0);

  for (const auto& Q : {P, PropagatorSpec::fractional_schrodinger(1.5), PropagatorSpec::klein_gordon(0.7),
                        PropagatorSpec::wave()}) {
    const auto two = evolve(evolve(f, 0.31, Q), 0.47, Q);
    const auto one = evolve(f, 0.78, Q);
    CHECK(max_coef_diff(two, one) <= 1e-12 * f.norm());
  }
  CHECK(PropagatorSpec::klein_gordon(3).dispersion(4) == doctest::Approx(5.0));
  CHECK(PropagatorSpec::wave().dispersion_at(25) == 5.0);
  CHECK_THROWS_AS(PropagatorSpec::fractional_schrodinger(0), InvalidArgument);
}

TEST_CASE("synthesis against direct sums") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto one = synthesize(FourierState::mode({0, 0}), SpaceTimeGrid::uniform(2, 5, 0, 1, 3), P);
  for (auto v : one.values) CHECK(std::abs(v - Complex(1.0)) < 1e-15);

  const double x[1] = {0.25};
  const auto i = evaluate(FourierState::mode({1}), 0.0, x, P);
  CHECK(std::abs(i - Complex(0, 1)) < 1e-15);

  Rng rng(17);
  for (int d = 1; d <= 3; ++d) {
    const int K = d == 3 ? 3 : 7;
    const auto f = random_state(d, K, 30, rng);
    const double alpha = d == 1 ? 2.0 : 1.5;
    const auto Q = PropagatorSpec::fractional_schrodinger(alpha);
    const auto grid = SpaceTimeGrid::uniform(d, 4 * K + 1, 0.0, 1.0, 3);
    const auto field = synthesize(f, grid, Q);

    std::vector<std::vector<std::int64_t>> ks;
    std::vector<Complex> a;
    for (const auto& [k, v] : f.entries()) {
      ks.emplace_back(k.coords().begin(), k.coords().end());
      a.push_back(v);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t ti = rng.next() % grid.times.size();
      const std::size_t xi = rng.next() % grid.points_per_slice();
      std::vector<double> pos(static_cast<std::size_t>(d));
      grid.position(xi, pos);
      const auto want = oracle::direct_sum(ks, a, grid.times[ti], pos, alpha);
      CHECK(std::abs(field.at(ti, xi) - want) <= 1e-10 * std::max(1.0, std::abs(want)));

      const double t = rng.uniform(), y[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
      const auto direct = evaluate(f, t, std::span<const double>(y, static_cast<std::size_t>(d)), Q);
      const auto want2 = oracle::direct_sum(ks, a, t, std::vector<double>(y, y + d), alpha);
      CHECK(std::abs(direct - want2) <= 1e-10 * std::max(1.0, std::abs(want2)));
    }
  }
  CHECK_THROWS_AS(synthesize(FourierState::mode({4}), SpaceTimeGrid::uniform(1, 8, 0, 1, 1), P), InvalidArgument);
}

TEST_CASE("density fields") {
  const auto P = PropagatorSpec::fractional_schrodinger(2.0);
  const auto grid = SpaceTimeGrid::uniform(1, 9, 0, 1, 4);
  OrthonormalSystem s{{1.0}, {FourierState::mode({0})}};
  for (double v : density(s, grid, P).values) CHECK(v == doctest::Approx(1.0));

  OrthonormalSystem pair{{1.0, -1.0}, {FourierState::mode({1}), FourierState::mode({-2})}};
  for (double v : density(pair, grid, P).values) CHECK(std::abs(v) < 1e-14);
  for (double v : density_direct(pair, grid, P).values) CHECK(std::abs(v) < 1e-14);

  Rng rng(2);
  OrthonormalSystem mixed{{0.7, 1.3}, {random_state(1, 4, 5, rng), random_state(1, 4, 5, rng)}};
  const auto a = density(mixed, grid, P), b = density_direct(mixed, grid, P);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}
