#include <cmath>
#include <numbers>
#include <utility>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"

namespace dispersia {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence, n >= 1.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  GaussLegendre gl;
  gl.nodes.assign(static_cast<std::size_t>(n), 0.0);
  gl.weights.assign(static_cast<std::size_t>(n), 2.0);
  if (n == 1) return gl;
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2 / ((1 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    gl.nodes[lo] = -x;
    gl.nodes[hi] = x;
    gl.weights[lo] = w;
    gl.weights[hi] = w;
  }
  if (n % 2 == 1) gl.weights[static_cast<std::size_t>(n / 2)] = 2 / std::pow(legendre_with_derivative(n, 0.0).second, 2);
  return gl;
}

std::vector<double> legendre_all(int n, double x) {
  if (n < 0) throw InvalidArgument("legendre_all: negative degree");
  std::vector<double> P(static_cast<std::size_t>(n) + 1);
  P[0] = 1;
  if (n >= 1) P[1] = x;
  for (int k = 2; k <= n; ++k)
    P[static_cast<std::size_t>(k)] = ((2 * k - 1) * x * P[static_cast<std::size_t>(k - 1)] -
                                      (k - 1) * P[static_cast<std::size_t>(k - 2)]) / k;
  return P;
}

double zonal_value(int j, double cos_theta) {
  return std::sqrt((2 * j + 1) / (4 * std::numbers::pi)) * legendre_all(j, cos_theta).back();
}

double zonal_l2_norm(int j, int j_max, int phi_samples) {
  if (j < 0 || j > j_max) throw InvalidArgument("zonal_l2_norm: need 0 <= j <= j_max");
  if (phi_samples < 1) throw InvalidArgument("zonal_l2_norm: phi_samples must be >= 1");
  const auto gl = gauss_legendre(2 * j_max + 2);
  // Z_j does not depend on phi, so the uniform phi rule contributes 2 pi.
  double s = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double z = zonal_value(j, gl.nodes[i]);
    double ring = 0;
    for (int m = 0; m < phi_samples; ++m) ring += z * z;
    s += gl.weights[i] * ring * (2 * std::numbers::pi / phi_samples);
  }
  return std::sqrt(s);
}

double zonal_density_norm(int N, Exponent p, Exponent q, double interval_length, int phi_samples) {
  if (N < 0) throw InvalidArgument("zonal_density_norm: N must be >= 0");
  if (!(interval_length > 0)) throw InvalidArgument("zonal_density_norm: interval length must be positive");
  if (phi_samples < 1) throw InvalidArgument("zonal_density_norm: phi_samples must be >= 1");
  const Exponent a = p.half(), b = q.half();
  if (!a.is_infinite() && a.value() < 1) throw InvalidArgument("zonal_density_norm: p must be >= 2");
  if (!b.is_infinite() && b.value() < 1) throw InvalidArgument("zonal_density_norm: q must be >= 2");
  const auto gl = gauss_legendre(2 * N + 2);
  std::vector<double> rho(gl.nodes.size());
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const auto P = legendre_all(N, gl.nodes[i]);
    double s = 0;
    for (int j = 0; j <= N; ++j) s += (2 * j + 1) / (4 * std::numbers::pi) * P[static_cast<std::size_t>(j)] * P[static_cast<std::size_t>(j)];
    rho[i] = s;
  }
  double spatial;
  if (b.is_infinite()) {
    spatial = 0;
    for (double r : rho) spatial = std::max(spatial, r);
  } else {
    const double e = b.value();
    double s = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) s += gl.weights[i] * 2 * std::numbers::pi * std::pow(rho[i], e);
    spatial = std::pow(s, 1 / e);
  }
  // The density is time independent.
  return spatial * std::pow(interval_length, a.reciprocal());
}

ZonalReport zonal_sphere_experiment(const ZonalConfig& cfg) {
  if (cfg.cutoffs.size() < 3) throw InvalidArgument("zonal_sphere_experiment: at least 3 cutoffs required");
  ZonalReport r;
  int j_max = 0;
  for (std::size_t i = 0; i < cfg.cutoffs.size(); ++i) {
    const double N = cfg.cutoffs[i];
    if (N < 1 || N != std::floor(N)) throw InvalidArgument("zonal_sphere_experiment: cutoffs must be positive integers");
    if (i > 0 && !(N > cfg.cutoffs[i - 1]))
      throw InvalidArgument("zonal_sphere_experiment: cutoffs must be strictly increasing");
    j_max = std::max(j_max, static_cast<int>(N));
  }
  if (cfg.normalization_degree < 0) throw InvalidArgument("zonal_sphere_experiment: negative normalization degree");
  const int degree = cfg.normalization_degree == 0 ? j_max : cfg.normalization_degree;
  for (int j = 0; j <= degree; ++j)
    r.max_normalization_error =
        std::max(r.max_normalization_error, std::abs(zonal_l2_norm(j, degree, cfg.phi_samples) - 1));
  r.scaling.cutoffs = cfg.cutoffs;
  for (double N : cfg.cutoffs)
    r.scaling.values.push_back(
        zonal_density_norm(static_cast<int>(N), cfg.p, cfg.q, cfg.interval_length, cfg.phi_samples));
  r.scaling.fit = fit_exponent(r.scaling.pairs());
  return r;
}

}  // namespace dispersia
