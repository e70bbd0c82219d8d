#include <algorithm>
#include <cmath>
#include <string>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"
#include "parallel.hpp"

namespace dispersia {

namespace {

// |z|^p from |z|^2, with a multiply-only path for even integer p.
struct PowerOfModulus {
  double half_p;
  int integer_half = -1;

  explicit PowerOfModulus(double p) : half_p(p / 2) {
    if (half_p == std::floor(half_p) && half_p <= 16) integer_half = static_cast<int>(half_p);
  }

  double operator()(double abs2) const {
    if (integer_half < 0) return std::pow(abs2, half_p);
    double r = 1;
    for (int i = 0; i < integer_half; ++i) r *= abs2;
    return r;
  }
};

constexpr std::size_t kStripRows = 64;

}  // namespace

DecouplingResult decoupling_ratio(const DecouplingInstance& in, Exponent p_exp) {
  if (in.d != 1) throw InvalidArgument("decoupling_ratio: only d = 1 is implemented, got d = " + std::to_string(in.d));
  const double p_max = 2.0 * (in.d + 2) / in.d;
  if (p_exp.is_infinite() || p_exp.value() < 2 || p_exp.value() > p_max)
    throw InvalidArgument("decoupling_ratio: p must lie in [2, " + std::to_string(p_max) + "]");
  if (!(in.alpha > 0) || in.alpha == 1) throw InvalidArgument("decoupling_ratio: alpha must be positive and != 1");
  if (!(in.delta > 0 && in.delta <= 1)) throw InvalidArgument("decoupling_ratio: delta must lie in (0, 1]");
  const double side = std::sqrt(in.delta);
  const double blocks_real = 2 / side;
  const auto blocks = static_cast<std::size_t>(std::llround(blocks_real));
  if (std::abs(blocks_real - static_cast<double>(blocks)) > 1e-9 * blocks_real)
    throw InvalidArgument("decoupling_ratio: 2 / delta^{1/2} must be an integer");
  const double r_min = std::pow(in.delta, -std::max(1.0, in.alpha / 2));
  const double R = in.radius == 0 ? r_min : in.radius;
  if (R < r_min * (1 - 1e-12))
    throw InvalidArgument("decoupling_ratio: radius " + std::to_string(R) + " below delta^{-max(1, alpha/2)} = " +
                          std::to_string(r_min));
  if (in.nodes_per_block < 8) throw InvalidArgument("decoupling_ratio: need at least 8 nodes per block");
  if (in.min_grid < 32) throw InvalidArgument("decoupling_ratio: need at least 32 grid points per axis");
  if (!(in.grid_spacing > 0)) throw InvalidArgument("decoupling_ratio: grid spacing must be positive");
  if (!(in.weight_extent >= 1)) throw InvalidArgument("decoupling_ratio: weight extent must be >= 1");
  if (in.density == DecouplingDensity::single_block && (in.block < 0 || static_cast<std::size_t>(in.block) >= blocks))
    throw InvalidArgument("decoupling_ratio: block index out of range");

  const double p = p_exp.value();
  const int K = in.nodes_per_block;
  const double h_freq = side / K;

  // Quadrature nodes and g at each node, block-major.
  std::vector<double> y(blocks * K);
  std::vector<Complex> g(blocks * K, 1.0);
  Rng rng(in.seed);
  for (std::size_t b = 0; b < blocks; ++b)
    for (int k = 0; k < K; ++k) {
      const std::size_t i = b * K + k;
      y[i] = -1 + b * side + (k + 0.5) * h_freq;
      if (in.density == DecouplingDensity::random_phase) g[i] = unit_phase(rng.uniform());
      if (in.density == DecouplingDensity::single_block && static_cast<int>(b) != in.block) g[i] = 0.0;
    }
  std::vector<bool> active(blocks, true);
  if (in.density == DecouplingDensity::single_block)
    for (std::size_t b = 0; b < blocks; ++b) active[b] = static_cast<int>(b) == in.block;

  const double half_width = in.weight_extent * R;
  const auto n = static_cast<std::size_t>(
      std::max<double>(in.min_grid, std::ceil(2 * half_width / in.grid_spacing)));
  const double h = 2 * half_width / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -half_width + (static_cast<double>(i) + 0.5) * h;

  // E_b(x1, x2) = sum_k A_b(x1, k) B_b(k, x2).
  std::vector<Eigen::MatrixXcd> B(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (!active[b]) continue;
    B[b].resize(K, static_cast<Eigen::Index>(n));
    for (int k = 0; k < K; ++k) {
      const double lift = std::pow(std::abs(y[b * K + k]), in.alpha);
      for (std::size_t j = 0; j < n; ++j) B[b](k, static_cast<Eigen::Index>(j)) = unit_phase(x[j] * lift);
    }
  }

  const PowerOfModulus power(p);
  const std::size_t strips = (n + kStripRows - 1) / kStripRows;
  std::vector<double> lhs_part(strips, 0.0);
  std::vector<std::vector<double>> rhs_part(strips, std::vector<double>(blocks, 0.0));
  detail::parallel_for(strips, [&](std::size_t s) {
    const std::size_t r0 = s * kStripRows, rows = std::min(kStripRows, n - r0);
    const auto S = static_cast<Eigen::Index>(rows), cols = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd weight(S, cols);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> inside(S, cols);
    for (Eigen::Index i = 0; i < S; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double r = std::hypot(x[r0 + static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
        weight(i, j) = std::pow(1 + r / R, -10.0 * in.d);
        inside(i, j) = r <= R;
      }
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(S, cols);
    Eigen::MatrixXcd A(S, K), E(S, cols);
    for (std::size_t b = 0; b < blocks; ++b) {
      if (!active[b]) continue;
      for (Eigen::Index i = 0; i < S; ++i)
        for (int k = 0; k < K; ++k)
          A(i, k) = g[b * K + k] * h_freq * unit_phase(x[r0 + static_cast<std::size_t>(i)] * y[b * K + k]);
      E.noalias() = A * B[b];
      total += E;
      double acc = 0;
      for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < S; ++i) acc += power(std::norm(E(i, j))) * weight(i, j);
      rhs_part[s][b] = acc;
    }
    double acc = 0;
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < S; ++i)
        if (inside(i, j)) acc += power(std::norm(total(i, j)));
    lhs_part[s] = acc;
  });

  const double cell = h * h;
  double lhs_sum = 0;
  for (double v : lhs_part) lhs_sum += v;
  double rhs_sq = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    double block_sum = 0;
    for (std::size_t s = 0; s < strips; ++s) block_sum += rhs_part[s][b];
    rhs_sq += std::pow(block_sum * cell, 2 / p);
  }
  DecouplingResult res;
  res.radius = R;
  res.blocks = blocks;
  res.grid_points_per_axis = n;
  res.lhs = std::pow(lhs_sum * cell, 1 / p);
  res.rhs = std::sqrt(rhs_sq);
  res.ratio = res.rhs > 0 ? res.lhs / res.rhs : 0.0;
  return res;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> separated_frequencies(int d, double N) {
  check_dimension(d);
  if (!(N >= 1)) throw InvalidArgument("separated_frequencies: N must be >= 1");
  const auto m = static_cast<std::int64_t>(std::floor(N));
  std::vector<std::vector<double>> out;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), -m);
  while (true) {
    std::vector<double> xi(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) xi[static_cast<std::size_t>(c)] = static_cast<double>(idx[static_cast<std::size_t>(c)]) / N;
    out.push_back(std::move(xi));
    int c = d - 1;
    while (c >= 0 && idx[static_cast<std::size_t>(c)] == m) idx[static_cast<std::size_t>(c--)] = -m;
    if (c < 0) break;
    ++idx[static_cast<std::size_t>(c)];
  }
  return out;
}

double restriction_ratio(int d, double alpha, const std::vector<std::vector<double>>& freqs,
                         std::span<const Complex> a, Exponent p, double R, int samples, Rng& rng) {
  check_dimension(d);
  if (freqs.size() != a.size()) throw InvalidArgument("restriction_ratio: coefficient count mismatch");
  if (samples < 1) throw InvalidArgument("restriction_ratio: samples must be >= 1");
  if (!(R > 0)) throw InvalidArgument("restriction_ratio: radius must be positive");
  double a_norm_sq = 0;
  for (const auto& c : a) a_norm_sq += std::norm(c);
  if (a_norm_sq == 0) throw InvalidArgument("restriction_ratio: zero coefficient vector");
  std::vector<double> lift(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    if (freqs[f].size() != static_cast<std::size_t>(d)) throw InvalidArgument("restriction_ratio: frequency dimension");
    double r2 = 0;
    for (double v : freqs[f]) r2 += v * v;
    lift[f] = std::pow(std::sqrt(r2), alpha);
  }
  std::vector<double> moduli(static_cast<std::size_t>(samples));
  std::vector<double> pt(static_cast<std::size_t>(d) + 1);
  for (auto& out : moduli) {
    double r2;
    do {
      r2 = 0;
      for (auto& c : pt) {
        c = rng.uniform(-R, R);
        r2 += c * c;
      }
    } while (r2 > R * R);
    Complex s = 0;
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      double theta = pt[static_cast<std::size_t>(d)] * lift[f];
      for (int c = 0; c < d; ++c) theta += pt[static_cast<std::size_t>(c)] * freqs[f][static_cast<std::size_t>(c)];
      s += a[f] * unit_phase(theta);
    }
    out = std::abs(s);
  }
  return discrete_lebesgue_norm(moduli, p, 1.0 / samples) / std::sqrt(a_norm_sq);
}

RestrictionReport discrete_restriction_experiment(const RestrictionConfig& cfg) {
  check_dimension(cfg.d);
  if (cfg.cutoffs.size() < 3) throw InvalidArgument("discrete_restriction: at least 3 cutoffs required");
  const double p_max = 2.0 * (cfg.d + 2) / cfg.d;
  if (cfg.p.is_infinite() || cfg.p.value() < 2 || cfg.p.value() > p_max)
    throw InvalidArgument("discrete_restriction: p must lie in [2, " + std::to_string(p_max) + "]");
  if (!(cfg.radius_factor >= 1)) throw InvalidArgument("discrete_restriction: radius_factor must be >= 1");
  if (cfg.trials < 1) throw InvalidArgument("discrete_restriction: trials must be >= 1");
  for (std::size_t i = 1; i < cfg.cutoffs.size(); ++i)
    if (!(cfg.cutoffs[i] > cfg.cutoffs[i - 1]))
      throw InvalidArgument("discrete_restriction: cutoffs must be strictly increasing");

  RestrictionReport report;
  report.cells.resize(cfg.cutoffs.size());
  detail::parallel_for(cfg.cutoffs.size(), [&](std::size_t i) {
    const double N = cfg.cutoffs[i];
    const auto freqs = separated_frequencies(cfg.d, N);
    RestrictionCell cell;
    cell.N = N;
    cell.radius = cfg.radius_factor * std::pow(N, std::max(2.0, cfg.alpha));
    cell.frequencies = freqs.size();
    Rng rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
    std::vector<Complex> a(freqs.size());
    double sum = 0;
    for (int t = 0; t < cfg.trials; ++t) {
      for (auto& c : a) c = rng.complex_normal();
      const double r = restriction_ratio(cfg.d, cfg.alpha, freqs, a, cfg.p, cell.radius, cfg.samples, rng);
      cell.max_ratio = std::max(cell.max_ratio, r);
      sum += r;
    }
    cell.mean_ratio = sum / cfg.trials;
    report.cells[i] = cell;
  });
  for (const auto& c : report.cells) {
    report.scaling.cutoffs.push_back(c.N);
    report.scaling.values.push_back(c.max_ratio);
  }
  report.scaling.fit = fit_exponent(report.scaling.pairs());
  return report;
}

}  // namespace dispersia
