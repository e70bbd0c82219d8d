#include <algorithm>
#include <cmath>
#include <string>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"

namespace dispersia {

namespace {

void check_rows(const FiniteOperator& T, SampleGrid grid) {
  if (grid.time_count < 1 || grid.space_count < 1) throw InvalidArgument("sample grid must be nonempty");
  if (static_cast<std::size_t>(T.matrix.rows()) != grid.size())
    throw InvalidArgument("operator has " + std::to_string(T.matrix.rows()) + " rows but the grid has " +
                          std::to_string(grid.size()) + " samples");
}

void check_exponents(Exponent p, Exponent q) {
  if ((!p.is_infinite() && p.value() < 2) || (!q.is_infinite() && q.value() < 2))
    throw InvalidArgument("duality: p and q must be >= 2");
}

std::vector<double> slice_norms(std::span<const double> v, SampleGrid grid, Exponent b) {
  std::vector<double> out(static_cast<std::size_t>(grid.time_count));
  const auto nx = static_cast<std::size_t>(grid.space_count);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = discrete_lebesgue_norm(v.subspan(t * nx, nx), b);
  return out;
}

Eigen::MatrixXcd random_orthonormal(Eigen::Index n, Eigen::Index J, Rng& rng) {
  Eigen::MatrixXcd G(n, J);
  for (Eigen::Index j = 0; j < J; ++j)
    for (Eigen::Index i = 0; i < n; ++i) G(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, J);
}

}  // namespace

double counting_mixed_norm(std::span<const double> values, SampleGrid grid, Exponent a, Exponent b) {
  if (values.size() != grid.size()) throw InvalidArgument("counting_mixed_norm: size mismatch");
  std::vector<double> mod(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mod[i] = std::abs(values[i]);
  return discrete_lebesgue_norm(slice_norms(mod, grid, b), a);
}

double system_ratio(const FiniteOperator& T, SampleGrid grid, const Eigen::MatrixXcd& states,
                    std::span<const double> nu, Exponent p, Exponent q, Exponent beta) {
  check_rows(T, grid);
  check_exponents(p, q);
  if (states.rows() != T.matrix.cols()) throw InvalidArgument("system_ratio: state length mismatch");
  if (static_cast<std::size_t>(states.cols()) != nu.size()) throw InvalidArgument("system_ratio: weight count mismatch");
  const double nu_norm = ell_norm(nu, beta);
  if (nu_norm == 0) return 0.0;
  const Eigen::MatrixXcd Tf = T.matrix * states;
  std::vector<double> rho(grid.size(), 0.0);
  for (Eigen::Index j = 0; j < Tf.cols(); ++j)
    for (Eigen::Index r = 0; r < Tf.rows(); ++r) rho[static_cast<std::size_t>(r)] += nu[static_cast<std::size_t>(j)] * std::norm(Tf(r, j));
  return counting_mixed_norm(rho, grid, p.half(), q.half()) / nu_norm;
}

double dual_ratio(const FiniteOperator& T, SampleGrid grid, std::span<const Complex> W, Exponent p, Exponent q,
                  Exponent beta) {
  check_rows(T, grid);
  check_exponents(p, q);
  if (W.size() != grid.size()) throw InvalidArgument("dual_ratio: weight size mismatch");
  std::vector<double> w2(W.size());
  for (std::size_t i = 0; i < W.size(); ++i) w2[i] = std::norm(W[i]);
  const double denom = counting_mixed_norm(w2, grid, p.half().conjugate(), q.half().conjugate());
  if (denom == 0) throw InvalidArgument("dual_ratio: zero weight");
  FiniteOperator WT{T.matrix};
  for (Eigen::Index r = 0; r < WT.matrix.rows(); ++r) WT.matrix.row(r) *= W[static_cast<std::size_t>(r)];
  // Singular values of W T T* W̄ are the squares of those of W T.
  const Eigen::VectorXd sigma = singular_values(WT);
  std::vector<double> sq(static_cast<std::size_t>(sigma.size()));
  for (Eigen::Index i = 0; i < sigma.size(); ++i) sq[static_cast<std::size_t>(i)] = sigma(i) * sigma(i);
  return schatten_norm_from_singular_values(sq, beta.conjugate()) / denom;
}

std::vector<Complex> norming_weight(std::span<const double> rho_in, SampleGrid grid, Exponent p, Exponent q) {
  check_exponents(p, q);
  if (rho_in.size() != grid.size()) throw InvalidArgument("norming_weight: size mismatch");
  const Exponent a = p.half(), b = q.half();
  double peak = 0;
  for (double v : rho_in) peak = std::max(peak, std::abs(v));
  std::vector<Complex> W(rho_in.size(), 0.0);
  if (peak == 0) return W;
  std::vector<double> rho(rho_in.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::abs(rho_in[i]) / peak;

  const auto nx = static_cast<std::size_t>(grid.space_count);
  const auto nt = static_cast<std::size_t>(grid.time_count);
  const auto norms = slice_norms(rho, grid, b);
  std::vector<double> time_factor(nt, 0.0);
  if (a.is_infinite()) {
    const auto best = static_cast<std::size_t>(std::max_element(norms.begin(), norms.end()) - norms.begin());
    time_factor[best] = 1.0;
  } else {
    // |V(t, x)| = |rho|^{b-1} ||rho(t)||_b^{a-b}; the b = inf case uses a point mass at the slice maximum.
    const double av = a.value();
    for (std::size_t t = 0; t < nt; ++t)
      if (norms[t] > 0) time_factor[t] = b.is_infinite() ? std::pow(norms[t], av - 1) : std::pow(norms[t], av - b.value());
  }
  for (std::size_t t = 0; t < nt; ++t) {
    if (time_factor[t] == 0) continue;
    const auto* slice = rho.data() + t * nx;
    if (b.is_infinite()) {
      const auto x = static_cast<std::size_t>(std::max_element(slice, slice + nx) - slice);
      W[t * nx + x] = std::sqrt(time_factor[t]);
      continue;
    }
    for (std::size_t x = 0; x < nx; ++x)
      if (slice[x] > 0) W[t * nx + x] = std::sqrt(std::pow(slice[x], b.value() - 1) * time_factor[t]);
  }
  return W;
}

DualityReport duality_probe(const FiniteOperator& T, SampleGrid grid, const DualityConfig& cfg) {
  check_rows(T, grid);
  check_exponents(cfg.p, cfg.q);
  if (!cfg.beta.is_infinite() && cfg.beta.value() < 1) throw InvalidArgument("duality_probe: beta must be >= 1");
  if (cfg.samples < 0) throw InvalidArgument("duality_probe: samples must be >= 0");
  if (!(cfg.slack >= 0)) throw InvalidArgument("duality_probe: slack must be >= 0");
  const Eigen::Index n = T.matrix.cols();
  if (n < 1 || n > 64) throw InvalidArgument("duality_probe: operator must have 1..64 columns");

  DualityReport rep;
  const auto m = grid.size();
  auto consider_system = [&](const Eigen::MatrixXcd& states, std::span<const double> nu) {
    ++rep.systems;
    const double ratio = system_ratio(T, grid, states, nu, cfg.p, cfg.q, cfg.beta);
    rep.c_sys = std::max(rep.c_sys, ratio);
    if (ratio == 0) return;
    const Eigen::MatrixXcd Tf = T.matrix * states;
    std::vector<double> rho(m, 0.0);
    for (Eigen::Index j = 0; j < Tf.cols(); ++j)
      for (Eigen::Index r = 0; r < Tf.rows(); ++r) rho[static_cast<std::size_t>(r)] += nu[static_cast<std::size_t>(j)] * std::norm(Tf(r, j));
    const auto W = norming_weight(rho, grid, cfg.p, cfg.q);
    const double cert = dual_ratio(T, grid, W, cfg.p, cfg.q, cfg.beta);
    rep.c_dual = std::max(rep.c_dual, cert);
    rep.certificate_excess = std::max(rep.certificate_excess, ratio / cert);
  };
  auto consider_weight = [&](std::span<const Complex> W) {
    ++rep.weights;
    rep.c_dual_random = std::max(rep.c_dual_random, dual_ratio(T, grid, W, cfg.p, cfg.q, cfg.beta));
  };

  // Deterministic instances: the top right singular vector and a constant weight.
  {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix, Eigen::ComputeThinV);
    const Eigen::MatrixXcd top = svd.matrixV().col(0);
    const double one = 1.0;
    consider_system(top, std::span<const double>(&one, 1));
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    consider_system(Eigen::MatrixXcd::Identity(n, n), ones);
    consider_weight(std::vector<Complex>(m, 1.0));
  }

  Rng rng(cfg.seed);
  std::vector<Complex> W(m);
  for (int s = 0; s < cfg.samples; ++s) {
    const auto J = static_cast<Eigen::Index>(1 + rng.next() % static_cast<std::uint64_t>(n));
    const auto states = random_orthonormal(n, J, rng);
    std::vector<double> nu(static_cast<std::size_t>(J));
    for (auto& v : nu) v = s % 2 == 0 ? std::abs(rng.normal()) : rng.normal();
    consider_system(states, nu);

    for (auto& w : W) w = s % 2 == 0 ? rng.complex_normal() : Complex(rng.next() % 2 == 0 ? 1.0 : -1.0);
    consider_weight(W);
  }

  rep.c_dual = std::max(rep.c_dual, rep.c_dual_random);
  rep.forward_holds = rep.c_sys <= (1 + cfg.slack) * rep.c_dual;
  rep.reverse_gap = rep.c_dual_random > 0 ? rep.c_sys / rep.c_dual_random - 1 : 0.0;
  return rep;
}

FiniteOperator propagator_operator(const FrequencySet& basis, const SpaceTimeGrid& grid, const PropagatorSpec& P) {
  check_dimension(grid.dimension);
  if (basis.dimension != grid.dimension) throw InvalidArgument("propagator_operator: dimension mismatch");
  const std::size_t pps = grid.points_per_slice();
  FiniteOperator T{Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(basis.size()))};
  std::vector<double> x(static_cast<std::size_t>(grid.dimension));
  for (std::size_t xi = 0; xi < pps; ++xi) {
    grid.position(xi, x);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto& k = basis.points[c];
      double kx = 0;
      for (int i = 0; i < grid.dimension; ++i) kx += static_cast<double>(k[i]) * x[static_cast<std::size_t>(i)];
      const double w = P.dispersion_at(k.norm_sq());
      for (std::size_t t = 0; t < grid.times.size(); ++t)
        T.matrix(static_cast<Eigen::Index>(t * pps + xi), static_cast<Eigen::Index>(c)) = unit_phase(kx + grid.times[t] * w);
    }
  }
  return T;
}

}  // namespace dispersia
