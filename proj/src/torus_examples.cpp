#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"
#include "dispersia/lattice.hpp"
#include "parallel.hpp"

namespace dispersia {

namespace {

std::vector<double> midpoints(double lo, double hi, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  const double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h;
  return x;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n == 1) return {0.5 * (lo + hi)};
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return x;
}

// Tensor grid over per-axis nodes restricted to the closed Euclidean ball of
// radius r (inclusive) or open ball (exclusive). Points are flattened d-tuples.
std::vector<double> ball_points(int d, const std::vector<double>& axis, double r, bool open) {
  std::vector<double> pts;
  const auto n = axis.size();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  for (std::size_t idx = 0; idx < total; ++idx) {
    double p[kMaxDimension];
    double r2 = 0;
    std::size_t rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      p[i] = axis[rem % n];
      rem /= n;
      r2 += p[i] * p[i];
    }
    if (open ? r2 < r * r : r2 <= r * r * (1 + 1e-12)) pts.insert(pts.end(), p, p + d);
  }
  return pts;
}

void check_cutoffs(const std::vector<double>& cutoffs, const char* what) {
  if (cutoffs.size() < 3) throw InvalidArgument(std::string(what) + ": at least 3 cutoffs required");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0)) throw InvalidArgument(std::string(what) + ": cutoffs must be positive");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))
      throw InvalidArgument(std::string(what) + ": cutoffs must be strictly increasing");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

double packet_norm(const PacketConfig& cfg, double N) {
  check_dimension(cfg.d);
  if (cfg.samples_per_axis < 4)
    throw InvalidArgument("packet window grid too coarse: need >= 4 samples per axis, got " +
                          std::to_string(cfg.samples_per_axis));
  if (!(cfg.window > 0)) throw InvalidArgument("packet window must be positive");
  const auto P = PropagatorSpec::fractional_schrodinger(cfg.alpha);
  const auto modes = enumerate(cfg.d, N, Shape::ball);

  const double tau = cfg.window * std::pow(N, -cfg.alpha);
  const double xi = cfg.window / N;
  const int n = cfg.samples_per_axis;
  const auto ts = midpoints(-tau, tau, n);
  const auto xs = ball_points(cfg.d, midpoints(-xi, xi, n), xi, true);
  const std::size_t npts = xs.size() / static_cast<std::size_t>(cfg.d);
  const double cell_x = std::pow(2 * xi / n, cfg.d);
  const double cell_t = 2 * tau / n;

  // u(t, x) = X(x, k) * Tm(k, t)
  const auto K = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXcd X(static_cast<Eigen::Index>(npts), K), Tm(K, n);
  for (Eigen::Index m = 0; m < K; ++m) {
    const auto& k = modes.points[static_cast<std::size_t>(m)];
    const double w = P.dispersion_at(k.norm_sq());
    for (int i = 0; i < n; ++i) Tm(m, i) = unit_phase(ts[static_cast<std::size_t>(i)] * w);
    for (std::size_t pi = 0; pi < npts; ++pi) {
      double theta = 0;
      for (int c = 0; c < cfg.d; ++c) theta += static_cast<double>(k[c]) * xs[pi * cfg.d + c];
      X(static_cast<Eigen::Index>(pi), m) = unit_phase(theta);
    }
  }
  const Eigen::MatrixXd U = (X * Tm).cwiseAbs();

  std::vector<double> inner(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> col(U.col(i).data(), U.col(i).data() + U.rows());
    inner[static_cast<std::size_t>(i)] = discrete_lebesgue_norm(col, cfg.q, cell_x);
  }
  double norm = discrete_lebesgue_norm(inner, cfg.p, cell_t);
  if (cfg.normalized) norm /= std::sqrt(static_cast<double>(modes.size()));
  return norm;
}

double packet_full_norm(const PacketConfig& cfg, double N) {
  const auto P = PropagatorSpec::fractional_schrodinger(cfg.alpha);
  const auto f = FourierState::from_modes(enumerate(cfg.d, N, Shape::ball));
  const auto grid = SpaceTimeGrid::resolving(f, P, 0.0, 1.0);
  const auto u = synthesize(f, grid, P);
  double norm = mixed_norm(u, MixedNormSpec::for_grid(grid, cfg.p, cfg.q, 0.0, 1.0));
  if (cfg.normalized) norm /= f.norm();
  return norm;
}

ScalingReport packet_experiment(const PacketConfig& cfg) {
  check_cutoffs(cfg.cutoffs, "packet_experiment");
  ScalingReport r;
  r.cutoffs = cfg.cutoffs;
  r.values.resize(cfg.cutoffs.size());
  detail::parallel_for(cfg.cutoffs.size(), [&](std::size_t i) { r.values[i] = packet_norm(cfg, cfg.cutoffs[i]); });
  r.fit = fit_exponent(r.pairs());
  return r;
}

// ---------------------------------------------------------------------------

WeylReport weyl_saturation_experiment(const WeylConfig& cfg) {
  check_dimension(cfg.d);
  check_cutoffs(cfg.cutoffs, "weyl_saturation_experiment");
  if (!cfg.p.is_infinite() && cfg.p.value() < 2) throw InvalidArgument("weyl_saturation: p must be >= 2");
  if (!cfg.q.is_infinite() && cfg.q.value() < 2) throw InvalidArgument("weyl_saturation: q must be >= 2");
  const auto grid = SpaceTimeGrid::uniform(cfg.d, cfg.space_samples, cfg.t_start, cfg.t_end, cfg.time_samples);
  const auto spec = MixedNormSpec::for_grid(grid, cfg.p.half(), cfg.q.half(), cfg.t_start, cfg.t_end);

  WeylReport report;
  for (double N : cfg.cutoffs) {
    const auto modes = enumerate(cfg.d, N, Shape::ball);
    OrthonormalSystem system;
    for (const auto& k : modes.points) {
      system.states.push_back(FourierState::mode(k));
      system.weights.push_back(cfg.nu);
    }
    const auto rho = density_direct(system, grid, cfg.propagator);
    WeylCell cell;
    cell.N = N;
    cell.count = modes.size();
    const double expected = cfg.nu * static_cast<double>(cell.count);
    for (double v : rho.values) cell.max_identity_error = std::max(cell.max_identity_error, std::abs(v - expected));
    cell.norm = mixed_norm(rho, spec);
    report.cells.push_back(cell);
    report.scaling.cutoffs.push_back(N);
    report.scaling.values.push_back(cell.norm);
  }
  report.scaling.fit = fit_exponent(report.scaling.pairs());
  return report;
}

// ---------------------------------------------------------------------------

ShellReport shell_eigenfunction_experiment(const ShellConfig& cfg) {
  check_dimension(cfg.d);
  if (cfg.cutoffs.empty()) throw InvalidArgument("shell_eigenfunction: no cutoffs");
  double max_cutoff = 0;
  for (double N : cfg.cutoffs) max_cutoff = std::max(max_cutoff, N);
  for (double N : cfg.cutoffs) {
    const bool integral = N >= 1 && N == std::floor(N);
    if (!integral || count_representations(cfg.d, static_cast<std::int64_t>(N * N)) == 0) {
      std::ostringstream msg;
      msg << "shell_eigenfunction: empty shell |k| = " << N << "; admissible N:";
      for (std::int64_t m = 1; m <= static_cast<std::int64_t>(std::ceil(max_cutoff)); ++m)
        if (count_representations(cfg.d, m * m) > 0) msg << ' ' << m;
      throw InvalidArgument(msg.str());
    }
  }

  ShellReport report;
  const double qr = cfg.q.reciprocal();
  for (double Nd : cfg.cutoffs) {
    const auto N = static_cast<std::int64_t>(Nd);
    const auto f = FourierState::from_modes(enumerate(cfg.d, Nd, Shape::shell));
    ShellCell cell;
    cell.N = N;
    cell.shell_count = count_representations(cfg.d, N * N);
    cell.l2_norm_sq = f.norm_sq();
    const std::vector<double> origin(static_cast<std::size_t>(cfg.d), 0.0);
    const auto P = PropagatorSpec::fractional_schrodinger(2.0);
    cell.value_at_origin = evaluate(f, 0.0, origin, P);

    const double xi = cfg.window / Nd;
    const auto pts = ball_points(cfg.d, midpoints(-xi, xi, cfg.samples_per_axis), xi, true);
    const std::size_t npts = pts.size() / static_cast<std::size_t>(cfg.d);
    std::vector<double> mod(npts);
    detail::parallel_for(npts, [&](std::size_t i) {
      mod[i] = std::abs(evaluate(f, 0.0, std::span<const double>(pts).subspan(i * cfg.d, cfg.d), P));
    });
    cell.windowed_norm = discrete_lebesgue_norm(mod, cfg.q, std::pow(2 * xi / cfg.samples_per_axis, cfg.d));
    cell.predicted = static_cast<double>(cell.shell_count) * std::pow(Nd, -cfg.d * qr);
    cell.ratio = cell.windowed_norm / cell.predicted;
    report.identities_exact = report.identities_exact &&
                              cell.l2_norm_sq == static_cast<double>(cell.shell_count) &&
                              cell.value_at_origin == Complex(static_cast<double>(cell.shell_count), 0.0);
    report.cells.push_back(cell);
    report.scaling.cutoffs.push_back(Nd);
    report.scaling.values.push_back(cell.windowed_norm);
  }
  if (report.scaling.cutoffs.size() >= 3) report.scaling.fit = fit_exponent(report.scaling.pairs());
  return report;
}

// ---------------------------------------------------------------------------

namespace {

FourierState cluster_state(int d, double j, double width) {
  const auto shell = shell_cluster(d, j, width);
  if (shell.empty()) throw InvalidArgument("torus_cluster: empty shell at j=" + std::to_string(j));
  const double c = 1.0 / std::sqrt(static_cast<double>(shell.size()));
  FourierState f(d);
  // e_k(x0) conj(e_k(x)) with x0 = 0 is the mode -k.
  for (const auto& k : shell.points) f.set(-k, c);
  return f;
}

}  // namespace

OrthonormalSystem cluster_system(int d, std::span<const double> j_values, double width) {
  OrthonormalSystem s;
  for (double j : j_values) {
    s.states.push_back(cluster_state(d, j, width));
    s.weights.push_back(1.0);
  }
  return s;
}

double cluster_amplitude_ratio(int d, double alpha, double j, double width, double t, std::span<const double> x) {
  const auto f = cluster_state(d, j, width);
  const auto P = PropagatorSpec::fractional_schrodinger(alpha);
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  return std::abs(evaluate(f, t, x, P)) / std::abs(evaluate(f, 0.0, origin, P));
}

ClusterReport torus_cluster_experiment(const ClusterConfig& cfg) {
  check_dimension(cfg.d);
  if (cfg.j_values.empty()) throw InvalidArgument("torus_cluster: no j values");
  if (cfg.samples_per_axis < 1) throw InvalidArgument("torus_cluster: samples_per_axis must be >= 1");
  const auto P = PropagatorSpec::fractional_schrodinger(cfg.alpha);
  const auto system = cluster_system(cfg.d, cfg.j_values, cfg.width);
  const auto G = gram(system);

  ClusterReport report;
  report.gram_deviation = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  report.smallest_ratio = std::numeric_limits<double>::infinity();
  const std::vector<double> origin(static_cast<std::size_t>(cfg.d), 0.0);
  for (std::size_t i = 0; i < cfg.j_values.size(); ++i) {
    const double j = cfg.j_values[i];
    const auto& f = system.states[i];
    ClusterCell cell;
    cell.j = j;
    cell.shell_count = f.size();
    cell.normalization = 1.0 / std::sqrt(static_cast<double>(f.size()));
    cell.value_at_origin = evaluate(f, 0.0, origin, P);
    const double t_max = cfg.epsilon * std::pow(j, 1.0 - cfg.alpha);
    const double x_max = cfg.epsilon / j;
    const auto ts = linspace(-t_max, t_max, cfg.samples_per_axis);
    const auto xs = ball_points(cfg.d, linspace(-x_max, x_max, cfg.samples_per_axis), x_max, false);
    const std::size_t npts = xs.size() / static_cast<std::size_t>(cfg.d);
    const double u00 = std::abs(cell.value_at_origin);
    cell.min_ratio = std::numeric_limits<double>::infinity();
    for (double t : ts)
      for (std::size_t pi = 0; pi < npts; ++pi)
        cell.min_ratio = std::min(
            cell.min_ratio, std::abs(evaluate(f, t, std::span<const double>(xs).subspan(pi * cfg.d, cfg.d), P)) / u00);
    report.smallest_ratio = std::min(report.smallest_ratio, cell.min_ratio);
    report.cells.push_back(cell);
  }
  report.pass = report.smallest_ratio >= cfg.min_ratio && report.gram_deviation <= 1e-10;
  return report;
}

}  // namespace dispersia
