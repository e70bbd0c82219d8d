#include "dispersia/hartree.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <string>

#include "dispersia/error.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace dispersia {

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::multiplier(double a) {
  if (!std::isfinite(a)) throw InvalidArgument("multiplier potential: a must be finite");
  PotentialSpec W;
  W.kind_ = Kind::multiplier;
  W.a_ = a;
  return W;
}

PotentialSpec PotentialSpec::kernel(FourierState w) {
  for (const auto& [k, c] : w.entries())
    if (std::abs(w.coefficient(-k) - std::conj(c)) > 1e-12 * (1 + std::abs(c)))
      throw InvalidArgument("kernel potential: coefficients must be conjugate symmetric (real kernel)");
  PotentialSpec W;
  W.kind_ = Kind::kernel;
  W.kernel_ = std::move(w);
  return W;
}

PotentialSpec& PotentialSpec::with_offset(double v0) {
  if (!std::isfinite(v0)) throw InvalidArgument("potential offset must be finite");
  offset_ = v0;
  return *this;
}

Complex PotentialSpec::symbol(const LatticePoint& k) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::multiplier:
      return std::pow(1.0 + static_cast<double>(k.norm_sq()), (a_ - k.dim()) / 2);
    case Kind::kernel:
      return kernel_.coefficient(k);
  }
  return 0.0;
}

int HartreeState::dimension() const { return states.empty() ? 1 : states.front().dimension(); }

void HartreeState::validate() const {
  if (states.empty()) throw InvalidArgument("hartree state has no orbitals");
  if (weights.size() != states.size())
    throw InvalidArgument("hartree state: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(states.size()) + " states");
  if (states.size() > kMaxHartreeStates)
    throw InvalidArgument("hartree state: at most " + std::to_string(kMaxHartreeStates) + " states");
  const int d = dimension();
  if (d < 1 || d > 2) throw InvalidArgument("hartree state: dimension must be 1 or 2");
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (!(weights[j] >= 0) || !std::isfinite(weights[j]))
      throw InvalidArgument("hartree state: weights must be finite and nonnegative");
    if (states[j].dimension() != d) throw InvalidArgument("hartree state: mixed dimensions");
    if (states[j].max_abs_frequency() > kMaxHartreeBox)
      throw InvalidArgument("hartree state: frequencies must lie in [-" + std::to_string(kMaxHartreeBox) + ", " +
                            std::to_string(kMaxHartreeBox) + "]^d");
  }
}

namespace {

std::int64_t bandwidth(const HartreeState& s) {
  std::int64_t K = 0;
  for (const auto& f : s.states) K = std::max(K, f.max_abs_frequency());
  return K;
}

std::size_t grid_size(int d, int M) {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(M);
  return n;
}

std::size_t flat_index(const LatticePoint& k, int M) {
  std::size_t idx = 0;
  for (int i = 0; i < k.dim(); ++i)
    idx = idx * static_cast<std::size_t>(M) + static_cast<std::size_t>(detail::wrap_index(k[i], M));
  return idx;
}

LatticePoint frequency_at(std::size_t idx, int d, int M) {
  std::int64_t c[kMaxDimension] = {};
  for (int i = d - 1; i >= 0; --i) {
    c[i] = detail::signed_frequency(static_cast<int>(idx % static_cast<std::size_t>(M)), M);
    idx /= static_cast<std::size_t>(M);
  }
  return LatticePoint(std::span<const std::int64_t>(c, static_cast<std::size_t>(d)));
}

// Cached plans and symbols for one (d, M, W, P).
class Integrator {
 public:
  Integrator(int d, int M, const PotentialSpec& W, const PropagatorSpec& P)
      : d_(d), M_(M), n_(grid_size(d, M)),
        forward_(d, M, detail::FftDirection::forward),
        backward_(d, M, detail::FftDirection::backward),
        dispersion_(n_), symbol_(n_), offset_(W.offset()), zero_(W.kind() == PotentialSpec::Kind::zero) {
    if (W.kind() == PotentialSpec::Kind::kernel && 2 * W.kernel_coefficients().max_abs_frequency() >= M)
      throw InvalidArgument("kernel potential: frequencies exceed the grid band");
    for (std::size_t i = 0; i < n_; ++i) {
      const auto k = frequency_at(i, d, M);
      dispersion_[i] = P.dispersion_at(k.norm_sq());
      symbol_[i] = W.symbol(k);
    }
  }

  std::size_t size() const { return n_; }
  double dispersion(std::size_t i) const { return dispersion_[i]; }

  void to_values(const std::vector<Complex>& coef, std::vector<Complex>& values) const {
    backward_.execute(coef, values);
  }

  void to_coefficients(const std::vector<Complex>& values, std::vector<Complex>& coef) const {
    forward_.execute(values, coef);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& c : coef) c *= scale;
  }

  // Potential without the gauge offset.
  std::vector<double> potential(const std::vector<double>& rho) const {
    std::vector<double> V(n_, 0.0);
    if (zero_) return V;
    std::vector<Complex> r(rho.begin(), rho.end()), c(n_);
    to_coefficients(r, c);
    for (std::size_t i = 0; i < n_; ++i) c[i] *= symbol_[i];
    to_values(c, r);
    for (std::size_t i = 0; i < n_; ++i) V[i] = r[i].real();
    return V;
  }

  void kinetic(GridState& s, double tau) const {
    detail::parallel_for(s.coefficients.size(), [&](std::size_t j) {
      auto& c = s.coefficients[j];
      for (std::size_t i = 0; i < n_; ++i) c[i] *= unit_phase(-tau * dispersion_[i]);
    });
  }

  std::vector<double> density(const GridState& s, std::vector<std::vector<Complex>>* values_out) const {
    std::vector<std::vector<Complex>> values(s.coefficients.size(), std::vector<Complex>(n_));
    detail::parallel_for(s.coefficients.size(), [&](std::size_t j) { to_values(s.coefficients[j], values[j]); });
    std::vector<double> rho(n_, 0.0);
    for (std::size_t j = 0; j < values.size(); ++j)
      for (std::size_t i = 0; i < n_; ++i) rho[i] += s.weights[j] * std::norm(values[j][i]);
    if (values_out) *values_out = std::move(values);
    return rho;
  }

  void potential_step(GridState& s, double tau) const {
    std::vector<std::vector<Complex>> values;
    const auto rho = density(s, &values);
    auto V = potential(rho);
    std::vector<Complex> phase(n_);
    for (std::size_t i = 0; i < n_; ++i) phase[i] = unit_phase(-tau * (V[i] + offset_));
    detail::parallel_for(values.size(), [&](std::size_t j) {
      for (std::size_t i = 0; i < n_; ++i) values[j][i] *= phase[i];
      to_coefficients(values[j], s.coefficients[j]);
    });
  }

  void step(GridState& s, double dt, SplitScheme scheme) const {
    if (scheme == SplitScheme::strang) {
      kinetic(s, dt / 2);
      potential_step(s, dt);
      kinetic(s, dt / 2);
    } else {
      kinetic(s, dt);
      potential_step(s, dt);
    }
    s.time += dt;
  }

  Observables observe(const GridState& s, std::size_t step_index) const {
    Observables o;
    o.step = step_index;
    o.time = s.time;
    double kinetic = 0;
    for (std::size_t j = 0; j < s.coefficients.size(); ++j) {
      double m = 0, e = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double a2 = std::norm(s.coefficients[j][i]);
        m += a2;
        e += dispersion_[i] * a2;
      }
      o.masses.push_back(m);
      o.trace += s.weights[j] * m;
      kinetic += s.weights[j] * e;
    }
    double interaction = 0;
    if (!zero_) {
      const auto rho = density(s, nullptr);
      const auto V = potential(rho);
      for (std::size_t i = 0; i < n_; ++i) interaction += V[i] * rho[i];
      interaction /= static_cast<double>(n_);
    }
    o.energy = kinetic + 0.5 * interaction;
    return o;
  }

  // Sobolev-type size used for the blow-up heuristic.
  double size_indicator(const GridState& s) const {
    double r = 0;
    for (std::size_t j = 0; j < s.coefficients.size(); ++j)
      for (std::size_t i = 0; i < n_; ++i) r += s.weights[j] * (1 + dispersion_[i]) * std::norm(s.coefficients[j][i]);
    return r;
  }

 private:
  int d_, M_;
  std::size_t n_;
  detail::FftPlan forward_, backward_;
  std::vector<double> dispersion_;
  std::vector<Complex> symbol_;
  double offset_;
  bool zero_;
};

void check_steps(const SolverConfig& c) {
  if (!(c.dt > 0) || !std::isfinite(c.dt)) throw InvalidArgument("solver: dt must be positive");
  if (!(c.t_end >= 0) || !std::isfinite(c.t_end)) throw InvalidArgument("solver: t_end must be nonnegative");
  if (c.output_every < 1) throw InvalidArgument("solver: output_every must be >= 1");
  if (!(c.blowup_factor > 1)) throw InvalidArgument("solver: blowup_factor must exceed 1");
  const double n = c.t_end / c.dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw InvalidArgument("solver: t_end must be an integer multiple of dt");
}

}  // namespace

int default_hartree_grid(const HartreeState& state) {
  const auto K = bandwidth(state);
  int M = 8;
  while (M < 6 * K || M < 4 * K + 1) M *= 2;
  return M;
}

GridState GridState::from(const HartreeState& state, int M) {
  state.validate();
  const auto K = bandwidth(state);
  if (M < 4 * K + 1)
    throw InvalidArgument("aliasing: grid M=" + std::to_string(M) + " too coarse for the density (need M >= " +
                          std::to_string(4 * K + 1) + ")");
  GridState g;
  g.dimension = state.dimension();
  g.M = M;
  g.weights = state.weights;
  g.time = state.time;
  const auto n = grid_size(g.dimension, M);
  for (const auto& f : state.states) {
    std::vector<Complex> c(n);
    for (const auto& [k, a] : f.entries()) c[flat_index(k, M)] = a;
    g.coefficients.push_back(std::move(c));
  }
  return g;
}

HartreeState GridState::to_state(double drop_below) const {
  HartreeState s;
  s.weights = weights;
  s.time = time;
  for (const auto& c : coefficients) {
    FourierState f(dimension);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (std::abs(c[i]) > drop_below) f.set(frequency_at(i, dimension, M), c[i]);
    s.states.push_back(std::move(f));
  }
  return s;
}

std::vector<double> compute_density(const HartreeState& state, int M) {
  const auto g = GridState::from(state, M);
  const Integrator I(g.dimension, M, PotentialSpec::zero(), PropagatorSpec::fractional_schrodinger(2.0));
  return I.density(g, nullptr);
}

std::vector<double> apply_potential(std::span<const double> rho, int d, int M, const PotentialSpec& W) {
  check_dimension(d);
  if (M < 1) throw InvalidArgument("apply_potential: M must be >= 1");
  if (rho.size() != grid_size(d, M)) throw InvalidArgument("apply_potential: density size does not match M^d");
  const Integrator I(d, M, W, PropagatorSpec::fractional_schrodinger(2.0));
  auto V = I.potential(std::vector<double>(rho.begin(), rho.end()));
  for (auto& v : V) v += W.offset();
  return V;
}

std::vector<double> grid_density(const GridState& state) {
  const Integrator I(state.dimension, state.M, PotentialSpec::zero(), PropagatorSpec::fractional_schrodinger(2.0));
  return I.density(state, nullptr);
}

void step(GridState& state, const PotentialSpec& W, const PropagatorSpec& P, double dt, SplitScheme scheme) {
  if (!(dt > 0)) throw InvalidArgument("step: dt must be positive");
  const Integrator I(state.dimension, state.M, W, P);
  I.step(state, dt, scheme);
}

Observables observe(const GridState& state, const PotentialSpec& W, const PropagatorSpec& P, std::size_t step) {
  const Integrator I(state.dimension, state.M, W, P);
  return I.observe(state, step);
}

Trajectory solve(const HartreeState& initial, const PotentialSpec& W, const PropagatorSpec& P,
                 const SolverConfig& config) {
  check_steps(config);
  initial.validate();
  const int M = config.grid == 0 ? default_hartree_grid(initial) : config.grid;
  Trajectory tr;
  tr.final_state = GridState::from(initial, M);
  auto& s = tr.final_state;
  const Integrator I(s.dimension, M, W, P);
  const auto n_steps = static_cast<std::size_t>(std::llround(config.t_end / config.dt));

  const Observables first = I.observe(s, 0);
  tr.samples.push_back(first);
  const double size0 = I.size_indicator(s);
  auto& rep = tr.conservation;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    I.step(s, config.dt, config.scheme);
    s.time = initial.time + static_cast<double>(n) * config.dt;
    auto o = I.observe(s, n);
    for (double m : o.masses)
      if (!std::isfinite(m)) throw NumericError("non-finite orbital mass", n);
    if (!std::isfinite(o.energy)) throw NumericError("non-finite energy", n);
    for (std::size_t j = 0; j < o.masses.size(); ++j)
      if (first.masses[j] > 0)
        rep.max_mass_drift = std::max(rep.max_mass_drift, std::abs(o.masses[j] - first.masses[j]) / first.masses[j]);
    if (first.trace > 0) rep.trace_drift = std::max(rep.trace_drift, std::abs(o.trace - first.trace) / first.trace);
    rep.energy_drift = std::max(rep.energy_drift, std::abs(o.energy - first.energy));
    tr.steps = n;
    const bool last = n == n_steps;
    const bool blown = I.size_indicator(s) > config.blowup_factor * size0;
    if (last || blown || n % static_cast<std::size_t>(config.output_every) == 0) tr.samples.push_back(std::move(o));
    if (blown) {
      rep.blowup = true;
      rep.blowup_step = n;
      break;
    }
  }
  rep.relative_energy_drift = first.energy != 0 ? rep.energy_drift / std::abs(first.energy) : rep.energy_drift;
  return tr;
}

ConvergenceReport convergence_study(const HartreeState& initial, const PotentialSpec& W, const PropagatorSpec& P,
                                    const SolverConfig& config, int levels) {
  if (levels < 2) throw InvalidArgument("convergence_study: need at least 2 levels");
  check_steps(config);
  ConvergenceReport r;
  double dt = config.dt;
  for (int l = 0; l < levels; ++l, dt /= 2) r.dts.push_back(dt);
  r.reference_dt = r.dts.back() / 64;
  SolverConfig ref_cfg = config;
  ref_cfg.dt = r.reference_dt;
  ref_cfg.output_every = std::numeric_limits<int>::max();
  const auto ref = solve(initial, W, P, ref_cfg);
  for (double h : r.dts) {
    SolverConfig c = config;
    c.dt = h;
    c.output_every = std::numeric_limits<int>::max();
    const auto run = solve(initial, W, P, c);
    double err = 0;
    for (std::size_t j = 0; j < run.final_state.coefficients.size(); ++j) {
      double e2 = 0;
      for (std::size_t i = 0; i < run.final_state.coefficients[j].size(); ++i)
        e2 += std::norm(run.final_state.coefficients[j][i] - ref.final_state.coefficients[j][i]);
      err = std::max(err, std::sqrt(e2));
    }
    r.errors.push_back(err);
    r.energy_drifts.push_back(run.conservation.energy_drift);
  }
  for (std::size_t i = 0; i + 1 < r.dts.size(); ++i) {
    r.orders.push_back(std::log2(r.errors[i] / r.errors[i + 1]));
    r.energy_ratios.push_back(r.energy_drifts[i] / r.energy_drifts[i + 1]);
  }
  return r;
}

double sobolev_schatten_norm(const HartreeState& state, double s, Exponent beta) {
  state.validate();
  if (!beta.is_infinite() && beta.value() < 1) throw InvalidArgument("sobolev_schatten_norm: beta must be >= 1");
  const auto J = static_cast<Eigen::Index>(state.states.size());
  // Nonzero spectrum of sum nu_j g_j g_j^* equals that of N^{1/2} G N^{1/2}, G_ij = <g_j, g_i>.
  Eigen::MatrixXcd G(J, J);
  for (Eigen::Index i = 0; i < J; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      Complex acc = 0;
      const auto& fi = state.states[static_cast<std::size_t>(i)];
      const auto& fj = state.states[static_cast<std::size_t>(j)];
      for (const auto& [k, a] : fi.entries()) {
        const Complex b = fj.coefficient(k);
        if (b == Complex(0)) continue;
        acc += std::pow(1.0 + static_cast<double>(k.norm_sq()), s) * std::conj(b) * a;
      }
      const double w = std::sqrt(state.weights[static_cast<std::size_t>(i)] * state.weights[static_cast<std::size_t>(j)]);
      G(i, j) = w * acc;
      G(j, i) = std::conj(G(i, j));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
  std::vector<double> lambda(static_cast<std::size_t>(J));
  for (Eigen::Index i = 0; i < J; ++i) lambda[static_cast<std::size_t>(i)] = std::abs(eig.eigenvalues()(i));
  return ell_norm(lambda, beta);
}

}  // namespace dispersia
