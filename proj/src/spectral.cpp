#include "dispersia/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dispersia/error.hpp"
#include "fft.hpp"
#include "parallel.hpp"

namespace dispersia {

int OrthonormalSystem::dimension() const {
  if (states.empty()) throw InvalidArgument("empty orthonormal system");
  return states.front().dimension();
}

void OrthonormalSystem::validate() const {
  if (weights.size() != states.size())
    throw InvalidArgument("system has " + std::to_string(weights.size()) + " weights but " +
                          std::to_string(states.size()) + " states");
  for (const auto& s : states)
    if (s.dimension() != dimension()) throw InvalidArgument("system mixes state dimensions");
}

double BumpProfile::operator()(double s) const {
  const double a = std::abs(s);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  auto g = [](double r) { return r > 0 ? std::exp(-1.0 / r) : 0.0; };
  const double width = outer - inner;
  const double rise = g((outer - a) / width);
  const double fall = g((a - inner) / width);
  return rise / (rise + fall);
}

PropagatorSpec PropagatorSpec::fractional_schrodinger(double alpha) {
  if (!(alpha > 0) || alpha == 1.0)
    throw InvalidArgument("fractional Schrodinger order must be positive and != 1");
  return {Kind::fractional_schrodinger, alpha, 0.0};
}

PropagatorSpec PropagatorSpec::klein_gordon(double mass) {
  if (!(mass >= 0)) throw InvalidArgument("Klein-Gordon mass must be >= 0");
  return {Kind::klein_gordon, 1.0, mass};
}

double PropagatorSpec::dispersion(double lambda) const {
  if (kind_ == Kind::fractional_schrodinger) return std::pow(std::abs(lambda), alpha_);
  return std::sqrt(mass_ * mass_ + lambda * lambda);
}

double PropagatorSpec::dispersion_at(std::int64_t norm_sq) const {
  const auto n = static_cast<double>(norm_sq);
  if (kind_ == Kind::fractional_schrodinger) return std::pow(n, alpha_ / 2.0);
  return std::sqrt(mass_ * mass_ + n);
}

FourierState project_frequency(const FourierState& f, const BumpProfile& psi, double N) {
  if (!(N > 0)) throw InvalidArgument("projection cutoff N must be > 0");
  FourierState out(f.dimension());
  for (const auto& [k, a] : f.entries()) out.set(k, psi(k.norm() / N) * a);
  return out;
}

double littlewood_paley_weight(int level, double s, const BumpProfile& psi) {
  if (level < 0) throw InvalidArgument("Littlewood-Paley level must be >= 0");
  if (level == 0) return psi(s);
  const double scale = std::ldexp(1.0, level);
  return psi(s / scale) - psi(2.0 * s / scale);
}

FourierState littlewood_paley_piece(const FourierState& f, int level, const BumpProfile& psi) {
  FourierState out(f.dimension());
  for (const auto& [k, a] : f.entries()) out.set(k, littlewood_paley_weight(level, k.norm(), psi) * a);
  return out;
}

Complex unit_phase(double theta) {
  const double r = theta - std::round(theta);
  const double angle = 2.0 * std::numbers::pi * r;
  return {std::cos(angle), std::sin(angle)};
}

FourierState evolve(const FourierState& f, double t, const PropagatorSpec& P) {
  if (t == 0.0) return f;
  FourierState out(f.dimension());
  for (const auto& [k, a] : f.entries()) out.set(k, a * unit_phase(t * P.dispersion_at(k.norm_sq())));
  return out;
}

std::size_t SpaceTimeGrid::points_per_slice() const {
  std::size_t n = 1;
  for (int i = 0; i < dimension; ++i) n *= static_cast<std::size_t>(space_points);
  return n;
}

void SpaceTimeGrid::position(std::size_t idx, std::span<double> x) const {
  const auto M = static_cast<std::size_t>(space_points);
  for (int i = dimension - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = static_cast<double>(idx % M) / static_cast<double>(M);
    idx /= M;
  }
}

SpaceTimeGrid SpaceTimeGrid::uniform(int d, int M, double t_start, double t_end, std::size_t count) {
  check_dimension(d);
  if (M < 1) throw InvalidArgument("spatial grid needs M >= 1");
  if (count < 1) throw InvalidArgument("time grid needs at least one sample");
  SpaceTimeGrid g{d, M, {}};
  g.times.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    g.times[i] = t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(count);
  return g;
}

SpaceTimeGrid SpaceTimeGrid::resolving(const FourierState& f, const PropagatorSpec& P, double t_start,
                                       double t_end) {
  const int M = static_cast<int>(4 * f.max_abs_frequency() + 1);
  const double fastest = P.dispersion_at(f.max_norm_sq()) * std::abs(t_end - t_start);
  const auto count = static_cast<std::size_t>(8 * std::ceil(fastest) + 1);
  return uniform(f.dimension(), M, t_start, t_end, count);
}

namespace {

std::size_t flat_index(const LatticePoint& k, int M) {
  std::size_t idx = 0;
  for (int i = 0; i < k.dim(); ++i)
    idx = idx * static_cast<std::size_t>(M) + static_cast<std::size_t>(detail::wrap_index(k[i], M));
  return idx;
}

void check_grid(const FourierState& f, const SpaceTimeGrid& grid) {
  if (grid.dimension != f.dimension()) throw InvalidArgument("grid and state dimensions differ");
  const auto need = 2 * f.max_abs_frequency() + 1;
  if (grid.space_points < need)
    throw InvalidArgument("aliasing: spatial grid M=" + std::to_string(grid.space_points) +
                          " is too coarse for the support (need M >= " + std::to_string(need) + ")");
}

}  // namespace

SpaceTimeField synthesize(const FourierState& f, const SpaceTimeGrid& grid, const PropagatorSpec& P) {
  check_grid(f, grid);
  SpaceTimeField field{grid, std::vector<Complex>(grid.size())};
  const std::size_t slice = grid.points_per_slice();
  const detail::FftPlan plan(grid.dimension, grid.space_points, detail::FftDirection::backward);

  std::vector<std::pair<std::size_t, std::pair<Complex, double>>> modes;
  modes.reserve(f.size());
  for (const auto& [k, a] : f.entries())
    modes.push_back({flat_index(k, grid.space_points), {a, P.dispersion_at(k.norm_sq())}});

  detail::parallel_for(grid.times.size(), [&](std::size_t ti) {
    std::vector<Complex> spectrum(slice);
    const double t = grid.times[ti];
    for (const auto& [idx, aw] : modes) spectrum[idx] = aw.first * unit_phase(t * aw.second);
    plan.execute(spectrum, std::span<Complex>(field.values).subspan(ti * slice, slice));
  });
  return field;
}

DensityField density(const OrthonormalSystem& system, const SpaceTimeGrid& grid, const PropagatorSpec& P) {
  system.validate();
  if (system.states.empty()) throw InvalidArgument("density of an empty system");
  DensityField rho{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t j = 0; j < system.size(); ++j) {
    const auto u = synthesize(system.states[j], grid, P);
    const double nu = system.weights[j];
    for (std::size_t i = 0; i < rho.values.size(); ++i) rho.values[i] += nu * std::norm(u.values[i]);
  }
  return rho;
}

Complex evaluate(const FourierState& f, double t, std::span<const double> x, const PropagatorSpec& P) {
  if (static_cast<int>(x.size()) != f.dimension()) throw InvalidArgument("point dimension mismatch");
  Complex s{};
  for (const auto& [k, a] : f.entries()) {
    double theta = t * P.dispersion_at(k.norm_sq());
    for (int i = 0; i < k.dim(); ++i) theta += static_cast<double>(k[i]) * x[static_cast<std::size_t>(i)];
    s += a * unit_phase(theta);
  }
  return s;
}

DensityField density_direct(const OrthonormalSystem& system, const SpaceTimeGrid& grid,
                            const PropagatorSpec& P) {
  system.validate();
  if (system.states.empty()) throw InvalidArgument("density of an empty system");
  if (grid.dimension != system.dimension()) throw InvalidArgument("grid and system dimensions differ");
  DensityField rho{grid, std::vector<double>(grid.size(), 0.0)};
  const std::size_t slice = grid.points_per_slice();
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    double x[kMaxDimension];
    grid.position(i % slice, std::span<double>(x, static_cast<std::size_t>(grid.dimension)));
    const double t = grid.times[i / slice];
    double acc = 0;
    for (std::size_t j = 0; j < system.size(); ++j)
      acc += system.weights[j] *
             std::norm(evaluate(system.states[j], t, std::span<const double>(x, grid.dimension), P));
    rho.values[i] = acc;
  });
  return rho;
}

}  // namespace dispersia
