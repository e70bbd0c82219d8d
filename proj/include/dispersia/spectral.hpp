#pragma once

// Functions on T^d given by Fourier coefficients: frequency projections,
// dispersive propagators and space-time synthesis.
//
// Phase convention: the propagator acts on the mode e^{2 pi i k.x} by
// e^{2 pi i t w(|k|)} with eigenvalue label lambda_k = |k|, so the torus
// Schrodinger flow (alpha = 2) is exactly 1-periodic in time.

#include <span>
#include <vector>

#include "dispersia/fourier_state.hpp"
#include "dispersia/orthonormal_system.hpp"

namespace dispersia {

// Smooth radial cutoff: 1 on |s| <= inner, 0 on |s| >= outer, with the
// transition g(r_out) / (g(r_out) + g(r_in)), g(r) = exp(-1/r).
struct BumpProfile {
  double inner = 1.0;
  double outer = 2.0;

  double operator()(double s) const;
};

class PropagatorSpec {
 public:
  enum class Kind { fractional_schrodinger, klein_gordon };

  static PropagatorSpec fractional_schrodinger(double alpha);
  static PropagatorSpec klein_gordon(double mass);
  static PropagatorSpec wave() { return klein_gordon(0.0); }

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double mass() const noexcept { return mass_; }

  // w(lambda): lambda^alpha or sqrt(m^2 + lambda^2).
  double dispersion(double lambda) const;
  // w(|k|) from the exact |k|^2; exact for alpha = 2 and for perfect squares
  // with the wave equation.
  double dispersion_at(std::int64_t norm_sq) const;

 private:
  PropagatorSpec(Kind kind, double alpha, double mass) : kind_(kind), alpha_(alpha), mass_(mass) {}
  Kind kind_;
  double alpha_;
  double mass_;
};

// Coefficientwise psi(|k|/N) a_k.
FourierState project_frequency(const FourierState& f, const BumpProfile& psi, double N);

// phi_0 = psi, phi_l(s) = psi(s/2^l) - psi(s/2^{l-1}); telescopes to 1.
double littlewood_paley_weight(int level, double s, const BumpProfile& psi = {});
FourierState littlewood_paley_piece(const FourierState& f, int level, const BumpProfile& psi = {});

// e^{2 pi i t w(|k|)} a_k.
FourierState evolve(const FourierState& f, double t, const PropagatorSpec& P);

// e^{2 pi i theta}, with theta reduced mod 1 first so integer phases are exact.
Complex unit_phase(double theta);

// Uniform spatial grid x = n / M on [0,1)^d (row-major over (x_1, ..., x_d))
// and arbitrary time samples.
struct SpaceTimeGrid {
  int dimension = 1;
  int space_points = 1;  // M per dimension
  std::vector<double> times;

  std::size_t points_per_slice() const;
  std::size_t size() const { return times.size() * points_per_slice(); }
  // Spatial coordinate of flat index `idx`, written to x[0..d).
  void position(std::size_t idx, std::span<double> x) const;

  // times t_i = t_start + i (t_end - t_start) / count, i < count.
  static SpaceTimeGrid uniform(int d, int M, double t_start, double t_end, std::size_t count);
  // M = 4 max|k_i| + 1; 8 ceil(w(max|k|) |I|) + 1 time samples on [t_start, t_end).
  static SpaceTimeGrid resolving(const FourierState& f, const PropagatorSpec& P, double t_start,
                                 double t_end);
};

struct SpaceTimeField {
  SpaceTimeGrid grid;
  std::vector<Complex> values;  // [time][space]

  Complex at(std::size_t t, std::size_t x) const { return values[t * grid.points_per_slice() + x]; }
};

struct DensityField {
  SpaceTimeGrid grid;
  std::vector<double> values;  // [time][space]

  double at(std::size_t t, std::size_t x) const { return values[t * grid.points_per_slice() + x]; }
};

// values[t][x] = sum_k a_k e^{2 pi i k.x} e^{2 pi i t w(|k|)} via zero-padded
// inverse DFT per time slice. Requires M >= 2 max|k_i| + 1.
SpaceTimeField synthesize(const FourierState& f, const SpaceTimeGrid& grid, const PropagatorSpec& P);

// Pointwise sum_j nu_j |e^{itP} f_j|^2 on the grid.
DensityField density(const OrthonormalSystem& system, const SpaceTimeGrid& grid, const PropagatorSpec& P);

// Direct evaluation of e^{itP} f at one point (no grid restriction).
Complex evaluate(const FourierState& f, double t, std::span<const double> x, const PropagatorSpec& P);

// Density by direct evaluation on an arbitrary (possibly coarse) grid.
DensityField density_direct(const OrthonormalSystem& system, const SpaceTimeGrid& grid,
                            const PropagatorSpec& P);

}  // namespace dispersia
