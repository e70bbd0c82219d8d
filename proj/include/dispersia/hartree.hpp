#pragma once

// Finite Hartree system i d/dt u_j = P u_j + (W rho) u_j, rho = sum nu_j |u_j|^2,
// integrated by split-step Fourier on a uniform grid of T^d. With the 2 pi
// phase convention the free factor over dt is e^{-2 pi i dt w(|k|)}, the
// conjugate of evolve(., dt).

#include <cstdint>
#include <optional>
#include <vector>

#include "dispersia/norms.hpp"
#include "dispersia/spectral.hpp"

namespace dispersia {

class PotentialSpec {
 public:
  enum class Kind { zero, multiplier, kernel };

  static PotentialSpec zero();
  // Symbol (1 + |k|^2)^{(a - d)/2}.
  static PotentialSpec multiplier(double a);
  // Convolution with a real kernel w given by its Fourier coefficients.
  static PotentialSpec kernel(FourierState w);

  // Constant added to W rho (gauge shift). Not part of the reported energy.
  PotentialSpec& with_offset(double v0);

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double offset() const noexcept { return offset_; }
  const FourierState& kernel_coefficients() const noexcept { return kernel_; }
  Complex symbol(const LatticePoint& k) const;

 private:
  PotentialSpec() = default;
  Kind kind_ = Kind::zero;
  double a_ = 0.0;
  double offset_ = 0.0;
  FourierState kernel_;
};

struct HartreeState {
  std::vector<double> weights;
  std::vector<FourierState> states;
  double time = 0.0;

  int dimension() const;
  void validate() const;
};

enum class SplitScheme { strang, lie };

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.1;
  SplitScheme scheme = SplitScheme::strang;
  int grid = 0;  // 0: automatic
  int output_every = 1;
  double blowup_factor = 1e6;
};

inline constexpr std::size_t kMaxHartreeStates = 256;
inline constexpr std::int64_t kMaxHartreeBox = 64;

// Smallest admissible grid: max(8, next power of two >= 6 K), K the largest |k_i|.
int default_hartree_grid(const HartreeState& state);

// rho on the M^d grid (row-major, x = n / M). Needs M >= 4 K + 1.
std::vector<double> compute_density(const HartreeState& state, int M);
// W rho on the same grid; rho is sampled at x = n / M.
std::vector<double> apply_potential(std::span<const double> rho, int d, int M, const PotentialSpec& W);

// Dense Fourier representation of a state on the M^d grid.
struct GridState {
  int dimension = 1;
  int M = 8;
  std::vector<double> weights;
  std::vector<std::vector<Complex>> coefficients;  // per state, FFT layout
  double time = 0.0;

  static GridState from(const HartreeState& state, int M);
  HartreeState to_state(double drop_below = 0.0) const;
};

// rho = sum nu_j |u_j|^2 at the M^d grid points of a dense state.
std::vector<double> grid_density(const GridState& state);

void step(GridState& state, const PotentialSpec& W, const PropagatorSpec& P, double dt, SplitScheme scheme);

struct Observables {
  std::size_t step = 0;
  double time = 0;
  std::vector<double> masses;
  double trace = 0;
  double energy = 0;
};

Observables observe(const GridState& state, const PotentialSpec& W, const PropagatorSpec& P, std::size_t step = 0);

struct ConservationReport {
  double max_mass_drift = 0;    // max_j,t |M_j(t) - M_j(0)| / M_j(0)
  double trace_drift = 0;       // relative
  double energy_drift = 0;      // max_t |E(t) - E(0)|
  double relative_energy_drift = 0;
  bool blowup = false;          // kinetic energy grew beyond blowup_factor
  std::optional<std::size_t> blowup_step;
};

struct Trajectory {
  std::vector<Observables> samples;
  GridState final_state;
  ConservationReport conservation;
  std::size_t steps = 0;
};

Trajectory solve(const HartreeState& initial, const PotentialSpec& W, const PropagatorSpec& P,
                 const SolverConfig& config);

struct ConvergenceReport {
  std::vector<double> dts;
  std::vector<double> errors;         // max_j ||u_j(T; dt) - u_j(T; dt_min / 64)||_2
  std::vector<double> energy_drifts;  // max_t |E(t) - E(0)| per dt
  std::vector<double> orders;         // log2(e(dt) / e(dt / 2))
  std::vector<double> energy_ratios;  // drift(dt) / drift(dt / 2)
  double reference_dt = 0;
};

// Runs config.dt, dt/2, ... (levels entries) against a dt_min / 64 reference.
ConvergenceReport convergence_study(const HartreeState& initial, const PotentialSpec& W, const PropagatorSpec& P,
                                    const SolverConfig& config, int levels = 3);

// || sum_j nu_j (D^s f_j)(D^s f_j)^* ||_{S^beta}, D = (1 + |k|^2)^{1/2}.
double sobolev_schatten_norm(const HartreeState& state, double s, Exponent beta);

}  // namespace dispersia
