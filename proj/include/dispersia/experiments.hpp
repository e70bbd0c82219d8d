#pragma once

// Scaling experiments on T^d and S^2, decoupling / discrete restriction
// probes and the Schatten duality probe. Expected slopes are never computed
// here; callers compare the fitted exponents against their own predictions.

#include <cstdint>
#include <utility>
#include <vector>

#include "dispersia/norms.hpp"
#include "dispersia/random.hpp"
#include "dispersia/spectral.hpp"

namespace dispersia {

// Least squares line through (log N, log value).
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

ExponentFit fit_exponent(std::span<const std::pair<double, double>> pairs);

// Log-space residual of one pair against a fit.
double fit_residual(const ExponentFit& fit, double N, double value);

struct ScalingReport {
  std::vector<double> cutoffs;
  std::vector<double> values;
  ExponentFit fit;

  std::vector<std::pair<double, double>> pairs() const;
};

// ---------------------------------------------------------------------------
// Packet lower bound: f_N = sum_{|k| <= N} e^{2 pi i k.x}, measured in
// L^p_t L^q_x over |t| < window N^-alpha, |x| < window / N.

struct PacketConfig {
  int d = 1;
  double alpha = 2.0;
  Exponent p = 4.0;
  Exponent q = 4.0;
  std::vector<double> cutoffs;
  double window = 1.0 / 8.0;
  int samples_per_axis = 16;  // midpoint nodes per window axis, >= 4
  bool normalized = true;     // divide by ||f_N||_2
};

// Windowed norm for one cutoff (normalized per config).
double packet_norm(const PacketConfig& config, double N);
// Same quantity over the whole torus T^{d+1} = [0,1) x [0,1)^d, using the
// resolving synthesis grid.
double packet_full_norm(const PacketConfig& config, double N);
ScalingReport packet_experiment(const PacketConfig& config);

// ---------------------------------------------------------------------------
// Weyl saturation: all pure modes |k| <= N with weight nu; the density is the
// constant nu * #{|k| <= N}.

struct WeylConfig {
  int d = 2;
  PropagatorSpec propagator = PropagatorSpec::fractional_schrodinger(2.0);
  Exponent p = 4.0;
  Exponent q = 4.0;
  std::vector<double> cutoffs;
  double nu = 1.0;
  std::size_t time_samples = 4;
  int space_samples = 8;
  double t_start = 0.0;
  double t_end = 1.0;
};

struct WeylCell {
  double N = 0;
  std::uint64_t count = 0;
  double max_identity_error = 0;  // max |rho - nu count| over samples
  double norm = 0;                // || rho ||_{L^{p/2}_t L^{q/2}_x}
};

struct WeylReport {
  std::vector<WeylCell> cells;
  ScalingReport scaling;
};

WeylReport weyl_saturation_experiment(const WeylConfig& config);

// ---------------------------------------------------------------------------
// Shell eigenfunction f = sum_{|k| = N} e^{2 pi i k.x}.

struct ShellConfig {
  int d = 2;
  Exponent q = 4.0;
  std::vector<double> cutoffs;  // integers with r_d(N^2) > 0
  double window = 1.0 / 8.0;    // |x| < window / N
  int samples_per_axis = 32;
};

struct ShellCell {
  std::int64_t N = 0;
  std::uint64_t shell_count = 0;  // r_d(N^2)
  double l2_norm_sq = 0;          // equals shell_count exactly
  Complex value_at_origin;        // equals shell_count exactly
  double windowed_norm = 0;
  double predicted = 0;           // r_d(N^2) N^{-d/q}
  double ratio = 0;
};

struct ShellReport {
  std::vector<ShellCell> cells;
  ScalingReport scaling;  // windowed norm vs N
  bool identities_exact = true;
};

ShellReport shell_eigenfunction_experiment(const ShellConfig& config);

// ---------------------------------------------------------------------------
// Torus analogue of the spectral-cluster construction at x0 = 0:
// f_j = count_j^{-1/2} sum_{|k| in (j-c, j]} e^{-2 pi i k.x}.

struct ClusterConfig {
  int d = 2;
  double alpha = 2.0;
  std::vector<double> j_values;
  double width = 1.0;
  double epsilon = 0.01;  // |t| <= eps j^{1-alpha}, |x| <= eps / j
  int samples_per_axis = 5;
  double min_ratio = 0.5;
};

struct ClusterCell {
  double j = 0;
  std::size_t shell_count = 0;
  double normalization = 0;  // c_j = count^{-1/2}
  Complex value_at_origin;   // sqrt(count)
  double min_ratio = 0;      // min |u_j(t,x)| / u_j(0,0) over the region
};

struct ClusterReport {
  std::vector<ClusterCell> cells;
  double smallest_ratio = 0;
  double gram_deviation = 0;  // max |G - Id|
  bool pass = false;
};

OrthonormalSystem cluster_system(int d, std::span<const double> j_values, double width);
ClusterReport torus_cluster_experiment(const ClusterConfig& config);
// |u_j(t, x)| / u_j(0, 0) for a single shell.
double cluster_amplitude_ratio(int d, double alpha, double j, double width, double t, std::span<const double> x);

// ---------------------------------------------------------------------------
// Zonal harmonics on S^2: Z_j(theta) = sqrt((2j+1)/(4 pi)) P_j(cos theta).

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendre gauss_legendre(int n);
// P_0..P_n at x by the three-term recurrence.
std::vector<double> legendre_all(int n, double x);
double zonal_value(int j, double cos_theta);

struct ZonalConfig {
  std::vector<double> cutoffs;  // N: sum over j <= N
  Exponent p = 4.0;
  Exponent q = 4.0;
  int phi_samples = 8;
  double interval_length = 1.0;
  int normalization_degree = 0;  // check ||Z_j||_2 for j <= this; 0: the largest cutoff
};

struct ZonalReport {
  ScalingReport scaling;
  double max_normalization_error = 0;  // max_{j <= degree} | ||Z_j||_2 - 1 |
};

// ||Z_j||_{L^2(S^2)} with 2 j_max + 2 Gauss-Legendre nodes.
double zonal_l2_norm(int j, int j_max, int phi_samples = 8);
// || sum_{j <= N} |Z_j|^2 ||_{L^{p/2}_t L^{q/2}_x(I x S^2)}.
double zonal_density_norm(int N, Exponent p, Exponent q, double interval_length = 1.0, int phi_samples = 8);
ZonalReport zonal_sphere_experiment(const ZonalConfig& config);

// ---------------------------------------------------------------------------
// Decoupling for S = {(y, |y|^alpha)}, d = 1.

enum class DecouplingDensity { constant, random_phase, single_block };

struct DecouplingInstance {
  int d = 1;
  double alpha = 2.0;
  double delta = 0.25;
  double radius = 0.0;  // 0: the minimal admissible delta^{-max(1, alpha/2)}
  DecouplingDensity density = DecouplingDensity::constant;
  std::uint64_t seed = 0;
  int block = 0;  // single_block only
  int nodes_per_block = 8;
  double grid_spacing = 0.25;
  int min_grid = 32;
  double weight_extent = 2.0;  // weighted norms integrate over [-extent R, extent R]^{d+1}
};

struct DecouplingResult {
  double radius = 0;
  std::size_t blocks = 0;
  std::size_t grid_points_per_axis = 0;
  double lhs = 0;  // || E g ||_{L^p(B_R)}
  double rhs = 0;  // (sum || E_Delta g ||^2_{L^p(w_B)})^{1/2}
  double ratio = 0;
};

DecouplingResult decoupling_ratio(const DecouplingInstance& instance, Exponent p);

// ---------------------------------------------------------------------------
// Discrete restriction over Lambda = (1/N) Z^d ∩ [-1,1]^d.

struct RestrictionConfig {
  int d = 1;
  double alpha = 2.0;
  std::vector<double> cutoffs;
  Exponent p = 6.0;
  double radius_factor = 1.0;  // R = factor N^{max(2, alpha)}
  int trials = 20;
  int samples = 16384;  // Monte Carlo points in B_R per trial
  std::uint64_t seed = 0;
};

struct RestrictionCell {
  double N = 0;
  double radius = 0;
  std::size_t frequencies = 0;
  double max_ratio = 0;  // sampled maximum: a lower bound of the true supremum
  double mean_ratio = 0;
};

struct RestrictionReport {
  std::vector<RestrictionCell> cells;
  ScalingReport scaling;  // max ratio vs N
};

std::vector<std::vector<double>> separated_frequencies(int d, double N);
// (|B_R|^{-1} ∫_{B_R} |sum a_xi e(x.xi + x_{d+1}|xi|^alpha)|^p)^{1/p} / ||a||_2,
// Monte Carlo with `samples` uniform points.
double restriction_ratio(int d, double alpha, const std::vector<std::vector<double>>& frequencies,
                         std::span<const Complex> coefficients, Exponent p, double radius, int samples,
                         Rng& rng);
RestrictionReport discrete_restriction_experiment(const RestrictionConfig& config);

// ---------------------------------------------------------------------------
// Schatten duality probe on a discrete space-time grid with counting measure.
// Row index of T is t * space_count + x.

struct SampleGrid {
  int time_count = 1;
  int space_count = 1;
  std::size_t size() const { return static_cast<std::size_t>(time_count) * static_cast<std::size_t>(space_count); }
};

struct DualityConfig {
  Exponent p = 4.0;
  Exponent q = 4.0;
  Exponent beta = 2.0;
  int samples = 200;
  std::uint64_t seed = 0;
  double slack = 1e-6;
};

struct DualityReport {
  double c_sys = 0;          // max ||sum nu_j |T f_j|^2|| / ||nu||_beta over sampled systems
  double c_dual_random = 0;  // max over random W of ||W T T* W̄||_{S^beta'} / ||W||^2
  double c_dual = 0;         // including the norming W of every sampled system
  bool forward_holds = false;  // c_sys <= (1 + slack) c_dual
  double reverse_gap = 0;      // c_sys / c_dual_random - 1 (reported, not asserted)
  double certificate_excess = 0;  // max over systems of ratio / ratio of its norming W; <= 1 in exact arithmetic
  std::size_t systems = 0;
  std::size_t weights = 0;
};

// ||sum nu_j |T f_j|^2||_{L^{p/2}_t L^{q/2}_x} / ||nu||_beta; columns of
// `states` are the orthonormal f_j.
double system_ratio(const FiniteOperator& T, SampleGrid grid, const Eigen::MatrixXcd& states,
                    std::span<const double> nu, Exponent p, Exponent q, Exponent beta);
// ||W T T* W̄||_{S^{beta'}} / ||W||^2_{L^{2(p/2)'}_t L^{2(q/2)'}_x}.
double dual_ratio(const FiniteOperator& T, SampleGrid grid, std::span<const Complex> W, Exponent p, Exponent q,
                  Exponent beta);
// W with |W|^2 = |V| where V norms rho in the dual of L^{p/2}_t L^{q/2}_x.
std::vector<Complex> norming_weight(std::span<const double> rho, SampleGrid grid, Exponent p, Exponent q);
// L^a_t L^b_x norm of |values| on the grid with counting measure.
double counting_mixed_norm(std::span<const double> values, SampleGrid grid, Exponent a, Exponent b);

DualityReport duality_probe(const FiniteOperator& T, SampleGrid grid, const DualityConfig& config);

// T f = (e^{i t P} f)(x) sampled on a space-time grid, columns = modes of `basis`.
FiniteOperator propagator_operator(const FrequencySet& basis, const SpaceTimeGrid& grid, const PropagatorSpec& P);

}  // namespace dispersia
