#pragma once

#include <Eigen/Dense>
#include <limits>
#include <span>

#include "dispersia/orthonormal_system.hpp"
#include "dispersia/spectral.hpp"

namespace dispersia {

// Lebesgue exponent in [1, inf]; infinity is a distinct state, not a float.
class Exponent {
 public:
  Exponent(double value);  // NOLINT: implicit from a finite value
  static Exponent infinity() { return Exponent(); }

  bool is_infinite() const noexcept { return infinite_; }
  // Throws on infinity.
  double value() const;
  // Hölder conjugate: 1 <-> inf.
  Exponent conjugate() const;
  // p / 2 (may drop below 1, e.g. for dual exponents; validated at use).
  Exponent half() const;
  Exponent scaled(double factor) const;
  // 1/p, 0 for infinity.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() : value_(std::numeric_limits<double>::infinity()), infinite_(true) {}
  double value_;
  bool infinite_;
};

// L^p_t L^q_x over `interval` sampled with `time_count` x `space_count`^d
// uniform points.
struct MixedNormSpec {
  Exponent p = 2.0;
  Exponent q = 2.0;
  double t_start = 0.0;
  double t_end = 1.0;
  std::size_t time_count = 1;
  int space_count = 1;

  static MixedNormSpec for_grid(const SpaceTimeGrid& grid, Exponent p, Exponent q, double t_start,
                                double t_end);
};

// Rectangle rule on the spatial torus (cell volume M^-d) per time slice, then
// rectangle rule in time (cell |I| / T). An infinite exponent takes the
// sample maximum, which is a lower bound for the true supremum.
double mixed_norm(const DensityField& field, const MixedNormSpec& spec);
double mixed_norm(const SpaceTimeField& field, const MixedNormSpec& spec);

// (cell * sum v_i^e)^{1/e} for nonnegative samples, max for infinity.
double discrete_lebesgue_norm(std::span<const double> nonneg, Exponent e, double cell = 1.0);

// (sum |v_i|^beta)^{1/beta}; max |v_i| for infinity.
double ell_norm(std::span<const double> v, Exponent beta);

Eigen::MatrixXcd gram(const OrthonormalSystem& system);
bool is_orthonormal(const OrthonormalSystem& system, double tol = 1e-10);

// Dense operator: rows are output samples, columns input basis vectors.
struct FiniteOperator {
  Eigen::MatrixXcd matrix;
};

// Descending, nonnegative.
Eigen::VectorXd singular_values(const FiniteOperator& T);
double schatten_norm(const FiniteOperator& T, Exponent beta);
double schatten_norm_from_singular_values(std::span<const double> sigma, Exponent beta);

}  // namespace dispersia
