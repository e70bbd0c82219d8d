#include "dispersia/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dispersia/error.hpp"

namespace dispersia {

Exponent::Exponent(double value) : value_(value), infinite_(false) {
  if (std::isinf(value) && value > 0) {
    infinite_ = true;
    return;
  }
  if (!(value > 0)) throw InvalidArgument("exponent must be positive, got " + std::to_string(value));
}

double Exponent::value() const {
  if (infinite_) throw InvalidArgument("finite exponent required");
  return value_;
}

Exponent Exponent::conjugate() const {
  if (infinite_) return Exponent(1.0);
  if (value_ < 1.0) throw InvalidArgument("conjugate exponent requires p >= 1");
  if (value_ == 1.0) return infinity();
  return Exponent(value_ / (value_ - 1.0));
}

Exponent Exponent::half() const { return scaled(0.5); }

Exponent Exponent::scaled(double factor) const {
  if (infinite_) return infinity();
  return Exponent(value_ * factor);
}

MixedNormSpec MixedNormSpec::for_grid(const SpaceTimeGrid& grid, Exponent p, Exponent q, double t_start,
                                      double t_end) {
  return {p, q, t_start, t_end, grid.times.size(), grid.space_points};
}

namespace {

void check_exponent(const Exponent& e, const char* name) {
  if (!e.is_infinite() && e.value() < 1.0)
    throw InvalidArgument(std::string("mixed norm exponent ") + name + " must be >= 1");
}

}  // namespace

double discrete_lebesgue_norm(std::span<const double> v, Exponent e, double cell) {
  if (e.is_infinite()) {
    double m = 0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  const double p = e.value();
  double peak = 0;
  for (double x : v) peak = std::max(peak, x);
  if (peak == 0) return 0.0;
  double s = 0;
  for (double x : v) s += std::pow(x / peak, p);
  return peak * std::pow(s * cell, 1.0 / p);
}

namespace {

double lebesgue(std::span<const double> v, const Exponent& e, double cell) {
  return discrete_lebesgue_norm(v, e, cell);
}

double mixed_from_moduli(const SpaceTimeGrid& grid, std::span<const double> moduli, const MixedNormSpec& spec) {
  check_exponent(spec.p, "p");
  check_exponent(spec.q, "q");
  if (grid.times.size() != spec.time_count || grid.space_points != spec.space_count)
    throw InvalidArgument("field grid (" + std::to_string(grid.times.size()) + " x " +
                          std::to_string(grid.space_points) + ") does not match norm resolution (" +
                          std::to_string(spec.time_count) + " x " + std::to_string(spec.space_count) + ")");
  const std::size_t slice = grid.points_per_slice();
  const double dx = 1.0 / static_cast<double>(slice);
  const double dt = std::abs(spec.t_end - spec.t_start) / static_cast<double>(spec.time_count);
  std::vector<double> inner(spec.time_count);
  for (std::size_t t = 0; t < spec.time_count; ++t)
    inner[t] = lebesgue(moduli.subspan(t * slice, slice), spec.q, dx);
  return lebesgue(inner, spec.p, dt);
}

}  // namespace

double mixed_norm(const DensityField& field, const MixedNormSpec& spec) {
  std::vector<double> m(field.values.size());
  std::transform(field.values.begin(), field.values.end(), m.begin(), [](double v) { return std::abs(v); });
  return mixed_from_moduli(field.grid, m, spec);
}

double mixed_norm(const SpaceTimeField& field, const MixedNormSpec& spec) {
  std::vector<double> m(field.values.size());
  std::transform(field.values.begin(), field.values.end(), m.begin(), [](Complex v) { return std::abs(v); });
  return mixed_from_moduli(field.grid, m, spec);
}

double ell_norm(std::span<const double> v, Exponent beta) {
  std::vector<double> m(v.size());
  std::transform(v.begin(), v.end(), m.begin(), [](double x) { return std::abs(x); });
  return lebesgue(m, beta, 1.0);
}

Eigen::MatrixXcd gram(const OrthonormalSystem& system) {
  system.validate();
  const auto n = static_cast<Eigen::Index>(system.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      G(i, j) = inner_product(system.states[static_cast<std::size_t>(i)], system.states[static_cast<std::size_t>(j)]);
  return G;
}

bool is_orthonormal(const OrthonormalSystem& system, double tol) {
  const auto G = gram(system);
  const auto deviation = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs();
  return G.size() == 0 || deviation.maxCoeff() <= tol;
}

Eigen::VectorXd singular_values(const FiniteOperator& T) {
  if (T.matrix.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix);
  return svd.singularValues();
}

double schatten_norm_from_singular_values(std::span<const double> sigma, Exponent beta) {
  if (!beta.is_infinite() && beta.value() < 1.0) throw InvalidArgument("Schatten exponent must be >= 1");
  return ell_norm(sigma, beta);
}

double schatten_norm(const FiniteOperator& T, Exponent beta) {
  const Eigen::VectorXd s = singular_values(T);
  return schatten_norm_from_singular_values(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())), beta);
}

}  // namespace dispersia
