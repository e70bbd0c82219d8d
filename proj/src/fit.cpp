#include <cmath>
#include <string>

#include "dispersia/error.hpp"
#include "dispersia/experiments.hpp"

namespace dispersia {

ExponentFit fit_exponent(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw InvalidArgument("exponent fit needs at least 3 pairs");
  double sx = 0, sy = 0;
  for (const auto& [N, v] : pairs) {
    if (!(N > 0)) throw InvalidArgument("exponent fit: cutoff must be positive, got " + std::to_string(N));
    if (!(v > 0)) throw InvalidArgument("exponent fit: value must be positive, got " + std::to_string(v));
    sx += std::log(N);
    sy += std::log(v);
  }
  const auto n = static_cast<double>(pairs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [N, v] : pairs) {
    const double dx = std::log(N) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0) throw InvalidArgument("exponent fit: cutoffs must not all be equal");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [N, v] : pairs) fit.max_residual = std::max(fit.max_residual, std::abs(fit_residual(fit, N, v)));
  return fit;
}

double fit_residual(const ExponentFit& fit, double N, double value) {
  return std::log(value) - (fit.slope * std::log(N) + fit.intercept);
}

std::vector<std::pair<double, double>> ScalingReport::pairs() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) out.emplace_back(cutoffs[i], values[i]);
  return out;
}

}  // namespace dispersia
