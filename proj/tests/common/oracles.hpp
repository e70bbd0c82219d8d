#pragma once

// Brute-force reference implementations shared by the unit tests. Nothing
// here calls into the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

inline std::int64_t ball_count(int d, double N) {
  const auto n = static_cast<std::int64_t>(std::floor(N));
  const double r2 = N * N;
  std::int64_t count = 0;
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = (d >= 2 ? -n : 0); b <= (d >= 2 ? n : 0); ++b)
      for (std::int64_t c = (d >= 3 ? -n : 0); c <= (d >= 3 ? n : 0); ++c)
        if (static_cast<double>(a * a + b * b + c * c) <= r2 + 1e-9) ++count;
  return count;
}

inline std::int64_t reps(int d, std::int64_t R) {
  std::int64_t n = 0;
  while ((n + 1) * (n + 1) <= R) ++n;
  std::int64_t count = 0;
  for (std::int64_t a = -n; a <= n; ++a)
    for (std::int64_t b = (d >= 2 ? -n : 0); b <= (d >= 2 ? n : 0); ++b)
      for (std::int64_t c = (d >= 3 ? -n : 0); c <= (d >= 3 ? n : 0); ++c)
        if (a * a + b * b + c * c == R) ++count;
  return count;
}

// sum_k a_k e^{2 pi i (k.x + t |k|^alpha)}, k given as flat d-tuples.
inline std::complex<double> direct_sum(const std::vector<std::vector<std::int64_t>>& ks,
                                       const std::vector<std::complex<double>>& a, double t,
                                       const std::vector<double>& x, double alpha) {
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double kx = 0, k2 = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      kx += static_cast<double>(ks[i][j]) * x[j];
      k2 += static_cast<double>(ks[i][j] * ks[i][j]);
    }
    const double theta = kx + t * std::pow(std::sqrt(k2), alpha);
    s += a[i] * std::polar(1.0, 2 * std::numbers::pi * theta);
  }
  return s;
}

}  // namespace oracle
