#include "dispersia/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dispersia/error.hpp"

namespace dispersia {

void check_dimension(int d) {
  if (d < 1 || d > kMaxDimension)
    throw InvalidArgument("unsupported dimension d=" + std::to_string(d) +
                          " (supported: 1, 2, 3)");
}

LatticePoint::LatticePoint(std::initializer_list<std::int64_t> coords)
    : LatticePoint(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

LatticePoint::LatticePoint(std::span<const std::int64_t> coords) {
  check_dimension(static_cast<int>(coords.size()));
  dim_ = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), c_.begin());
}

std::int64_t LatticePoint::norm_sq() const noexcept {
  std::int64_t s = 0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

double LatticePoint::norm() const { return std::sqrt(static_cast<double>(norm_sq())); }

std::int64_t LatticePoint::max_abs() const noexcept {
  std::int64_t m = 0;
  for (int i = 0; i < dim_; ++i) m = std::max(m, c_[i] < 0 ? -c_[i] : c_[i]);
  return m;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r = *this;
  for (int i = 0; i < dim_; ++i) r.c_[i] = -r.c_[i];
  return r;
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw InvalidArgument("isqrt of a negative number");
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

namespace {

// Radius comparisons. Integral radii are compared exactly in integer
// arithmetic; other radii in floating point.
bool is_integral(double r) { return r >= 0 && r == std::floor(r) && r < 3.0e6; }

bool within(std::int64_t norm_sq, double r) {
  if (r < 0) return false;
  if (is_integral(r)) {
    const auto ri = static_cast<std::int64_t>(r);
    return norm_sq <= ri * ri;
  }
  // sqrt(R)^2 may land just below R; snap near-integers like on_sphere.
  const double r2 = r * r;
  const double nearest = std::round(r2);
  if (std::abs(r2 - nearest) <= 1e-9 * std::max(1.0, r2)) return norm_sq <= static_cast<std::int64_t>(nearest);
  return static_cast<double>(norm_sq) <= r2;
}

bool on_sphere(std::int64_t norm_sq, double r) {
  const double r2 = r * r;
  const double nearest = std::round(r2);
  if (std::abs(r2 - nearest) > 1e-9 * std::max(1.0, r2)) return false;
  return norm_sq == static_cast<std::int64_t>(nearest);
}

template <class Pred>
std::vector<LatticePoint> scan_cube(int d, std::int64_t n, Pred&& keep) {
  std::vector<LatticePoint> pts;
  std::array<std::int64_t, kMaxDimension> k{};
  const std::int64_t lo = -n, hi = n;
  auto emit = [&] {
    LatticePoint p(std::span<const std::int64_t>(k.data(), static_cast<std::size_t>(d)));
    if (keep(p)) pts.push_back(p);
  };
  for (k[0] = lo; k[0] <= hi; ++k[0]) {
    if (d == 1) { emit(); continue; }
    for (k[1] = lo; k[1] <= hi; ++k[1]) {
      if (d == 2) { emit(); continue; }
      for (k[2] = lo; k[2] <= hi; ++k[2]) emit();
    }
  }
  return pts;
}

}  // namespace

FrequencySet enumerate(int d, double N, Shape shape, double width) {
  check_dimension(d);
  if (!(N >= 0)) throw InvalidArgument("cutoff N must be >= 0");
  if (shape == Shape::annulus && !(width > 0))
    throw InvalidArgument("annulus width must be > 0");
  const auto n = static_cast<std::int64_t>(std::floor(N));
  if (n > (1 << 20)) throw InvalidArgument("cutoff N exceeds 2^20");

  FrequencySet set{d, N, shape, width, {}};
  switch (shape) {
    case Shape::cube:
      set.points = scan_cube(d, n, [](const LatticePoint&) { return true; });
      break;
    case Shape::ball:
      set.points = scan_cube(d, n, [N](const LatticePoint& p) { return within(p.norm_sq(), N); });
      break;
    case Shape::shell:
      set.points = scan_cube(d, n, [N](const LatticePoint& p) { return on_sphere(p.norm_sq(), N); });
      break;
    case Shape::annulus:
      set.points = scan_cube(d, n, [N, width](const LatticePoint& p) {
        const auto s = p.norm_sq();
        return within(s, N) && !within(s, N - width);
      });
      break;
  }
  return set;
}

std::uint64_t count_representations(int d, std::int64_t R) {
  check_dimension(d);
  if (R < 0) throw InvalidArgument("R must be >= 0");
  // Loop over the first d-1 coordinates; the last one is determined.
  auto last = [](std::int64_t rem) -> std::uint64_t {
    if (rem < 0) return 0;
    const std::int64_t t = isqrt(rem);
    if (t * t != rem) return 0;
    return t == 0 ? 1 : 2;
  };
  const std::int64_t s = isqrt(R);
  std::uint64_t count = 0;
  if (d == 1) return last(R);
  for (std::int64_t a = -s; a <= s; ++a) {
    const std::int64_t ra = R - a * a;
    if (d == 2) {
      count += last(ra);
      continue;
    }
    const std::int64_t sb = isqrt(ra);
    for (std::int64_t b = -sb; b <= sb; ++b) count += last(ra - b * b);
  }
  return count;
}

RepresentationAverage average_representation(int d, std::int64_t R) {
  check_dimension(d);
  if (R < 1) throw InvalidArgument("R must be >= 1");
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(R) + 1, 0);
  const std::int64_t s = isqrt(R);
  scan_cube(d, s, [&](const LatticePoint& p) {
    const auto n = p.norm_sq();
    if (n <= R) ++hist[static_cast<std::size_t>(n)];
    return false;
  });
  RepresentationAverage out;
  out.R = R;
  for (std::int64_t n = 1; n <= R; ++n) {
    out.total += hist[static_cast<std::size_t>(n)];
    out.max = std::max(out.max, hist[static_cast<std::size_t>(n)]);
  }
  return out;
}

FrequencySet shell_cluster(int d, double j, double c) {
  if (!(c > 0) || !(j > c)) throw InvalidArgument("shell_cluster requires j > c > 0");
  return enumerate(d, j, Shape::annulus, c);
}

}  // namespace dispersia
