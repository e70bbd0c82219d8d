#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace dispersia {

inline constexpr int kMaxDimension = 3;

// Throws InvalidArgument unless 1 <= d <= 3.
void check_dimension(int d);

// Frequency index k in Z^d. Unused trailing coordinates are zero, so the
// defaulted ordering is lexicographic for points of equal dimension.
class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(std::initializer_list<std::int64_t> coords);
  explicit LatticePoint(std::span<const std::int64_t> coords);

  int dim() const noexcept { return dim_; }
  std::int64_t operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  std::span<const std::int64_t> coords() const noexcept {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  // Exact for |k_i| <= 2^20.
  std::int64_t norm_sq() const noexcept;
  double norm() const;
  std::int64_t max_abs() const noexcept;

  LatticePoint operator-() const;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  std::array<std::int64_t, kMaxDimension> c_{};
  int dim_ = 0;
};

enum class Shape {
  ball,     // |k| <= N
  cube,     // k in [-N, N]^d
  shell,    // |k| = N
  annulus,  // |k| in (N - width, N]
};

struct FrequencySet {
  int dimension = 1;
  double cutoff = 0.0;
  Shape shape = Shape::ball;
  double width = 1.0;  // annulus only
  std::vector<LatticePoint> points;  // lexicographic, unique

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

FrequencySet enumerate(int d, double N, Shape shape, double width = 1.0);

// r_d(R) = #{k in Z^d : |k|^2 = R}.
std::uint64_t count_representations(int d, std::int64_t R);

struct RepresentationAverage {
  std::int64_t R = 0;
  std::uint64_t total = 0;  // sum_{1 <= n <= R} r_d(n)
  std::uint64_t max = 0;    // max_{1 <= n <= R} r_d(n)
  double average() const noexcept { return static_cast<double>(total) / static_cast<double>(R); }
};

RepresentationAverage average_representation(int d, std::int64_t R);

// All k with |k| in (j - c, j].
FrequencySet shell_cluster(int d, double j, double c = 1.0);

// Largest s with s*s <= n, n >= 0.
std::int64_t isqrt(std::int64_t n);

}  // namespace dispersia
