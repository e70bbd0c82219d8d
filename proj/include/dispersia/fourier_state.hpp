#pragma once

#include <complex>
#include <map>

#include "dispersia/lattice.hpp"
#include "json.hpp"

namespace dispersia {

using Complex = std::complex<double>;

// A trigonometric polynomial on T^d, sum_k a_k e^{2 pi i k.x}, stored sparsely.
// Exact zeros are never stored.
class FourierState {
 public:
  using Entries = std::map<LatticePoint, Complex>;

  explicit FourierState(int d = 1);

  // Unit-amplitude superposition of every mode in `modes`.
  static FourierState from_modes(const FrequencySet& modes, Complex amplitude = 1.0);
  static FourierState mode(const LatticePoint& k, Complex amplitude = 1.0);

  int dimension() const noexcept { return d_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Entries& entries() const noexcept { return entries_; }

  void set(const LatticePoint& k, Complex a);
  void add(const LatticePoint& k, Complex a);
  Complex coefficient(const LatticePoint& k) const;

  double norm_sq() const;
  double norm() const;
  // max_i |k_i| over the support, 0 when empty.
  std::int64_t max_abs_frequency() const;
  std::int64_t max_norm_sq() const;

  FourierState& operator*=(Complex c);
  friend bool operator==(const FourierState&, const FourierState&) = default;

 private:
  void check_point(const LatticePoint& k) const;

  int d_;
  Entries entries_;
};

// ⟨f, g⟩ = sum_k a_k conj(b_k).
Complex inner_product(const FourierState& f, const FourierState& g);

// {"d": d, "entries": [[[k...], re, im], ...]} sorted by k.
nlohmann::json to_json(const FourierState& f);
FourierState fourier_state_from_json(const nlohmann::json& j);

}  // namespace dispersia
