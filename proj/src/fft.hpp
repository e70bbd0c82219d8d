#pragma once

#include <complex>
#include <span>

namespace dispersia::detail {

enum class FftDirection { forward, backward };

// Unnormalized d-dimensional complex DFT of size M^d (FFTW backend).
// backward: out[x] = sum_k in[k] e^{+2 pi i k.x / M}
// forward:  out[k] = sum_x in[x] e^{-2 pi i k.x / M}
// Planning is serialized internally; execute() is safe to call concurrently.
class FftPlan {
 public:
  FftPlan(int d, int M, FftDirection dir);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  std::size_t size() const noexcept { return size_; }

 private:
  void* plan_ = nullptr;
  std::size_t size_ = 0;
};

// Index of frequency k (any integer) in an FFT layout of length M.
inline int wrap_index(long long k, int M) {
  long long r = k % M;
  return static_cast<int>(r < 0 ? r + M : r);
}

// Signed frequency represented by FFT index i in [0, M): in [-M/2, M/2).
inline int signed_frequency(int i, int M) { return i < (M + 1) / 2 ? i : i - M; }

}  // namespace dispersia::detail
