#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace dispersia::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(int d, int M, FftDirection dir) {
  std::vector<int> n(static_cast<std::size_t>(d), M);
  size_ = 1;
  for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(M);
  std::vector<std::complex<double>> scratch_in(size_), scratch_out(size_);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft(d, n.data(), reinterpret_cast<fftw_complex*>(scratch_in.data()),
                        reinterpret_cast<fftw_complex*>(scratch_out.data()),
                        dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan_) throw std::runtime_error("FFTW planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) const {
  if (in.size() != size_ || out.size() != size_) throw std::logic_error("FFT buffer size mismatch");
  // Out-of-place c2c transforms preserve their input.
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace dispersia::detail
