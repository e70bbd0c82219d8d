#pragma once

#include <vector>

#include "dispersia/fourier_state.hpp"

namespace dispersia {

// Weighted family (nu_j, f_j). Weights are real and may be negative.
struct OrthonormalSystem {
  std::vector<double> weights;
  std::vector<FourierState> states;

  std::size_t size() const noexcept { return states.size(); }
  int dimension() const;
  // Throws InvalidArgument on a size mismatch or mixed dimensions.
  void validate() const;
};

}  // namespace dispersia
