#pragma once

#include <cstddef>
#include <cstdint>

namespace torusnav {

// Hyperparameters of the grid-cell network and of the estimator loop.
//
// intensity/shift_t are scaled for a 900-cell sheet: the exact dynamics
// only have a bounded fixed point when the recurrent gain of the bump stays
// below 1 / (1 - tau), and that gain grows linearly with the cell count.
struct GridConfig {
  std::uint32_t n_x = 30;
  std::uint32_t n_y = 30;
  double tau = 0.95;
  double alpha = 1.0;
  double beta = 0.0;
  double intensity = 0.03;
  double shift_t = 0.005;
  double sigma = 0.24;
  double gamma = 1.0;
  double dt = 0.1;
  std::uint64_t seed = 1;

  // Zero-velocity warm-up before integration: stop once the sup-norm
  // activity change drops below settle_tolerance, or after settle_steps.
  std::uint32_t settle_steps = 4000;
  double settle_tolerance = 1e-10;

  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(n_x) * n_y;
  }
};

// Throws Error(ErrorCode::Config) naming the first offending field.
void validate(const GridConfig& cfg);

}  // namespace torusnav
