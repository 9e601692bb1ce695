#pragma once

#include <vector>

#include "torusnav/network.hpp"

namespace torusnav {

// Weights of a translation-invariant sheet, one value per index offset.
//
// values[dy * n_x + dx] is the weight from a cell at offset (dx, dy) to the
// target, with dx in [0, n_x) and dy in [0, n_y). Offsets are taken on the
// twisted lattice: a source row below the target is reached by wrapping
// up one full sheet height, which also moves it half a row (n_x / 2
// columns) sideways.
struct RelativeKernel {
  std::uint32_t n_x = 0;
  std::uint32_t n_y = 0;
  std::vector<double> values;
  Vec2 shift;

  double at(std::uint32_t dx, std::uint32_t dy) const noexcept {
    return values[static_cast<std::size_t>(dy) * n_x + dx];
  }
};

// Exactly n_x * n_y Gaussian evaluations.
RelativeKernel build_relative_kernel(const CellGrid& grid, const GridConfig& cfg,
                                     VelocityInput shift);

// Twisted-lattice offset of `source` relative to `target`, as indexed in
// RelativeKernel::values.
std::size_t kernel_offset(const CellGrid& grid, std::size_t source, std::size_t target) noexcept;

// B_j = sum_i A_i k(offset(i, j)); same values as transfer() on the dense
// matrix up to summation order.
std::vector<double> apply_kernel(const GridState& state, const RelativeKernel& kernel,
                                 const CellGrid& grid);

GridState step(const GridState& state, const RelativeKernel& kernel, const CellGrid& grid,
               const GridConfig& cfg);

}  // namespace torusnav
