#include "torusnav/kernel.hpp"

#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

RelativeKernel build_relative_kernel(const CellGrid& grid, const GridConfig& cfg,
                                     VelocityInput shift) {
  check_shift(shift.nu_r);
  if (grid.n_x % 2 != 0) {
    throw Error(ErrorCode::Config, "relative kernel needs an even n_x, got " +
                                       std::to_string(grid.n_x));
  }
  RelativeKernel k;
  k.n_x = grid.n_x;
  k.n_y = grid.n_y;
  k.shift = shift.nu_r;
  k.values.resize(grid.size());
  for (std::uint32_t dy = 0; dy < grid.n_y; ++dy) {
    for (std::uint32_t dx = 0; dx < grid.n_x; ++dx) {
      const Vec2 offset{static_cast<double>(dx) / grid.n_x,
                        kSheetHeight * static_cast<double>(dy) / grid.n_y};
      const double d = tri_displacement(offset + shift.nu_r, Vec2{}).distance;
      k.values[static_cast<std::size_t>(dy) * grid.n_x + dx] = weight_from_distance2(d * d, cfg);
    }
  }
  return k;
}

std::size_t kernel_offset(const CellGrid& grid, std::size_t source, std::size_t target) noexcept {
  const long nx = grid.n_x;
  const long ny = grid.n_y;
  const long sx = static_cast<long>(source) % nx, sy = static_cast<long>(source) / nx;
  const long tx = static_cast<long>(target) % nx, ty = static_cast<long>(target) / nx;
  long dy = sy - ty;
  long dx = sx - tx;
  if (dy < 0) {
    dy += ny;
    dx += nx / 2;
  }
  dx = ((dx % nx) + nx) % nx;
  return static_cast<std::size_t>(dy * nx + dx);
}

std::vector<double> apply_kernel(const GridState& state, const RelativeKernel& kernel,
                                 const CellGrid& grid) {
  const std::size_t nx = grid.n_x;
  const std::size_t ny = grid.n_y;
  if (kernel.n_x != grid.n_x || kernel.n_y != grid.n_y || state.activity.size() != grid.size()) {
    throw Error(ErrorCode::Config, "kernel, state and grid dimensions disagree");
  }

  // rev[dy][m] = k(-m mod nx, dy), stored twice back to back. For a source
  // column sx the weights to target columns tx = 0..nx-1 are then one
  // contiguous slice, so each active source adds a scaled slice.
  std::vector<double> rev(2 * nx * ny);
  for (std::size_t dy = 0; dy < ny; ++dy) {
    const double* src = &kernel.values[dy * nx];
    double* dst = &rev[2 * nx * dy];
    for (std::size_t m = 0; m < nx; ++m) dst[m] = dst[m + nx] = src[(nx - m) % nx];
  }

  const std::size_t half = nx / 2;
  std::vector<double> b(nx * ny, 0.0);
  for (std::size_t sy = 0; sy < ny; ++sy) {
    const double* a = &state.activity[sy * nx];
    for (std::size_t ty = 0; ty < ny; ++ty) {
      std::size_t dy = 0;
      std::size_t twist = 0;
      if (sy >= ty) {
        dy = sy - ty;
      } else {
        dy = sy + ny - ty;
        twist = half;
      }
      const double* krow = &rev[2 * nx * dy];
      double* out = &b[ty * nx];
      for (std::size_t sx = 0; sx < nx; ++sx) {
        const double as = a[sx];
        if (as == 0.0) continue;
        // dx = (sx - tx + twist) mod nx  =>  rev index (tx - sx - twist) mod nx.
        const double* k = krow + (2 * nx - sx - twist) % nx;
        for (std::size_t tx = 0; tx < nx; ++tx) out[tx] += as * k[tx];
      }
    }
  }
  return b;
}

GridState step(const GridState& state, const RelativeKernel& kernel, const CellGrid& grid,
               const GridConfig& cfg) {
  const std::vector<double> b = apply_kernel(state, kernel, grid);
  return apply_dynamics(state, b, cfg);
}

}  // namespace torusnav
