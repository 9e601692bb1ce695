#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torusnav/config.hpp"
#include "torusnav/topology.hpp"

namespace torusnav {

// Per-step bump displacement in sheet units. Kept below a quarter period
// so nearest-image phase unwrapping stays unambiguous.
inline constexpr double kMaxShift = 0.25;

struct VelocityInput {
  Vec2 nu_r;
};

struct GridState {
  std::vector<double> activity;
  std::uint64_t step = 0;
};

// Dense weights, values[i * N + j] = w_ij (from cell i to cell j).
struct WeightMatrix {
  std::size_t cells = 0;
  std::vector<double> values;
  Vec2 shift;

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return values[i * cells + j];
  }
};

// I * exp(-d^2 / sigma^2) - T for a squared tri-distance d^2. Every call
// bumps the counter reported by gaussian_evaluations().
double weight_from_distance2(double distance2, const GridConfig& cfg) noexcept;
std::uint64_t gaussian_evaluations() noexcept;

// Throws Error(Saturation) when |shift| >= kMaxShift.
void check_shift(Vec2 shift);

WeightMatrix build_weights(const CellGrid& grid, const GridConfig& cfg, VelocityInput shift);

GridState init_state(const GridConfig& cfg);

double total_activity(const GridState& state) noexcept;

// B_j = sum_i A_i w_ij.
std::vector<double> transfer(const GridState& state, const WeightMatrix& weights);

// Applies the stabilized, rectified update given this step's transfer
// values; the normalizer is the total activity before the update. Throws
// Error(Degenerate) if that total is below 1e-12.
GridState apply_dynamics(const GridState& state, std::span<const double> transfer,
                         const GridConfig& cfg);

GridState step(const GridState& state, const WeightMatrix& weights, const GridConfig& cfg);

}  // namespace torusnav
