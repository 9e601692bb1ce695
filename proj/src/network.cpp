#include "torusnav/network.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {
std::atomic<std::uint64_t> g_gaussian_evaluations{0};
constexpr double kMinTotalActivity = 1e-12;
}  // namespace

double weight_from_distance2(double distance2, const GridConfig& cfg) noexcept {
  g_gaussian_evaluations.fetch_add(1, std::memory_order_relaxed);
  return cfg.intensity * std::exp(-distance2 / (cfg.sigma * cfg.sigma)) - cfg.shift_t;
}

std::uint64_t gaussian_evaluations() noexcept {
  return g_gaussian_evaluations.load(std::memory_order_relaxed);
}

void check_shift(Vec2 shift) {
  const double n = shift.norm();
  if (!(n < kMaxShift)) {
    throw Error(ErrorCode::Saturation, "network input |nu| = " + std::to_string(n) +
                                           " exceeds the per-step bound " +
                                           std::to_string(kMaxShift));
  }
}

WeightMatrix build_weights(const CellGrid& grid, const GridConfig& cfg, VelocityInput shift) {
  check_shift(shift.nu_r);
  const std::size_t n = grid.size();
  WeightMatrix w;
  w.cells = n;
  w.shift = shift.nu_r;
  w.values.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 shifted = grid.positions[i] + shift.nu_r;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = tri_displacement(shifted, grid.positions[j]).distance;
      w.values[i * n + j] = weight_from_distance2(d * d, cfg);
    }
  }
  return w;
}

GridState init_state(const GridConfig& cfg) {
  const std::size_t n = cfg.cell_count();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  GridState state;
  state.activity.resize(n);
  for (double& a : state.activity) a = dist(rng);
  return state;
}

double total_activity(const GridState& state) noexcept {
  double s = 0.0;
  for (double a : state.activity) s += a;
  return s;
}

std::vector<double> transfer(const GridState& state, const WeightMatrix& weights) {
  const std::size_t n = weights.cells;
  if (state.activity.size() != n) {
    throw Error(ErrorCode::Config, "activity has " + std::to_string(state.activity.size()) +
                                       " cells, weights expect " + std::to_string(n));
  }
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = state.activity[i];
    if (a == 0.0) continue;
    const double* row = &weights.values[i * n];
    for (std::size_t j = 0; j < n; ++j) b[j] += a * row[j];
  }
  return b;
}

GridState apply_dynamics(const GridState& state, std::span<const double> transfer,
                         const GridConfig& cfg) {
  const double total = total_activity(state);
  if (!(total >= kMinTotalActivity)) {
    throw Error(ErrorCode::Degenerate, "network activity died (total " +
                                           std::to_string(total) + " at step " +
                                           std::to_string(state.step) + ")");
  }
  GridState next;
  next.step = state.step + 1;
  next.activity.resize(transfer.size());
  for (std::size_t j = 0; j < transfer.size(); ++j) {
    const double b = transfer[j];
    const double a = std::max((1.0 - cfg.tau) * b + cfg.tau * (b / total), 0.0);
    if (!std::isfinite(a)) {
      throw Error(ErrorCode::Degenerate,
                  "non-finite activity at step " + std::to_string(next.step));
    }
    next.activity[j] = a;
  }
  return next;
}

GridState step(const GridState& state, const WeightMatrix& weights, const GridConfig& cfg) {
  const std::vector<double> b = transfer(state, weights);
  return apply_dynamics(state, b, cfg);
}

}  // namespace torusnav
