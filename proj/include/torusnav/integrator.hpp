#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "torusnav/kernel.hpp"
#include "torusnav/network.hpp"

namespace torusnav {

// Decoded bump location on the sheet. Each axis carries the resultant
// length of the population vector used to decode it, in [0, 1].
struct BumpPhase {
  double phase_x = 0.0;  // [0, 1)
  double phase_y = 0.0;  // [0, sqrt3/2)
  double resultant_x = 0.0;
  double resultant_y = 0.0;
};

struct PositionEstimate {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double t = 0.0;  // s
};

struct TrajectorySample {
  double t = 0.0;
  double vx_body = 0.0;
  double vy_body = 0.0;
  double psi = 0.0;
  std::optional<double> truth_x;
  std::optional<double> truth_y;
};

// Counterclockwise-positive rotation of a body-frame vector by heading psi.
Vec2 body_to_world(Vec2 v_body, double psi) noexcept;

// nu = alpha * R(beta) * v * dt. Throws Error(Saturation) naming
// `sample_time` when |nu| >= kMaxShift.
VelocityInput modulate(Vec2 v_world, const GridConfig& cfg, double sample_time = 0.0);

// Minimum resultant on either axis below which the activity counts as
// bump-free.
inline constexpr double kMinResultant = 0.05;

// Activity-weighted circular means taken along the two reciprocal
// directions of the twisted lattice, b1 = (1, -1/sqrt3) and
// b2 = (0, 2/sqrt3). Both are single-valued on the twisted torus, so a
// bump straddling an edge decodes to one location. b2 is the plain
// circular mean in y with period sqrt3/2.
BumpPhase bump_phase(const GridState& state, const CellGrid& grid);

// Nearest-image displacement from prev to curr on the twisted torus.
Vec2 phase_delta(const BumpPhase& prev, const BumpPhase& curr, const CellGrid& grid) noexcept;

PositionEstimate update_position(const PositionEstimate& pos, Vec2 delta,
                                 const GridConfig& cfg) noexcept;

// Grid-cell network plus the decoded position it drives. One instance per
// trajectory; advance() is the per-sample loop body.
class PathIntegrator {
 public:
  explicit PathIntegrator(const GridConfig& cfg);

  // Zero-velocity steps until the largest per-cell change falls below
  // cfg.settle_tolerance or cfg.settle_steps are used. Returns the number
  // of steps taken and resets the decoded reference phase.
  std::size_t settle();

  // Steps the network with the given input and returns the decoded
  // displacement in sheet units.
  Vec2 step_network(VelocityInput input, bool naive = false);

  PositionEstimate advance(const TrajectorySample& sample);

  const GridConfig& config() const noexcept { return cfg_; }
  const CellGrid& grid() const noexcept { return grid_; }
  const GridState& state() const noexcept { return state_; }
  const BumpPhase& phase() const noexcept { return phase_; }
  const PositionEstimate& position() const noexcept { return position_; }

 private:
  GridConfig cfg_;
  CellGrid grid_;
  GridState state_;
  RelativeKernel rest_kernel_;
  BumpPhase phase_;
  bool phase_valid_ = false;
  PositionEstimate position_;
};

using StepObserver = std::function<void(const PathIntegrator&, std::size_t sample_index)>;

// init -> settle -> per sample: rotate, modulate, shift kernel, step,
// decode, accumulate. Emits one estimate per sample, stamped with the
// sample time. Errors carry the failing sample index in their message.
std::vector<PositionEstimate> integrate_trajectory(const std::vector<TrajectorySample>& samples,
                                                   const GridConfig& cfg,
                                                   const StepObserver& observer = {});

// Drives a straight constant-velocity run with gamma = 1 and returns
// path length over decoded displacement.
double calibrate_gamma(const GridConfig& cfg);

}  // namespace torusnav
