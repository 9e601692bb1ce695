#include "torusnav/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvSqrt3 = 1.0 / std::numbers::sqrt3;

// Maps an angle to a fraction of a turn in [0, 1).
double turn_fraction(double angle) noexcept {
  double u = angle / kTwoPi;
  u -= std::floor(u);
  return u >= 1.0 ? 0.0 : u;
}

double max_abs_change(const std::vector<double>& a, const std::vector<double>& b) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

Vec2 body_to_world(Vec2 v_body, double psi) noexcept {
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  return {c * v_body.x - s * v_body.y, s * v_body.x + c * v_body.y};
}

VelocityInput modulate(Vec2 v_world, const GridConfig& cfg, double sample_time) {
  const Vec2 rotated = body_to_world(v_world, cfg.beta);
  const Vec2 nu = (cfg.alpha * cfg.dt) * rotated;
  if (!(nu.norm() < kMaxShift)) {
    std::ostringstream os;
    os << "velocity at t=" << sample_time << " s moves the bump " << nu.norm()
       << " sheet units per step (limit " << kMaxShift << ")";
    throw Error(ErrorCode::Saturation, os.str());
  }
  return {nu};
}

BumpPhase bump_phase(const GridState& state, const CellGrid& grid) {
  const double total = total_activity(state);
  if (!(total >= 1e-12)) {
    throw Error(ErrorCode::Degenerate, "cannot decode a bump from zero activity");
  }
  std::complex<double> z1{0.0, 0.0};
  std::complex<double> z2{0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = state.activity[i];
    if (a == 0.0) continue;
    const Vec2 c = grid.positions[i];
    z1 += std::polar(a, kTwoPi * (c.x - c.y * kInvSqrt3));
    z2 += std::polar(a, kTwoPi * (2.0 * kInvSqrt3) * c.y);
  }
  BumpPhase p;
  p.resultant_x = std::min(std::abs(z1) / total, 1.0);
  p.resultant_y = std::min(std::abs(z2) / total, 1.0);
  if (p.resultant_x < kMinResultant || p.resultant_y < kMinResultant) {
    std::ostringstream os;
    os << "activity too diffuse to decode (resultants " << p.resultant_x << ", "
       << p.resultant_y << ")";
    throw Error(ErrorCode::NoBump, os.str());
  }
  // Lattice coordinates u1, u2 along (1, 0) and (0.5, sqrt3/2).
  const double u1 = turn_fraction(std::arg(z1));
  const double u2 = turn_fraction(std::arg(z2));
  double x = u1 + 0.5 * u2;
  if (x >= 1.0) x -= 1.0;
  p.phase_x = x;
  p.phase_y = grid.period_y * u2;
  return p;
}

Vec2 phase_delta(const BumpPhase& prev, const BumpPhase& curr, const CellGrid&) noexcept {
  return tri_displacement({curr.phase_x, curr.phase_y}, {prev.phase_x, prev.phase_y})
      .displacement;
}

PositionEstimate update_position(const PositionEstimate& pos, Vec2 delta,
                                 const GridConfig& cfg) noexcept {
  return {pos.x + cfg.gamma * delta.x, pos.y + cfg.gamma * delta.y, pos.t + cfg.dt};
}

PathIntegrator::PathIntegrator(const GridConfig& cfg) : cfg_(cfg) {
  validate(cfg_);
  grid_ = build_topology(cfg_.n_x, cfg_.n_y);
  state_ = init_state(cfg_);
  rest_kernel_ = build_relative_kernel(grid_, cfg_, VelocityInput{});
}

std::size_t PathIntegrator::settle() {
  std::size_t steps = 0;
  while (steps < cfg_.settle_steps) {
    GridState next = step(state_, rest_kernel_, grid_, cfg_);
    const double change = max_abs_change(next.activity, state_.activity);
    state_ = std::move(next);
    ++steps;
    if (change < cfg_.settle_tolerance) break;
  }
  phase_ = bump_phase(state_, grid_);
  phase_valid_ = true;
  return steps;
}

Vec2 PathIntegrator::step_network(VelocityInput input, bool naive) {
  if (!phase_valid_) {
    phase_ = bump_phase(state_, grid_);
    phase_valid_ = true;
  }
  if (naive) {
    state_ = step(state_, build_weights(grid_, cfg_, input), cfg_);
  } else {
    state_ = step(state_, build_relative_kernel(grid_, cfg_, input), grid_, cfg_);
  }
  const BumpPhase next = bump_phase(state_, grid_);
  const Vec2 delta = phase_delta(phase_, next, grid_);
  phase_ = next;
  return delta;
}

PositionEstimate PathIntegrator::advance(const TrajectorySample& sample) {
  const Vec2 v_world = body_to_world({sample.vx_body, sample.vy_body}, sample.psi);
  const VelocityInput input = modulate(v_world, cfg_, sample.t);
  const Vec2 delta = step_network(input);
  position_ = update_position(position_, delta, cfg_);
  position_.t = sample.t;
  return position_;
}

std::vector<PositionEstimate> integrate_trajectory(const std::vector<TrajectorySample>& samples,
                                                   const GridConfig& cfg,
                                                   const StepObserver& observer) {
  for (std::size_t k = 1; k < samples.size(); ++k) {
    if (!(samples[k].t > samples[k - 1].t)) {
      throw Error(ErrorCode::Config,
                  "sample " + std::to_string(k) + ": time is not strictly increasing");
    }
  }
  PathIntegrator integrator(cfg);
  integrator.settle();
  std::vector<PositionEstimate> out;
  out.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    try {
      out.push_back(integrator.advance(samples[k]));
    } catch (const Error& e) {
      throw Error(e.code(), "sample " + std::to_string(k) + ": " + e.what());
    }
    if (observer) observer(integrator, k);
  }
  return out;
}

double calibrate_gamma(const GridConfig& cfg) {
  constexpr std::size_t kSteps = 200;
  constexpr double kShiftPerStep = 0.01;
  GridConfig unit = cfg;
  unit.gamma = 1.0;
  const double speed = kShiftPerStep / (cfg.alpha * cfg.dt);

  std::vector<TrajectorySample> run(kSteps);
  for (std::size_t k = 0; k < kSteps; ++k) {
    run[k].t = static_cast<double>(k + 1) * cfg.dt;
    run[k].vx_body = speed;
  }
  std::vector<PositionEstimate> est;
  try {
    est = integrate_trajectory(run, unit);
  } catch (const Error& e) {
    throw Error(ErrorCode::Calibration, std::string("calibration run failed: ") + e.what());
  }
  const double decoded = std::hypot(est.back().x, est.back().y);
  const double length = speed * cfg.dt * static_cast<double>(kSteps);
  if (!(decoded > 1e-12) || !std::isfinite(decoded)) {
    throw Error(ErrorCode::Calibration, "bump did not move during calibration");
  }
  return length / decoded;
}

}  // namespace torusnav
