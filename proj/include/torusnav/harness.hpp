#pragma once

#include <cstdint>
#include <vector>

#include "torusnav/integrator.hpp"

namespace torusnav {

// Wave and sensor-noise model applied to the measured body velocity.
struct DisturbanceSpec {
  double wave_freq = 1.0;   // Hz
  double wave_amp = 0.02;   // m/s
  double wave_dir = 0.0;    // rad, world frame
  double noise_std = 0.01;  // m/s per body axis
  std::uint64_t seed = 1;
};

struct ErrorReport {
  double rmse = 0.0;
  double final_error = 0.0;
  double path_length = 0.0;
  double drift_per_meter = 0.0;
  double max_error = 0.0;
};

// Samples use the interval convention: sample k has t = (k + 1) * dt, its
// velocity and heading apply over (t - dt, t], and its truth is the
// position reached at t. Heading of the first sample is 0.

// Circle of `radius` centred at (0, radius), counterclockwise from the
// origin, pure surge at `speed`.
std::vector<TrajectorySample> gen_circle(double radius, double speed, double dt,
                                         std::uint32_t laps = 1);

// Counterclockwise rectangle [0, width] x [0, height] starting east from
// the origin, turning in place at the corners. Each edge is split into
// whole steps; truth closes exactly at the origin.
std::vector<TrajectorySample> gen_waypoint_rect(double width, double height, double speed,
                                                double dt);

std::vector<TrajectorySample> add_disturbance(std::vector<TrajectorySample> samples,
                                              const DisturbanceSpec& spec);

std::vector<PositionEstimate> dead_reckon(const std::vector<TrajectorySample>& samples);

// Linear Kalman filter over [position (world), velocity (body)] with the
// heading as a known input and a random-walk velocity model. Velocity is
// measured in the body frame, as a DVL reports it.
std::vector<PositionEstimate> kf_velocity_baseline(const std::vector<TrajectorySample>& samples,
                                                   double meas_noise, double process_noise);

std::vector<PositionEstimate> truth_positions(const std::vector<TrajectorySample>& samples);

ErrorReport compare(const std::vector<PositionEstimate>& est,
                    const std::vector<PositionEstimate>& truth);

}  // namespace torusnav
