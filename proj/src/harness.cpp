#include "torusnav/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {

void check_motion(double speed, double dt) {
  if (!(speed > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::Config, "speed and dt must be positive");
  }
  if (!(speed * dt < kMaxShift)) {
    throw Error(ErrorCode::Config, "speed * dt = " + std::to_string(speed * dt) +
                                       " would saturate the network input");
  }
}

std::size_t whole_steps(double length, double step) {
  return static_cast<std::size_t>(std::ceil(length / step - 1e-9));
}

// Interval length for sample k inferred from the timestamps.
double interval(const std::vector<TrajectorySample>& s, std::size_t k) {
  if (k > 0) return s[k].t - s[k - 1].t;
  if (s[0].t > 0.0) return s[0].t;
  return s.size() > 1 ? s[1].t - s[0].t : 0.0;
}

}  // namespace

std::vector<TrajectorySample> gen_circle(double radius, double speed, double dt,
                                         std::uint32_t laps) {
  if (!(radius > 0.0)) throw Error(ErrorCode::Config, "radius must be positive");
  if (laps == 0) throw Error(ErrorCode::Config, "laps must be >= 1");
  check_motion(speed, dt);
  const double arc = speed * dt;
  const std::size_t n = whole_steps(laps * 2.0 * std::numbers::pi * radius, arc);
  std::vector<TrajectorySample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = static_cast<double>(k + 1) * arc / radius;
    TrajectorySample& s = out[k];
    s.t = static_cast<double>(k + 1) * dt;
    s.vx_body = speed;
    s.vy_body = 0.0;
    s.psi = static_cast<double>(k) * arc / radius;
    s.truth_x = radius * std::sin(theta);
    s.truth_y = radius * (1.0 - std::cos(theta));
  }
  return out;
}

std::vector<TrajectorySample> gen_waypoint_rect(double width, double height, double speed,
                                                double dt) {
  if (!(width > 0.0) || !(height > 0.0)) {
    throw Error(ErrorCode::Config, "rectangle dimensions must be positive");
  }
  check_motion(speed, dt);
  const std::array<Vec2, 5> corners{{{0, 0}, {width, 0}, {width, height}, {0, height}, {0, 0}}};
  const std::array<double, 4> headings{0.0, std::numbers::pi / 2, std::numbers::pi,
                                       3 * std::numbers::pi / 2};
  std::vector<TrajectorySample> out;
  std::size_t k = 0;
  for (std::size_t e = 0; e < 4; ++e) {
    const Vec2 from = corners[e];
    const Vec2 to = corners[e + 1];
    const double length = (to - from).norm();
    const std::size_t m = whole_steps(length, speed * dt);
    const double edge_speed = length / (static_cast<double>(m) * dt);
    for (std::size_t j = 1; j <= m; ++j, ++k) {
      const double f = static_cast<double>(j) / static_cast<double>(m);
      const Vec2 p = j == m ? to : from + f * (to - from);
      TrajectorySample s;
      s.t = static_cast<double>(k + 1) * dt;
      s.vx_body = edge_speed;
      s.psi = headings[e];
      s.truth_x = p.x;
      s.truth_y = p.y;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<TrajectorySample> add_disturbance(std::vector<TrajectorySample> samples,
                                              const DisturbanceSpec& spec) {
  if (!(spec.wave_freq > 0.0) || !(spec.wave_amp >= 0.0) || !(spec.noise_std >= 0.0)) {
    throw Error(ErrorCode::Config, "disturbance needs wave_freq > 0 and non-negative amplitudes");
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, spec.noise_std);
  const Vec2 wave_axis{std::cos(spec.wave_dir), std::sin(spec.wave_dir)};
  for (TrajectorySample& s : samples) {
    if (spec.wave_amp > 0.0) {
      const double w = spec.wave_amp * std::sin(2.0 * std::numbers::pi * spec.wave_freq * s.t);
      const Vec2 in_body = body_to_world(w * wave_axis, -s.psi);
      s.vx_body += in_body.x;
      s.vy_body += in_body.y;
    }
    if (spec.noise_std > 0.0) {
      s.vx_body += noise(rng);
      s.vy_body += noise(rng);
    }
  }
  return samples;
}

std::vector<PositionEstimate> dead_reckon(const std::vector<TrajectorySample>& samples) {
  std::vector<PositionEstimate> out;
  out.reserve(samples.size());
  Vec2 p;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const TrajectorySample& s = samples[k];
    p = p + interval(samples, k) * body_to_world({s.vx_body, s.vy_body}, s.psi);
    out.push_back({p.x, p.y, s.t});
  }
  return out;
}

std::vector<PositionEstimate> kf_velocity_baseline(const std::vector<TrajectorySample>& samples,
                                                   double meas_noise, double process_noise) {
  if (!(meas_noise > 0.0) || !(process_noise > 0.0)) {
    throw Error(ErrorCode::Config, "Kalman noise parameters must be positive");
  }
  using Mat4 = Eigen::Matrix4d;
  using Vec4 = Eigen::Vector4d;

  // State [px, py, u, v]; an uninformative velocity prior lets the first
  // measurement set the speed.
  Vec4 x = Vec4::Zero();
  Mat4 P = Mat4::Zero();
  P(2, 2) = P(3, 3) = 1e2;
  Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
  H(0, 2) = H(1, 3) = 1.0;
  const Eigen::Matrix2d R = meas_noise * Eigen::Matrix2d::Identity();

  std::vector<PositionEstimate> out;
  out.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const TrajectorySample& s = samples[k];
    const double dt = interval(samples, k);
    Eigen::Matrix2d rot;
    rot << std::cos(s.psi), -std::sin(s.psi), std::sin(s.psi), std::cos(s.psi);

    // The interval's velocity is the random-walked one, so the noise
    // enters position through the same rotation.
    Mat4 F = Mat4::Identity();
    F.block<2, 2>(0, 2) = dt * rot;
    Eigen::Matrix<double, 4, 2> G;
    G.block<2, 2>(0, 0) = dt * rot;
    G.block<2, 2>(2, 0) = Eigen::Matrix2d::Identity();
    x = F * x;
    P = F * P * F.transpose() + (process_noise * dt) * G * G.transpose();

    const Eigen::Vector2d z(s.vx_body, s.vy_body);
    const Eigen::Matrix2d S = H * P * H.transpose() + R;
    const Eigen::Matrix<double, 4, 2> K = P * H.transpose() * S.inverse();
    x += K * (z - H * x);
    P = (Mat4::Identity() - K * H) * P;
    P = 0.5 * (P + P.transpose());

    out.push_back({x(0), x(1), s.t});
  }
  return out;
}

std::vector<PositionEstimate> truth_positions(const std::vector<TrajectorySample>& samples) {
  std::vector<PositionEstimate> out;
  out.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const TrajectorySample& s = samples[k];
    if (!s.truth_x || !s.truth_y) {
      throw Error(ErrorCode::Config, "sample " + std::to_string(k) + " has no ground truth");
    }
    out.push_back({*s.truth_x, *s.truth_y, s.t});
  }
  return out;
}

ErrorReport compare(const std::vector<PositionEstimate>& est,
                    const std::vector<PositionEstimate>& truth) {
  if (est.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "estimate has " + std::to_string(est.size()) +
                                               " rows, truth has " +
                                               std::to_string(truth.size()));
  }
  if (est.empty()) throw Error(ErrorCode::LengthMismatch, "nothing to compare");

  ErrorReport r;
  double sum2 = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) {
    if (std::abs(est[k].t - truth[k].t) > 1e-9 * std::max(1.0, std::abs(truth[k].t))) {
      throw Error(ErrorCode::LengthMismatch,
                  "timestamps differ at row " + std::to_string(k));
    }
    const double e = std::hypot(est[k].x - truth[k].x, est[k].y - truth[k].y);
    sum2 += e * e;
    r.max_error = std::max(r.max_error, e);
    if (k > 0) {
      r.path_length += std::hypot(truth[k].x - truth[k - 1].x, truth[k].y - truth[k - 1].y);
    }
  }
  r.rmse = std::sqrt(sum2 / static_cast<double>(est.size()));
  r.final_error = std::hypot(est.back().x - truth.back().x, est.back().y - truth.back().y);
  r.drift_per_meter = r.path_length > 0.0 ? r.final_error / r.path_length : 0.0;
  return r;
}

}  // namespace torusnav
