#include "torusnav/torusnav.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "torusnav/error.hpp"
#include "torusnav/harness.hpp"
#include "torusnav/integrator.hpp"
#include "torusnav/io.hpp"

using namespace torusnav;

struct tn_trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<tn_sample> view;

  void sync() {
    view.clear();
    view.reserve(samples.size());
    for (const auto& s : samples) {
      view.push_back({s.t, s.vx_body, s.vy_body, s.psi, s.truth_x.value_or(0.0),
                      s.truth_y.value_or(0.0), (s.truth_x && s.truth_y) ? 1 : 0});
    }
  }
};

struct tn_network {
  std::unique_ptr<PathIntegrator> owned;  // null for callback views
  const PathIntegrator* view = nullptr;
};

namespace {

thread_local std::string g_last_error;

tn_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return TN_ERR_CONFIG;
    case ErrorCode::Saturation: return TN_ERR_SATURATION;
    case ErrorCode::Degenerate: return TN_ERR_DEGENERATE;
    case ErrorCode::NoBump: return TN_ERR_NO_BUMP;
    case ErrorCode::Calibration: return TN_ERR_CALIBRATION;
    case ErrorCode::Parse: return TN_ERR_PARSE;
    case ErrorCode::Io: return TN_ERR_IO;
    case ErrorCode::LengthMismatch: return TN_ERR_LENGTH_MISMATCH;
  }
  return TN_ERR_INTERNAL;
}

tn_status fail(tn_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
tn_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return TN_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TN_ERR_INTERNAL, "unknown failure");
  }
}

#define TN_REQUIRE(cond)                                                  \
  do {                                                                    \
    if (!(cond)) return fail(TN_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

GridConfig from_c(const tn_grid_config& c) {
  GridConfig g;
  g.n_x = c.n_x;
  g.n_y = c.n_y;
  g.tau = c.tau;
  g.alpha = c.alpha;
  g.beta = c.beta;
  g.intensity = c.intensity;
  g.shift_t = c.shift_t;
  g.sigma = c.sigma;
  g.gamma = c.gamma;
  g.dt = c.dt;
  g.seed = c.seed;
  g.settle_steps = c.settle_steps;
  g.settle_tolerance = c.settle_tolerance;
  return g;
}

tn_grid_config to_c(const GridConfig& g) {
  return {g.n_x,   g.n_y, g.tau,  g.alpha, g.beta,         g.intensity,       g.shift_t,
          g.sigma, g.gamma, g.dt, g.seed,  g.settle_steps, g.settle_tolerance};
}

DisturbanceSpec from_c(const tn_disturbance& c) {
  return {c.wave_freq, c.wave_amp, c.wave_dir, c.noise_std, c.seed};
}

tn_disturbance to_c(const DisturbanceSpec& d) {
  return {d.wave_freq, d.wave_amp, d.wave_dir, d.noise_std, d.seed};
}

void copy_path(char (&dst)[TN_PATH_MAX], const std::string& src) {
  if (src.size() >= TN_PATH_MAX) throw Error(ErrorCode::Config, "path too long: " + src);
  std::memcpy(dst, src.c_str(), src.size() + 1);
}

tn_run_config to_c(const RunConfig& r) {
  tn_run_config c{};
  c.grid = to_c(r.grid);
  c.disturbance = to_c(r.disturbance);
  c.disturbance_enabled = r.disturbance_enabled ? 1 : 0;
  c.trajectory = static_cast<tn_trajectory_kind>(r.trajectory);
  copy_path(c.trajectory_path, r.trajectory_path);
  c.radius = r.radius;
  c.speed = r.speed;
  c.laps = r.laps;
  c.rect_width = r.rect_width;
  c.rect_height = r.rect_height;
  copy_path(c.out_dir, r.out_dir);
  c.snapshot_every = r.snapshot_every;
  c.calibrate = r.calibrate ? 1 : 0;
  c.kf_meas_noise = r.kf_meas_noise;
  c.kf_process_noise = r.kf_process_noise;
  return c;
}

std::vector<PositionEstimate> from_c(const tn_position* p, size_t n) {
  std::vector<PositionEstimate> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = {p[k].x, p[k].y, p[k].t};
  return out;
}

void to_c(const std::vector<PositionEstimate>& est, tn_position* out) {
  for (size_t k = 0; k < est.size(); ++k) out[k] = {est[k].t, est[k].x, est[k].y};
}

tn_status new_trajectory(std::vector<TrajectorySample> samples, tn_trajectory** out) {
  auto t = std::make_unique<tn_trajectory>();
  t->samples = std::move(samples);
  t->sync();
  *out = t.release();
  return TN_OK;
}

}  // namespace

extern "C" {

const char* tn_status_string(tn_status status) {
  switch (status) {
    case TN_OK: return "ok";
    case TN_ERR_CONFIG: return to_string(ErrorCode::Config);
    case TN_ERR_SATURATION: return to_string(ErrorCode::Saturation);
    case TN_ERR_DEGENERATE: return to_string(ErrorCode::Degenerate);
    case TN_ERR_NO_BUMP: return to_string(ErrorCode::NoBump);
    case TN_ERR_CALIBRATION: return to_string(ErrorCode::Calibration);
    case TN_ERR_PARSE: return to_string(ErrorCode::Parse);
    case TN_ERR_IO: return to_string(ErrorCode::Io);
    case TN_ERR_LENGTH_MISMATCH: return to_string(ErrorCode::LengthMismatch);
    case TN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tn_last_error(void) { return g_last_error.c_str(); }

void tn_grid_config_default(tn_grid_config* cfg) {
  if (cfg) *cfg = to_c(GridConfig{});
}

tn_status tn_grid_config_validate(const tn_grid_config* cfg) {
  TN_REQUIRE(cfg);
  return guarded([&] { validate(from_c(*cfg)); });
}

void tn_disturbance_default(tn_disturbance* spec) {
  if (spec) *spec = to_c(DisturbanceSpec{});
}

void tn_run_config_default(tn_run_config* cfg) {
  if (cfg) *cfg = to_c(RunConfig{});
}

tn_status tn_run_config_load(const char* path, tn_run_config* cfg) {
  TN_REQUIRE(path && cfg);
  return guarded([&] { *cfg = to_c(parse_config(path)); });
}

tn_status tn_run_config_set_trajectory(tn_run_config* cfg, const char* spec) {
  TN_REQUIRE(cfg && spec);
  return guarded([&] {
    RunConfig r;
    set_trajectory(r, spec);
    cfg->trajectory = static_cast<tn_trajectory_kind>(r.trajectory);
    copy_path(cfg->trajectory_path, r.trajectory_path);
  });
}

tn_status tn_trajectory_circle(double radius, double speed, double dt, uint32_t laps,
                               tn_trajectory** out) {
  TN_REQUIRE(out);
  return guarded([&] { new_trajectory(gen_circle(radius, speed, dt, laps), out); });
}

tn_status tn_trajectory_rect(double width, double height, double speed, double dt,
                             tn_trajectory** out) {
  TN_REQUIRE(out);
  return guarded([&] { new_trajectory(gen_waypoint_rect(width, height, speed, dt), out); });
}

tn_status tn_trajectory_from_samples(const tn_sample* samples, size_t count,
                                     tn_trajectory** out) {
  TN_REQUIRE(out && (samples || count == 0));
  return guarded([&] {
    std::vector<TrajectorySample> v(count);
    for (size_t k = 0; k < count; ++k) {
      const tn_sample& s = samples[k];
      v[k] = {s.t, s.vx_body, s.vy_body, s.psi, std::nullopt, std::nullopt};
      if (s.has_truth) {
        v[k].truth_x = s.truth_x;
        v[k].truth_y = s.truth_y;
      }
    }
    new_trajectory(std::move(v), out);
  });
}

tn_status tn_trajectory_read_csv(const char* path, tn_trajectory** out) {
  TN_REQUIRE(path && out);
  return guarded([&] { new_trajectory(read_trajectory_csv(path), out); });
}

tn_status tn_trajectory_write_csv(const tn_trajectory* traj, const char* path) {
  TN_REQUIRE(traj && path);
  return guarded([&] { write_trajectory_csv(path, traj->samples); });
}

tn_status tn_trajectory_disturb(tn_trajectory* traj, const tn_disturbance* spec) {
  TN_REQUIRE(traj && spec);
  return guarded([&] {
    traj->samples = add_disturbance(std::move(traj->samples), from_c(*spec));
    traj->sync();
  });
}

size_t tn_trajectory_size(const tn_trajectory* traj) { return traj ? traj->samples.size() : 0; }

const tn_sample* tn_trajectory_samples(const tn_trajectory* traj) {
  return traj ? traj->view.data() : nullptr;
}

void tn_trajectory_destroy(tn_trajectory* traj) { delete traj; }

tn_status tn_network_create(const tn_grid_config* cfg, tn_network** out) {
  TN_REQUIRE(cfg && out);
  return guarded([&] {
    auto net = std::make_unique<tn_network>();
    net->owned = std::make_unique<PathIntegrator>(from_c(*cfg));
    net->view = net->owned.get();
    *out = net.release();
  });
}

void tn_network_destroy(tn_network* net) { delete net; }

tn_status tn_network_settle(tn_network* net, uint64_t* steps_taken) {
  TN_REQUIRE(net && net->owned);
  return guarded([&] {
    const auto steps = net->owned->settle();
    if (steps_taken) *steps_taken = steps;
  });
}

tn_status tn_network_step(tn_network* net, double nu_x, double nu_y, int naive) {
  TN_REQUIRE(net && net->owned);
  return guarded([&] { net->owned->step_network(VelocityInput{{nu_x, nu_y}}, naive != 0); });
}

tn_status tn_network_phase(const tn_network* net, tn_phase* out) {
  TN_REQUIRE(net && out);
  return guarded([&] {
    const BumpPhase p = bump_phase(net->view->state(), net->view->grid());
    *out = {p.phase_x, p.phase_y, p.resultant_x, p.resultant_y};
  });
}

const double* tn_network_activity(const tn_network* net, size_t* count) {
  if (!net) return nullptr;
  const auto& a = net->view->state().activity;
  if (count) *count = a.size();
  return a.data();
}

uint64_t tn_network_step_count(const tn_network* net) {
  return net ? net->view->state().step : 0;
}

tn_status tn_network_write_snapshot(const tn_network* net, const char* path) {
  TN_REQUIRE(net && path);
  return guarded([&] { write_snapshot(net->view->state(), net->view->grid(), path); });
}

tn_status tn_network_snapshot_name(const tn_network* net, char* buf, size_t size) {
  TN_REQUIRE(net && buf);
  const std::string name = snapshot_filename(net->view->state().step);
  if (name.size() + 1 > size) return fail(TN_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, name.c_str(), name.size() + 1);
  return TN_OK;
}

tn_status tn_integrate(const tn_grid_config* cfg, const tn_trajectory* traj, tn_position* out,
                       tn_step_callback callback, void* user) {
  TN_REQUIRE(cfg && traj && (out || traj->samples.empty()));
  return guarded([&] {
    StepObserver observer;
    if (callback) {
      observer = [&](const PathIntegrator& integrator, std::size_t index) {
        tn_network view;
        view.view = &integrator;
        callback(&view, index, user);
      };
    }
    to_c(integrate_trajectory(traj->samples, from_c(*cfg), observer), out);
  });
}

tn_status tn_calibrate_gamma(const tn_grid_config* cfg, double* gamma) {
  TN_REQUIRE(cfg && gamma);
  return guarded([&] { *gamma = calibrate_gamma(from_c(*cfg)); });
}

tn_status tn_dead_reckon(const tn_trajectory* traj, tn_position* out) {
  TN_REQUIRE(traj && (out || traj->samples.empty()));
  return guarded([&] { to_c(dead_reckon(traj->samples), out); });
}

tn_status tn_kalman_baseline(const tn_trajectory* traj, double meas_noise, double process_noise,
                             tn_position* out) {
  TN_REQUIRE(traj && (out || traj->samples.empty()));
  return guarded(
      [&] { to_c(kf_velocity_baseline(traj->samples, meas_noise, process_noise), out); });
}

tn_status tn_truth_positions(const tn_trajectory* traj, tn_position* out) {
  TN_REQUIRE(traj && (out || traj->samples.empty()));
  return guarded([&] { to_c(truth_positions(traj->samples), out); });
}

tn_status tn_compare(const tn_position* est, const tn_position* truth, size_t count,
                     tn_error_report* report) {
  TN_REQUIRE(est && truth && report);
  return guarded([&] {
    const ErrorReport r = compare(from_c(est, count), from_c(truth, count));
    *report = {r.rmse, r.final_error, r.path_length, r.drift_per_meter, r.max_error};
  });
}

tn_status tn_write_estimates_csv(const char* path, const tn_position* grid,
                                 const tn_position* dead_reckoning, const tn_position* kalman,
                                 const tn_position* truth, size_t count) {
  TN_REQUIRE(path && grid);
  return guarded([&] {
    const auto g = from_c(grid, count);
    std::vector<PositionEstimate> dr, kf, tr;
    EstimateColumns cols;
    cols.grid = &g;
    if (dead_reckoning && kalman) {
      dr = from_c(dead_reckoning, count);
      kf = from_c(kalman, count);
      cols.dead_reckoning = &dr;
      cols.kalman = &kf;
    }
    if (truth) {
      tr = from_c(truth, count);
      cols.truth = &tr;
    }
    write_estimates_csv(path, cols);
  });
}

tn_status tn_read_positions_csv(const char* path, const char* which, tn_position** out,
                                size_t* count) {
  TN_REQUIRE(path && which && out && count);
  return guarded([&] {
    const auto pos = positions_from_table(read_csv_table(path), which);
    auto* buf = static_cast<tn_position*>(std::malloc(sizeof(tn_position) * (pos.size() + 1)));
    if (!buf) throw std::bad_alloc();
    to_c(pos, buf);
    *out = buf;
    *count = pos.size();
  });
}

void tn_positions_free(tn_position* positions) { std::free(positions); }

}  // extern "C"
