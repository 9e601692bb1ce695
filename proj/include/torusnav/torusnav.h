/* C interface to the torusnav grid-cell path integrator.
 *
 * Every fallible call returns a tn_status; on failure tn_last_error()
 * holds a one-line diagnostic for the calling thread. Handles are opaque
 * and owned by the caller once returned; release them with the matching
 * *_destroy function.
 */
#ifndef TORUSNAV_H
#define TORUSNAV_H

#include <stddef.h>
#include <stdint.h>

#if defined(TN_BUILDING_LIBRARY)
#define TN_API __attribute__((visibility("default")))
#else
#define TN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tn_status {
  TN_OK = 0,
  TN_ERR_CONFIG = 1,
  TN_ERR_SATURATION = 2,
  TN_ERR_DEGENERATE = 3,
  TN_ERR_NO_BUMP = 4,
  TN_ERR_CALIBRATION = 5,
  TN_ERR_PARSE = 6,
  TN_ERR_IO = 7,
  TN_ERR_LENGTH_MISMATCH = 8,
  TN_ERR_INVALID_ARGUMENT = 9,
  TN_ERR_INTERNAL = 10
} tn_status;

TN_API const char* tn_status_string(tn_status status);
TN_API const char* tn_last_error(void);

typedef struct tn_grid_config {
  uint32_t n_x;
  uint32_t n_y;
  double tau;
  double alpha;
  double beta;
  double intensity;
  double shift_t;
  double sigma;
  double gamma;
  double dt;
  uint64_t seed;
  uint32_t settle_steps;
  double settle_tolerance;
} tn_grid_config;

typedef struct tn_disturbance {
  double wave_freq;
  double wave_amp;
  double wave_dir;
  double noise_std;
  uint64_t seed;
} tn_disturbance;

typedef enum tn_trajectory_kind {
  TN_TRAJECTORY_CIRCLE = 0,
  TN_TRAJECTORY_RECT = 1,
  TN_TRAJECTORY_CSV = 2
} tn_trajectory_kind;

#define TN_PATH_MAX 1024

typedef struct tn_run_config {
  tn_grid_config grid;
  tn_disturbance disturbance;
  int disturbance_enabled;
  tn_trajectory_kind trajectory;
  char trajectory_path[TN_PATH_MAX];
  double radius;
  double speed;
  uint32_t laps;
  double rect_width;
  double rect_height;
  char out_dir[TN_PATH_MAX];
  uint32_t snapshot_every;
  int calibrate;
  double kf_meas_noise;
  double kf_process_noise;
} tn_run_config;

typedef struct tn_sample {
  double t;
  double vx_body;
  double vy_body;
  double psi;
  double truth_x;
  double truth_y;
  int has_truth;
} tn_sample;

typedef struct tn_position {
  double t;
  double x;
  double y;
} tn_position;

typedef struct tn_phase {
  double phase_x;
  double phase_y;
  double resultant_x;
  double resultant_y;
} tn_phase;

typedef struct tn_error_report {
  double rmse;
  double final_error;
  double path_length;
  double drift_per_meter;
  double max_error;
} tn_error_report;

/* Configuration */
TN_API void tn_grid_config_default(tn_grid_config* cfg);
TN_API tn_status tn_grid_config_validate(const tn_grid_config* cfg);
TN_API void tn_disturbance_default(tn_disturbance* spec);
TN_API void tn_run_config_default(tn_run_config* cfg);
TN_API tn_status tn_run_config_load(const char* path, tn_run_config* cfg);
/* Accepts "circle", "rect" or "csv:<path>". */
TN_API tn_status tn_run_config_set_trajectory(tn_run_config* cfg, const char* spec);

/* Trajectories */
typedef struct tn_trajectory tn_trajectory;

TN_API tn_status tn_trajectory_circle(double radius, double speed, double dt, uint32_t laps,
                                      tn_trajectory** out);
TN_API tn_status tn_trajectory_rect(double width, double height, double speed, double dt,
                                    tn_trajectory** out);
TN_API tn_status tn_trajectory_from_samples(const tn_sample* samples, size_t count,
                                            tn_trajectory** out);
TN_API tn_status tn_trajectory_read_csv(const char* path, tn_trajectory** out);
TN_API tn_status tn_trajectory_write_csv(const tn_trajectory* traj, const char* path);
/* Corrupts the measured velocities in place; truth is left untouched. */
TN_API tn_status tn_trajectory_disturb(tn_trajectory* traj, const tn_disturbance* spec);
TN_API size_t tn_trajectory_size(const tn_trajectory* traj);
TN_API const tn_sample* tn_trajectory_samples(const tn_trajectory* traj);
TN_API void tn_trajectory_destroy(tn_trajectory* traj);

/* Network */
typedef struct tn_network tn_network;

TN_API tn_status tn_network_create(const tn_grid_config* cfg, tn_network** out);
TN_API void tn_network_destroy(tn_network* net);
TN_API tn_status tn_network_settle(tn_network* net, uint64_t* steps_taken);
/* One update with a per-step input (nu_x, nu_y) in sheet units. naive != 0
 * selects the dense N x N weight path. */
TN_API tn_status tn_network_step(tn_network* net, double nu_x, double nu_y, int naive);
TN_API tn_status tn_network_phase(const tn_network* net, tn_phase* out);
TN_API const double* tn_network_activity(const tn_network* net, size_t* count);
TN_API uint64_t tn_network_step_count(const tn_network* net);
TN_API tn_status tn_network_write_snapshot(const tn_network* net, const char* path);
/* Snapshot file name for the network's current step, e.g.
 * "activity_step_000123.txt". Writes at most `size` bytes including NUL. */
TN_API tn_status tn_network_snapshot_name(const tn_network* net, char* buf, size_t size);

/* Estimation. `out` must hold tn_trajectory_size(traj) entries. */
typedef void (*tn_step_callback)(const tn_network* net, size_t sample_index, void* user);

TN_API tn_status tn_integrate(const tn_grid_config* cfg, const tn_trajectory* traj,
                              tn_position* out, tn_step_callback callback, void* user);
TN_API tn_status tn_calibrate_gamma(const tn_grid_config* cfg, double* gamma);
TN_API tn_status tn_dead_reckon(const tn_trajectory* traj, tn_position* out);
TN_API tn_status tn_kalman_baseline(const tn_trajectory* traj, double meas_noise,
                                    double process_noise, tn_position* out);
TN_API tn_status tn_truth_positions(const tn_trajectory* traj, tn_position* out);
TN_API tn_status tn_compare(const tn_position* est, const tn_position* truth, size_t count,
                            tn_error_report* report);

/* Files */
/* dead_reckoning, kalman and truth may be NULL; all arrays hold `count`
 * entries. */
TN_API tn_status tn_write_estimates_csv(const char* path, const tn_position* grid,
                                        const tn_position* dead_reckoning,
                                        const tn_position* kalman, const tn_position* truth,
                                        size_t count);
/* Reads one position pair ("est", "dr", "kf" or "truth") from a trajectory
 * or estimates CSV. Free the result with tn_positions_free. */
TN_API tn_status tn_read_positions_csv(const char* path, const char* which, tn_position** out,
                                       size_t* count);
TN_API void tn_positions_free(tn_position* positions);

#ifdef __cplusplus
}
#endif

#endif /* TORUSNAV_H */
