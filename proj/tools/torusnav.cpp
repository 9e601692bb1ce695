// torusnav command-line front end. Talks to the library only through torusnav.h.

#include <torusnav/torusnav.h>

#include <CLI11.hpp>

#include <chrono>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tn_status status, const std::string& context = {}) {
  if (status == TN_OK) return;
  std::string msg = context.empty() ? "" : context + ": ";
  const char* detail = tn_last_error();
  msg += (detail && *detail) ? detail : tn_status_string(status);
  throw Failure(msg);
}

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct TrajectoryDeleter {
  void operator()(tn_trajectory* t) const { tn_trajectory_destroy(t); }
};
struct NetworkDeleter {
  void operator()(tn_network* n) const { tn_network_destroy(n); }
};
struct PositionsDeleter {
  void operator()(tn_position* p) const { tn_positions_free(p); }
};
using Trajectory = std::unique_ptr<tn_trajectory, TrajectoryDeleter>;
using Network = std::unique_ptr<tn_network, NetworkDeleter>;

// Files created by the current command; removed again if the command fails.
class OutputLog {
 public:
  void dir(const fs::path& p) {
    if (!fs::exists(p)) {
      fs::create_directories(p);
      dirs_.push_back(p);
    }
  }
  fs::path file(const fs::path& p) {
    files_.push_back(p);
    return p;
  }
  void rollback() noexcept {
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove_all(*it, ec);
  }

 private:
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw Failure("cannot write " + path.string());
}

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  std::string trajectory;
  std::string disturbance;
  std::optional<uint32_t> snapshot_every;
};

tn_run_config load_run_config(const CommonOptions& o) {
  tn_run_config rc;
  tn_run_config_default(&rc);
  if (!o.config.empty()) check(tn_run_config_load(o.config.c_str(), &rc));
  if (o.seed) {
    rc.grid.seed = *o.seed;
    rc.disturbance.seed = *o.seed;
  }
  if (!o.trajectory.empty()) check(tn_run_config_set_trajectory(&rc, o.trajectory.c_str()));
  if (o.disturbance == "on") rc.disturbance_enabled = 1;
  if (o.disturbance == "off") rc.disturbance_enabled = 0;
  if (o.snapshot_every) rc.snapshot_every = *o.snapshot_every;
  if (!o.out.empty()) {
    if (o.out.size() >= TN_PATH_MAX) throw Failure("output path too long");
    std::snprintf(rc.out_dir, TN_PATH_MAX, "%s", o.out.c_str());
  }
  check(tn_grid_config_validate(&rc.grid));
  return rc;
}

Trajectory make_trajectory(const tn_run_config& rc) {
  tn_trajectory* raw = nullptr;
  switch (rc.trajectory) {
    case TN_TRAJECTORY_CIRCLE:
      check(tn_trajectory_circle(rc.radius, rc.speed, rc.grid.dt, rc.laps, &raw));
      break;
    case TN_TRAJECTORY_RECT:
      check(tn_trajectory_rect(rc.rect_width, rc.rect_height, rc.speed, rc.grid.dt, &raw));
      break;
    case TN_TRAJECTORY_CSV:
      check(tn_trajectory_read_csv(rc.trajectory_path, &raw));
      break;
  }
  return Trajectory(raw);
}

bool has_truth(const tn_trajectory* traj) {
  const size_t n = tn_trajectory_size(traj);
  const tn_sample* s = tn_trajectory_samples(traj);
  for (size_t k = 0; k < n; ++k) {
    if (!s[k].has_truth) return false;
  }
  return n > 0;
}

std::string report_lines(const std::string& prefix, const tn_error_report& r) {
  std::string p = prefix.empty() ? "" : prefix + ".";
  return p + "rmse=" + num(r.rmse) + "\n" + p + "final_error=" + num(r.final_error) + "\n" + p +
         "path_length=" + num(r.path_length) + "\n" + p +
         "drift_per_meter=" + num(r.drift_per_meter) + "\n" + p + "max_error=" + num(r.max_error) +
         "\n";
}

struct SnapshotContext {
  fs::path dir;
  uint32_t every = 0;
  OutputLog* log = nullptr;
  tn_status status = TN_OK;
  std::string error;
};

void snapshot_callback(const tn_network* net, size_t index, void* user) {
  auto* ctx = static_cast<SnapshotContext*>(user);
  if (ctx->every == 0 || ctx->status != TN_OK || index % ctx->every != 0) return;
  char name[128];
  tn_status st = tn_network_snapshot_name(net, name, sizeof name);
  if (st == TN_OK) {
    const fs::path path = ctx->log->file(ctx->dir / name);
    st = tn_network_write_snapshot(net, path.c_str());
  }
  if (st != TN_OK) {
    ctx->status = st;
    ctx->error = tn_last_error();
  }
}

void run_simulate(const CommonOptions& o, OutputLog& log, bool baselines) {
  tn_run_config rc = load_run_config(o);
  Trajectory traj = make_trajectory(rc);
  if (rc.disturbance_enabled) check(tn_trajectory_disturb(traj.get(), &rc.disturbance));
  if (rc.calibrate) check(tn_calibrate_gamma(&rc.grid, &rc.grid.gamma), "calibration");

  const fs::path out_dir = rc.out_dir;
  log.dir(out_dir);
  SnapshotContext snaps{out_dir / "snapshots", rc.snapshot_every, &log, TN_OK, {}};
  if (rc.snapshot_every > 0) log.dir(snaps.dir);

  const size_t n = tn_trajectory_size(traj.get());
  std::vector<tn_position> grid(n), dr, kf, truth;
  tn_status st = tn_integrate(&rc.grid, traj.get(), grid.data(), snapshot_callback, &snaps);
  if (snaps.status != TN_OK) throw Failure("snapshot: " + snaps.error);
  check(st);

  const bool truthful = has_truth(traj.get());
  if (baselines) {
    dr.resize(n);
    kf.resize(n);
    check(tn_dead_reckon(traj.get(), dr.data()));
    check(tn_kalman_baseline(traj.get(), rc.kf_meas_noise, rc.kf_process_noise, kf.data()));
  }
  if (truthful) {
    truth.resize(n);
    check(tn_truth_positions(traj.get(), truth.data()));
  }

  const fs::path estimates = log.file(out_dir / "estimates.csv");
  check(tn_write_estimates_csv(estimates.c_str(), grid.data(), baselines ? dr.data() : nullptr,
                               baselines ? kf.data() : nullptr,
                               truthful ? truth.data() : nullptr, n));
  if (baselines) {
    const fs::path traj_file = log.file(out_dir / "trajectory.csv");
    check(tn_trajectory_write_csv(traj.get(), traj_file.c_str()));
  }

  std::string report = "samples=" + std::to_string(n) + "\ngamma=" + num(rc.grid.gamma) + "\n";
  if (truthful) {
    tn_error_report r;
    check(tn_compare(grid.data(), truth.data(), n, &r));
    report += report_lines("grid", r);
    if (baselines) {
      check(tn_compare(dr.data(), truth.data(), n, &r));
      report += report_lines("dead_reckoning", r);
      check(tn_compare(kf.data(), truth.data(), n, &r));
      report += report_lines("kalman", r);
    }
  }
  write_text(log.file(out_dir / "report.txt"), report);
  std::fputs(report.c_str(), stdout);
}

void run_calibrate(const CommonOptions& o, OutputLog& log) {
  tn_run_config rc = load_run_config(o);
  double gamma = 0.0;
  check(tn_calibrate_gamma(&rc.grid, &gamma), "calibration");
  const std::string line = "gamma=" + num(gamma) + "\n";
  if (!o.out.empty()) {
    log.dir(o.out);
    write_text(log.file(fs::path(o.out) / "gamma.txt"), line);
  }
  std::fputs(line.c_str(), stdout);
}

struct ColumnRef {
  std::string path;
  std::string which;
};

ColumnRef parse_ref(const std::string& arg, const char* fallback) {
  const auto colon = arg.rfind(':');
  if (colon != std::string::npos) {
    const std::string which = arg.substr(colon + 1);
    if (which == "est" || which == "dr" || which == "kf" || which == "truth") {
      return {arg.substr(0, colon), which};
    }
  }
  return {arg, fallback};
}

std::vector<tn_position> read_positions(const ColumnRef& ref) {
  tn_position* raw = nullptr;
  size_t count = 0;
  check(tn_read_positions_csv(ref.path.c_str(), ref.which.c_str(), &raw, &count));
  std::unique_ptr<tn_position, PositionsDeleter> guard(raw);
  return std::vector<tn_position>(raw, raw + count);
}

void run_compare(const std::string& a, const std::string& b, const std::string& out,
                 OutputLog& log) {
  const auto est = read_positions(parse_ref(a, "est"));
  const auto ref = read_positions(parse_ref(b, "est"));
  if (est.size() != ref.size()) {
    throw Failure("length mismatch: " + std::to_string(est.size()) + " vs " +
                  std::to_string(ref.size()) + " rows");
  }
  tn_error_report r;
  check(tn_compare(est.data(), ref.data(), est.size(), &r));
  const std::string text = report_lines("", r);
  if (!out.empty()) {
    log.dir(out);
    write_text(log.file(fs::path(out) / "compare.txt"), text);
  }
  std::fputs(text.c_str(), stdout);
}

double steps_per_second(tn_network* net, int naive, int steps) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  for (int k = 0; k < steps; ++k) {
    // Small alternating drive keeps the bump where it settled.
    const double nu = (k % 2 == 0) ? 1e-3 : -1e-3;
    check(tn_network_step(net, nu, 0.0, naive));
  }
  const double secs = std::chrono::duration<double>(clock::now() - start).count();
  return steps / secs;
}

void run_bench(const CommonOptions& o, int naive_steps, int fast_steps) {
  tn_run_config rc = load_run_config(o);
  tn_network* raw = nullptr;
  check(tn_network_create(&rc.grid, &raw));
  Network net(raw);
  check(tn_network_settle(net.get(), nullptr));
  const double naive = steps_per_second(net.get(), 1, naive_steps);
  const double fast = steps_per_second(net.get(), 0, fast_steps);
  std::printf("cells=%u\nnaive_steps_per_s=%.1f\nfast_steps_per_s=%.1f\nspeedup=%.2f\n",
              rc.grid.n_x * rc.grid.n_y, naive, fast, fast / naive);
}

void add_common(CLI::App* cmd, CommonOptions& o, bool trajectory) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--seed", o.seed, "seed override");
  if (trajectory) {
    cmd->add_option("--trajectory", o.trajectory, "circle | rect | csv:<path>");
    cmd->add_option("--disturbance", o.disturbance, "on | off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--snapshot-every", o.snapshot_every, "samples between snapshots, 0 = never");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-cell path integration on a twisted torus"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "run the estimator and baselines on a trajectory");
  add_common(simulate, sim_opts, true);
  simulate->add_option("--out", sim_opts.out, "output directory");

  CommonOptions int_opts;
  auto* integrate = app.add_subcommand("integrate", "run the grid estimator on a trajectory CSV");
  std::string int_input;
  integrate->add_option("input", int_input, "trajectory CSV")->required();
  add_common(integrate, int_opts, false);
  integrate->add_option("--out", int_opts.out, "output directory");
  integrate->add_option("--snapshot-every", int_opts.snapshot_every,
                        "samples between snapshots, 0 = never");

  CommonOptions cal_opts;
  auto* calibrate = app.add_subcommand("calibrate", "estimate the grid spacing gain");
  add_common(calibrate, cal_opts, false);
  calibrate->add_option("--out", cal_opts.out, "directory for gamma.txt");

  std::string cmp_a, cmp_b, cmp_out;
  auto* compare = app.add_subcommand("compare", "error report between two position columns");
  compare->add_option("estimate", cmp_a, "file[:est|dr|kf|truth]")->required();
  compare->add_option("reference", cmp_b, "file[:est|dr|kf|truth]")->required();
  compare->add_option("--out", cmp_out, "directory for compare.txt");

  CommonOptions bench_opts;
  int naive_steps = 50, fast_steps = 2000;
  auto* bench = app.add_subcommand("bench", "steps per second, naive vs fast transfer");
  add_common(bench, bench_opts, false);
  bench->add_option("--naive-steps", naive_steps)->check(CLI::PositiveNumber);
  bench->add_option("--fast-steps", fast_steps)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  OutputLog log;
  try {
    if (*simulate) {
      run_simulate(sim_opts, log, true);
    } else if (*integrate) {
      int_opts.trajectory = "csv:" + int_input;
      run_simulate(int_opts, log, false);
    } else if (*calibrate) {
      run_calibrate(cal_opts, log);
    } else if (*compare) {
      run_compare(cmp_a, cmp_b, cmp_out, log);
    } else if (*bench) {
      run_bench(bench_opts, naive_steps, fast_steps);
    }
  } catch (const std::exception& e) {
    log.rollback();
    std::fprintf(stderr, "torusnav: %s\n", e.what());
    return 1;
  }
  return 0;
}
