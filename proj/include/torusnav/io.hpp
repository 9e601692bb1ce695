#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torusnav/harness.hpp"

namespace torusnav {

enum class TrajectoryKind { Circle, Rect, Csv };

struct RunConfig {
  GridConfig grid;
  DisturbanceSpec disturbance;
  bool disturbance_enabled = false;

  TrajectoryKind trajectory = TrajectoryKind::Circle;
  std::string trajectory_path;  // for TrajectoryKind::Csv
  double radius = 1.5;
  double speed = 0.1;
  std::uint32_t laps = 1;
  double rect_width = 4.0;
  double rect_height = 2.0;

  std::string out_dir = "out";
  std::uint32_t snapshot_every = 100;  // 0 = never
  bool calibrate = false;              // replace gamma by calibrate_gamma()

  double kf_meas_noise = 1e-4;     // (m/s)^2
  double kf_process_noise = 1e-7;  // (m/s)^2 / s
};

// `key = value` lines, `#` starts a comment. Unknown or repeated keys and
// malformed values raise Error(Parse) with the line number; out-of-range
// values raise Error(Config) naming the field. gamma defaults to 1/alpha.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

// Parses `circle`, `rect` or `csv:<path>` into `cfg`.
void set_trajectory(RunConfig& cfg, std::string_view spec);

void validate(const RunConfig& cfg);

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

// Comma-separated, header row first. Every row must have one field per
// column and the first column must be strictly increasing. Errors cite the
// 1-based line number as "row N".
CsvTable read_csv_table(const std::filesystem::path& path);

std::vector<TrajectorySample> read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectorySample>& samples);

struct EstimateColumns {
  const std::vector<PositionEstimate>* grid = nullptr;
  const std::vector<PositionEstimate>* dead_reckoning = nullptr;
  const std::vector<PositionEstimate>* kalman = nullptr;
  const std::vector<PositionEstimate>* truth = nullptr;
};

// Header t,x_est,y_est followed by x_dr,y_dr,x_kf,y_kf and truth_x,truth_y
// when those columns are supplied.
void write_estimates_csv(const std::filesystem::path& path, const EstimateColumns& columns);

// Picks one position pair from a trajectory or estimates table:
// "est" -> x_est,y_est, "dr", "kf", "truth" -> truth_x,truth_y.
std::vector<PositionEstimate> positions_from_table(const CsvTable& table, std::string_view which);

// n_y lines of n_x space-separated values, 9 significant digits, row-major
// in the flat cell order.
void write_snapshot(const GridState& state, const CellGrid& grid,
                    const std::filesystem::path& path);
std::string snapshot_filename(std::uint64_t step);

}  // namespace torusnav
