#include "torusnav/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename T>
std::optional<T> to_unsigned(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

bool parse_switch(std::string_view v, std::size_t line, std::string_view key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  parse_fail(line, std::string(key) + " expects on|off, got '" + std::string(v) + "'");
}

}  // namespace

void set_trajectory(RunConfig& cfg, std::string_view spec) {
  if (spec == "circle") {
    cfg.trajectory = TrajectoryKind::Circle;
  } else if (spec == "rect") {
    cfg.trajectory = TrajectoryKind::Rect;
  } else if (spec.starts_with("csv:") && spec.size() > 4) {
    cfg.trajectory = TrajectoryKind::Csv;
    cfg.trajectory_path = std::string(spec.substr(4));
  } else {
    throw Error(ErrorCode::Config,
                "trajectory must be circle, rect or csv:<path>, got '" + std::string(spec) + "'");
  }
}

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  bool gamma_set = false;
  std::set<std::string, std::less<>> seen;

  using Setter = std::function<void(std::string_view, std::size_t)>;
  auto real = [](double& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, std::size_t line) {
      const auto d = to_double(v);
      if (!d) parse_fail(line, std::string(key) + " expects a number, got '" + std::string(v) + "'");
      field = *d;
    };
  };
  auto count32 = [](std::uint32_t& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, std::size_t line) {
      const auto d = to_unsigned<std::uint32_t>(v);
      if (!d) {
        parse_fail(line, std::string(key) + " expects a non-negative integer, got '" +
                             std::string(v) + "'");
      }
      field = *d;
    };
  };
  auto count64 = [](std::uint64_t& field, const char* key) -> Setter {
    return [&field, key](std::string_view v, std::size_t line) {
      const auto d = to_unsigned<std::uint64_t>(v);
      if (!d) {
        parse_fail(line, std::string(key) + " expects a non-negative integer, got '" +
                             std::string(v) + "'");
      }
      field = *d;
    };
  };

  const std::map<std::string, Setter, std::less<>> setters = {
      {"n_x", count32(cfg.grid.n_x, "n_x")},
      {"n_y", count32(cfg.grid.n_y, "n_y")},
      {"tau", real(cfg.grid.tau, "tau")},
      {"alpha", real(cfg.grid.alpha, "alpha")},
      {"beta", real(cfg.grid.beta, "beta")},
      {"intensity", real(cfg.grid.intensity, "intensity")},
      {"shift_t", real(cfg.grid.shift_t, "shift_t")},
      {"sigma", real(cfg.grid.sigma, "sigma")},
      {"gamma",
       [&](std::string_view v, std::size_t line) {
         real(cfg.grid.gamma, "gamma")(v, line);
         gamma_set = true;
       }},
      {"dt", real(cfg.grid.dt, "dt")},
      {"seed", count64(cfg.grid.seed, "seed")},
      {"settle_steps", count32(cfg.grid.settle_steps, "settle_steps")},
      {"settle_tolerance", real(cfg.grid.settle_tolerance, "settle_tolerance")},
      {"trajectory",
       [&](std::string_view v, std::size_t line) {
         try {
           set_trajectory(cfg, v);
         } catch (const Error& e) {
           parse_fail(line, e.what());
         }
       }},
      {"radius", real(cfg.radius, "radius")},
      {"speed", real(cfg.speed, "speed")},
      {"laps", count32(cfg.laps, "laps")},
      {"rect_width", real(cfg.rect_width, "rect_width")},
      {"rect_height", real(cfg.rect_height, "rect_height")},
      {"disturbance",
       [&](std::string_view v, std::size_t line) {
         cfg.disturbance_enabled = parse_switch(v, line, "disturbance");
       }},
      {"wave_freq", real(cfg.disturbance.wave_freq, "wave_freq")},
      {"wave_amp", real(cfg.disturbance.wave_amp, "wave_amp")},
      {"wave_dir", real(cfg.disturbance.wave_dir, "wave_dir")},
      {"noise_std", real(cfg.disturbance.noise_std, "noise_std")},
      {"disturbance_seed", count64(cfg.disturbance.seed, "disturbance_seed")},
      {"out", [&](std::string_view v, std::size_t) { cfg.out_dir = std::string(v); }},
      {"snapshot_every", count32(cfg.snapshot_every, "snapshot_every")},
      {"calibrate",
       [&](std::string_view v, std::size_t line) {
         cfg.calibrate = parse_switch(v, line, "calibrate");
       }},
      {"kf_meas_noise", real(cfg.kf_meas_noise, "kf_meas_noise")},
      {"kf_process_noise", real(cfg.kf_process_noise, "kf_process_noise")},
  };

  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "missing key");
    if (value.empty()) parse_fail(line_no, "missing value for " + std::string(key));
    const auto it = setters.find(key);
    if (it == setters.end()) parse_fail(line_no, "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      parse_fail(line_no, "duplicate key '" + std::string(key) + "'");
    }
    it->second(value, line_no);
  }

  if (!gamma_set && cfg.grid.alpha > 0.0) cfg.grid.gamma = 1.0 / cfg.grid.alpha;
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  return parse_config_text(read_file(path));
}

void validate(const RunConfig& cfg) {
  validate(cfg.grid);
  const DisturbanceSpec& d = cfg.disturbance;
  if (!(d.wave_freq > 0.0)) throw Error(ErrorCode::Config, "wave_freq must be > 0");
  if (!(d.wave_amp >= 0.0)) throw Error(ErrorCode::Config, "wave_amp must be >= 0");
  if (!(d.noise_std >= 0.0)) throw Error(ErrorCode::Config, "noise_std must be >= 0");
  if (!std::isfinite(d.wave_dir)) throw Error(ErrorCode::Config, "wave_dir must be finite");
  if (!(cfg.radius > 0.0)) throw Error(ErrorCode::Config, "radius must be > 0");
  if (!(cfg.speed > 0.0)) throw Error(ErrorCode::Config, "speed must be > 0");
  if (cfg.laps == 0) throw Error(ErrorCode::Config, "laps must be >= 1");
  if (!(cfg.rect_width > 0.0)) throw Error(ErrorCode::Config, "rect_width must be > 0");
  if (!(cfg.rect_height > 0.0)) throw Error(ErrorCode::Config, "rect_height must be > 0");
  if (!(cfg.kf_meas_noise > 0.0)) throw Error(ErrorCode::Config, "kf_meas_noise must be > 0");
  if (!(cfg.kf_process_noise > 0.0)) {
    throw Error(ErrorCode::Config, "kf_process_noise must be > 0");
  }
  if (cfg.out_dir.empty()) throw Error(ErrorCode::Config, "out must not be empty");
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::Io, "cannot format number");
  return std::string(buf, ptr);
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  auto fail = [&](std::size_t row, const std::string& what) -> void {
    throw Error(ErrorCode::Parse, path.string() + ": row " + std::to_string(row) + ": " + what);
  };
  auto split = [](std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return fields;
  };

  CsvTable table;
  if (lines.empty() || trim(lines[0]).empty()) fail(1, "missing header");
  for (std::string_view name : split(trim(lines[0]))) {
    if (name.empty()) fail(1, "empty column name");
    table.columns.emplace_back(name);
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string_view line = trim(lines[n]);
    if (line.empty()) continue;
    const auto fields = split(line);
    const std::size_t row_no = n + 1;
    if (fields.size() != table.columns.size()) {
      fail(row_no, "expected " + std::to_string(table.columns.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = to_double(fields[c]);
      if (!v) fail(row_no, "bad number '" + std::string(fields[c]) + "' in " + table.columns[c]);
      row.push_back(*v);
    }
    if (!table.rows.empty() && !(row[0] > table.rows.back()[0])) {
      fail(row_no, table.columns[0] + " is not strictly increasing");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<TrajectorySample> read_trajectory_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv_table(path);
  static const std::vector<std::string> base = {"t", "vx_body", "vy_body", "psi"};
  std::vector<std::string> with_truth = base;
  with_truth.insert(with_truth.end(), {"truth_x", "truth_y"});
  const bool has_truth = table.columns == with_truth;
  if (!has_truth && table.columns != base) {
    throw Error(ErrorCode::Parse, path.string() +
                                      ": row 1: header must be t,vx_body,vy_body,psi"
                                      "[,truth_x,truth_y]");
  }
  std::vector<TrajectorySample> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    TrajectorySample s{r[0], r[1], r[2], r[3], std::nullopt, std::nullopt};
    if (has_truth) {
      s.truth_x = r[4];
      s.truth_y = r[5];
    }
    out.push_back(s);
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectorySample>& samples) {
  bool truth = !samples.empty();
  for (const auto& s : samples) truth = truth && s.truth_x && s.truth_y;
  std::string text = truth ? "t,vx_body,vy_body,psi,truth_x,truth_y\n" : "t,vx_body,vy_body,psi\n";
  for (const auto& s : samples) {
    text += format_number(s.t) + ',' + format_number(s.vx_body) + ',' +
            format_number(s.vy_body) + ',' + format_number(s.psi);
    if (truth) text += ',' + format_number(*s.truth_x) + ',' + format_number(*s.truth_y);
    text += '\n';
  }
  write_file(path, text);
}

void write_estimates_csv(const std::filesystem::path& path, const EstimateColumns& columns) {
  if (columns.grid == nullptr) throw Error(ErrorCode::Config, "estimates need the grid column");
  const std::size_t n = columns.grid->size();
  for (const auto* col : {columns.dead_reckoning, columns.kalman, columns.truth}) {
    if (col != nullptr && col->size() != n) {
      throw Error(ErrorCode::LengthMismatch, "estimate columns differ in length");
    }
  }
  const bool baselines = columns.dead_reckoning != nullptr && columns.kalman != nullptr;
  std::string text = "t,x_est,y_est";
  if (baselines) text += ",x_dr,y_dr,x_kf,y_kf";
  if (columns.truth) text += ",truth_x,truth_y";
  text += '\n';
  auto pair = [](const PositionEstimate& p) {
    return ',' + format_number(p.x) + ',' + format_number(p.y);
  };
  for (std::size_t k = 0; k < n; ++k) {
    const PositionEstimate& g = (*columns.grid)[k];
    text += format_number(g.t) + pair(g);
    if (baselines) text += pair((*columns.dead_reckoning)[k]) + pair((*columns.kalman)[k]);
    if (columns.truth) text += pair((*columns.truth)[k]);
    text += '\n';
  }
  write_file(path, text);
}

std::vector<PositionEstimate> positions_from_table(const CsvTable& table, std::string_view which) {
  std::string xs, ys;
  if (which == "est") {
    xs = "x_est", ys = "y_est";
  } else if (which == "dr") {
    xs = "x_dr", ys = "y_dr";
  } else if (which == "kf") {
    xs = "x_kf", ys = "y_kf";
  } else if (which == "truth") {
    xs = "truth_x", ys = "truth_y";
  } else {
    throw Error(ErrorCode::Config, "unknown column set '" + std::string(which) + "'");
  }
  const auto cx = table.column(xs);
  const auto cy = table.column(ys);
  if (!cx || !cy || table.columns.empty() || table.columns[0] != "t") {
    throw Error(ErrorCode::Parse, "table has no t," + xs + "," + ys + " columns");
  }
  std::vector<PositionEstimate> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.push_back({r[*cx], r[*cy], r[0]});
  return out;
}

void write_snapshot(const GridState& state, const CellGrid& grid,
                    const std::filesystem::path& path) {
  if (state.activity.size() != grid.size()) {
    throw Error(ErrorCode::Config, "snapshot state does not match the grid");
  }
  std::string text;
  char buf[32];
  for (std::uint32_t row = 0; row < grid.n_y; ++row) {
    for (std::uint32_t col = 0; col < grid.n_x; ++col) {
      std::snprintf(buf, sizeof buf, "%.9g", state.activity[grid.index(col, row)]);
      if (col > 0) text += ' ';
      text += buf;
    }
    text += '\n';
  }
  write_file(path, text);
}

std::string snapshot_filename(std::uint64_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "activity_step_%06llu.txt",
                static_cast<unsigned long long>(step));
  return buf;
}

}  // namespace torusnav
