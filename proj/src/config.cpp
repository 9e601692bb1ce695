#include "torusnav/config.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {

[[noreturn]] void reject(const char* field, const char* range, double value) {
  std::ostringstream os;
  os << field << " must be " << range << ", got " << value;
  throw Error(ErrorCode::Config, os.str());
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Saturation: return "input saturation";
    case ErrorCode::Degenerate: return "degenerate activity";
    case ErrorCode::NoBump: return "no activity bump";
    case ErrorCode::Calibration: return "calibration error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "I/O error";
    case ErrorCode::LengthMismatch: return "length mismatch";
  }
  return "unknown error";
}

void validate(const GridConfig& cfg) {
  if (cfg.n_x < 2) reject("n_x", ">= 2", cfg.n_x);
  if (cfg.n_y < 2) reject("n_y", ">= 2", cfg.n_y);
  // The twisted wrap moves half a row when crossing the top edge, which
  // lands on a cell only for an even row length.
  if (cfg.n_x % 2 != 0) reject("n_x", "even", cfg.n_x);
  if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) reject("tau", "in [0, 1)", cfg.tau);
  if (!positive(cfg.alpha)) reject("alpha", "> 0", cfg.alpha);
  if (!std::isfinite(cfg.beta)) reject("beta", "finite", cfg.beta);
  if (!positive(cfg.intensity)) reject("intensity", "> 0", cfg.intensity);
  if (!(std::isfinite(cfg.shift_t) && cfg.shift_t >= 0.0)) reject("shift_t", ">= 0", cfg.shift_t);
  if (!positive(cfg.sigma)) reject("sigma", "> 0", cfg.sigma);
  if (!positive(cfg.gamma)) reject("gamma", "> 0", cfg.gamma);
  if (!positive(cfg.dt)) reject("dt", "> 0", cfg.dt);
  if (!(std::isfinite(cfg.settle_tolerance) && cfg.settle_tolerance >= 0.0)) {
    reject("settle_tolerance", ">= 0", cfg.settle_tolerance);
  }
}

}  // namespace torusnav
