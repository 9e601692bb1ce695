#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace torusnav {

inline constexpr double kSheetWidth = 1.0;
inline constexpr double kSheetHeight = std::numbers::sqrt3 / 2.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) noexcept = default;

  double norm2() const noexcept { return x * x + y * y; }
  double norm() const noexcept { return std::hypot(x, y); }
};

// Cell positions of the twisted-torus sheet.
//
// Flat index: l = row * n_x + col with 0-based row/col (row = l_y - 1,
// col = l_x - 1). Activity vectors, weight matrices and snapshot files all
// use this ordering.
struct CellGrid {
  std::uint32_t n_x = 0;
  std::uint32_t n_y = 0;
  std::vector<Vec2> positions;
  double period_x = kSheetWidth;
  double period_y = kSheetHeight;

  std::size_t size() const noexcept { return positions.size(); }
  std::size_t index(std::uint32_t col, std::uint32_t row) const noexcept {
    return static_cast<std::size_t>(row) * n_x + col;
  }
};

CellGrid build_topology(std::uint32_t n_x, std::uint32_t n_y);

struct TriDisplacement {
  Vec2 displacement;
  double distance = 0.0;
};

// Nearest twisted-torus image of p - q. The difference is first folded
// into the central strip by whole lattice periods, then the minimum over
// the seven images {(0,0), (+-0.5, +-sqrt3/2), (+-1, 0)} is taken, so the
// result is the true lattice distance even for shifted arguments that
// leave the fundamental domain.
TriDisplacement tri_displacement(Vec2 p, Vec2 q) noexcept;

}  // namespace torusnav
