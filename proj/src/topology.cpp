#include "torusnav/topology.hpp"

#include <array>
#include <string>

#include "torusnav/error.hpp"

namespace torusnav {

namespace {

constexpr std::array<Vec2, 7> kImageShifts = {{
    {0.0, 0.0},
    {-0.5, kSheetHeight},
    {-0.5, -kSheetHeight},
    {0.5, kSheetHeight},
    {0.5, -kSheetHeight},
    {-1.0, 0.0},
    {1.0, 0.0},
}};

}  // namespace

CellGrid build_topology(std::uint32_t n_x, std::uint32_t n_y) {
  if (n_x < 2 || n_y < 2) {
    throw Error(ErrorCode::Config, "grid dimensions must be >= 2, got " +
                                       std::to_string(n_x) + "x" + std::to_string(n_y));
  }
  CellGrid grid;
  grid.n_x = n_x;
  grid.n_y = n_y;
  grid.positions.reserve(static_cast<std::size_t>(n_x) * n_y);
  for (std::uint32_t row = 0; row < n_y; ++row) {
    for (std::uint32_t col = 0; col < n_x; ++col) {
      grid.positions.push_back({(col + 0.5) / n_x, kSheetHeight * (row + 0.5) / n_y});
    }
  }
  return grid;
}

TriDisplacement tri_displacement(Vec2 p, Vec2 q) noexcept {
  Vec2 d = p - q;
  // Fold by the (0.5, sqrt3/2) and (1, 0) periods. For differences of two
  // points inside the domain both roundings are 0 or +-1 and the image
  // search below would find the same answer without them.
  const double k = std::round(d.y / kSheetHeight);
  if (k != 0.0) {
    d.x -= 0.5 * k;
    d.y -= kSheetHeight * k;
  }
  const double m = std::round(d.x);
  if (m != 0.0) d.x -= m;

  TriDisplacement best{d, d.norm2()};
  for (std::size_t s = 1; s < kImageShifts.size(); ++s) {
    const Vec2 candidate = d + kImageShifts[s];
    const double n2 = candidate.norm2();
    if (n2 < best.distance) best = {candidate, n2};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

}  // namespace torusnav
