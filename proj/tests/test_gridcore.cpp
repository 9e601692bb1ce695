#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "torusnav/config.hpp"
#include "torusnav/error.hpp"
#include "torusnav/network.hpp"
#include "torusnav/topology.hpp"

using namespace torusnav;
using doctest::Approx;

namespace {

const double kH = std::sqrt(3.0) / 2.0;

// Distance to the nearest point of the lattice generated by (1, 0) and
// (1/2, sqrt3/2), by exhaustive search over a generous window.
double lattice_distance(Vec2 d) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = -4; m <= 4; ++m) {
    for (int n = -4; n <= 4; ++n) {
      const double x = d.x + m + 0.5 * n;
      const double y = d.y + kH * n;
      best = std::min(best, std::hypot(x, y));
    }
  }
  return best;
}

GridConfig reference_weights() {
  GridConfig cfg;
  cfg.intensity = 0.3;
  cfg.shift_t = 0.05;
  return cfg;
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("30x30 corner cells") {
    const CellGrid g = build_topology(30, 30);
    REQUIRE(g.size() == 900);
    CHECK(g.positions[g.index(0, 0)].x == Approx(0.0166667).epsilon(1e-6));
    CHECK(g.positions[g.index(0, 0)].y == Approx(0.0144338).epsilon(1e-6));
    CHECK(g.positions[g.index(29, 0)].x == Approx(0.9833333).epsilon(1e-6));
    CHECK(g.positions[g.index(29, 0)].y == Approx(0.0144338).epsilon(1e-6));
    CHECK(g.period_x == 1.0);
    CHECK(g.period_y == Approx(kH));
  }

  TEST_CASE("2x2 positions in row-major order") {
    const CellGrid g = build_topology(2, 2);
    const std::vector<Vec2> want{{0.25, 0.2165}, {0.75, 0.2165}, {0.25, 0.6495}, {0.75, 0.6495}};
    REQUIRE(g.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(g.positions[i].x == Approx(want[i].x).epsilon(1e-4));
      CHECK(g.positions[i].y == Approx(want[i].y).epsilon(1e-4));
    }
  }

  TEST_CASE("positions stay inside the sheet") {
    const CellGrid g = build_topology(12, 7);
    for (const Vec2& p : g.positions) {
      CHECK(p.x > 0.0);
      CHECK(p.x < 1.0);
      CHECK(p.y > 0.0);
      CHECK(p.y < kH);
    }
  }

  TEST_CASE("dimension below two is rejected") {
    CHECK_THROWS_AS(build_topology(1, 30), Error);
    CHECK_THROWS_AS(build_topology(30, 1), Error);
    try {
      build_topology(1, 5);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
    }
  }

  TEST_CASE("tri displacement of identical points") {
    const auto r = tri_displacement({0.3, 0.4}, {0.3, 0.4});
    CHECK(r.distance == 0.0);
    CHECK(r.displacement == Vec2{0.0, 0.0});
  }

  TEST_CASE("tri displacement wraps across x") {
    const auto r = tri_displacement({0.0166667, 0.0288675}, {0.9833333, 0.0288675});
    CHECK(r.distance == Approx(0.0333333).epsilon(1e-5));
    CHECK(std::hypot(0.0166667 - 0.9833333, 0.0) == Approx(0.9666667));
  }

  TEST_CASE("tri displacement matches exhaustive lattice search") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, kH), us(-0.3, 0.3);
    for (int k = 0; k < 2000; ++k) {
      const Vec2 p{ux(rng), uy(rng)};
      const Vec2 q{ux(rng), uy(rng)};
      const Vec2 shift{us(rng), us(rng)};
      const auto r = tri_displacement(p + shift, q);
      CHECK(r.distance == Approx(lattice_distance(p + shift - q)).epsilon(1e-12));
      CHECK(r.displacement.norm() == Approx(r.distance).epsilon(1e-14));
    }
  }

  TEST_CASE("tri distance is symmetric") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.0, kH);
    for (int k = 0; k < 100; ++k) {
      const Vec2 p{ux(rng), uy(rng)};
      const Vec2 q{ux(rng), uy(rng)};
      CHECK(tri_displacement(p, q).distance == Approx(tri_displacement(q, p).distance).epsilon(1e-15));
    }
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults validate") { CHECK_NOTHROW(validate(GridConfig{})); }

  TEST_CASE("tau out of range names the field and range") {
    GridConfig cfg;
    cfg.tau = 1.5;
    try {
      validate(cfg);
      FAIL("accepted tau = 1.5");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
      const std::string msg = e.what();
      CHECK(msg.find("tau") != std::string::npos);
      CHECK(msg.find("[0, 1)") != std::string::npos);
    }
  }

  TEST_CASE("non-positive parameters are rejected") {
    for (double GridConfig::*field : {&GridConfig::sigma, &GridConfig::intensity,
                                      &GridConfig::alpha, &GridConfig::gamma, &GridConfig::dt}) {
      GridConfig cfg;
      cfg.*field = 0.0;
      CHECK_THROWS_AS(validate(cfg), Error);
    }
    GridConfig cfg;
    cfg.shift_t = -0.1;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = GridConfig{};
    cfg.n_x = 31;
    CHECK_THROWS_AS(validate(cfg), Error);
  }
}

TEST_SUITE("weights") {
  TEST_CASE("self weight is I - T") {
    const GridConfig cfg = reference_weights();
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {});
    for (std::size_t i = 0; i < g.size(); i += 97) CHECK(w(i, i) == Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("zero crossing at sigma * sqrt(ln(I / T))") {
    const GridConfig cfg = reference_weights();
    const double d0 = cfg.sigma * std::sqrt(std::log(cfg.intensity / cfg.shift_t));
    CHECK(d0 == Approx(0.3213).epsilon(1e-4));
    CHECK(std::abs(weight_from_distance2(d0 * d0, cfg)) < 1e-15);
    CHECK(weight_from_distance2(0.32 * 0.32, cfg) > 0.0);
    CHECK(weight_from_distance2(0.323 * 0.323, cfg) < 0.0);
  }

  TEST_CASE("rest weights are symmetric and bounded") {
    const GridConfig cfg;
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {});
    double asym = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        asym = std::max(asym, std::abs(w(i, j) - w(j, i)));
        CHECK_MESSAGE(w(i, j) >= -cfg.shift_t, i << "," << j);
        CHECK_MESSAGE(w(i, j) <= cfg.intensity - cfg.shift_t, i << "," << j);
      }
    }
    CHECK(asym < 1e-15);
  }

  TEST_CASE("shifted weights stay bounded") {
    const GridConfig cfg;
    const CellGrid g = build_topology(10, 10);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.17, 0.17);
    for (int k = 0; k < 20; ++k) {
      const WeightMatrix w = build_weights(g, cfg, {{u(rng), u(rng)}});
      const auto [lo, hi] = std::minmax_element(w.values.begin(), w.values.end());
      CHECK(*lo >= -cfg.shift_t);
      CHECK(*hi <= cfg.intensity - cfg.shift_t);
    }
  }

  TEST_CASE("weights follow the shifted tri distance") {
    const GridConfig cfg;
    const CellGrid g = build_topology(6, 6);
    const Vec2 nu{0.03, -0.02};
    const WeightMatrix w = build_weights(g, cfg, {nu});
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double d = lattice_distance(g.positions[i] - g.positions[j] + nu);
        const double want = cfg.intensity * std::exp(-d * d / (cfg.sigma * cfg.sigma)) - cfg.shift_t;
        CHECK(w(i, j) == Approx(want).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("saturating shift is rejected") {
    const GridConfig cfg;
    const CellGrid g = build_topology(4, 4);
    try {
      build_weights(g, cfg, {{0.2, 0.2}});
      FAIL("accepted |shift| >= 0.25");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Saturation);
    }
  }

  TEST_CASE("naive build evaluates N^2 Gaussians") {
    const GridConfig cfg;
    const CellGrid g = build_topology(8, 6);
    const auto before = gaussian_evaluations();
    build_weights(g, cfg, {{0.01, 0.0}});
    CHECK(gaussian_evaluations() - before == 48u * 48u);
  }
}

TEST_SUITE("dynamics") {
  TEST_CASE("init is bounded by 1/sqrt(N) and seeded") {
    GridConfig cfg;
    const GridState a = init_state(cfg);
    REQUIRE(a.activity.size() == 900);
    CHECK(a.step == 0);
    for (double v : a.activity) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 / 30.0);
    }
    const GridState b = init_state(cfg);
    CHECK(a.activity == b.activity);
    cfg.seed = 2;
    CHECK(init_state(cfg).activity != a.activity);
  }

  TEST_CASE("total activity") {
    GridState s{std::vector<double>(4, 0.0), 0};
    CHECK(total_activity(s) == 0.0);
    s.activity[2] = 0.5;
    CHECK(total_activity(s) == 0.5);
    const double fresh = total_activity(init_state(GridConfig{}));
    CHECK(fresh > 0.0);
    CHECK(fresh <= 30.0);
    CHECK(fresh == Approx(15.0).epsilon(0.05));
  }

  TEST_CASE("dead network fails loudly") {
    const GridConfig cfg;
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {});
    const GridState zero{std::vector<double>(900, 0.0), 0};
    try {
      step(zero, w, cfg);
      FAIL("stepped a zero state");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Degenerate);
    }
  }

  TEST_CASE("single unit cell maps to its weight row") {
    const GridConfig cfg = reference_weights();
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {});
    const std::size_t k = g.index(7, 12);
    GridState s{std::vector<double>(900, 0.0), 3};
    s.activity[k] = 1.0;
    const GridState next = step(s, w, cfg);
    CHECK(next.step == 4);
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(next.activity[j] == Approx(std::max(w(k, j), 0.0)).epsilon(1e-15));
    }
  }

  TEST_CASE("update uses the previous total as normaliser") {
    GridConfig cfg;
    cfg.tau = 0.5;
    const GridState s{{0.2, 0.3, 0.5, 1.0}, 0};
    const std::vector<double> b{0.4, -0.1, 0.0, 2.0};
    const GridState next = apply_dynamics(s, b, cfg);
    CHECK(next.activity[0] == Approx(0.5 * 0.4 + 0.5 * 0.4 / 2.0));
    CHECK(next.activity[1] == 0.0);
    CHECK(next.activity[2] == 0.0);
    CHECK(next.activity[3] == Approx(0.5 * 2.0 + 0.5 * 2.0 / 2.0));
  }

  TEST_CASE("activity stays non-negative and finite") {
    const GridConfig cfg;
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {{0.004, 0.002}});
    GridState s = init_state(cfg);
    for (int t = 0; t < 60; ++t) {
      s = step(s, w, cfg);
      for (double v : s.activity) {
        REQUIRE(v >= 0.0);
        REQUIRE(std::isfinite(v));
      }
    }
  }

  TEST_CASE("identical inputs give bitwise identical trajectories") {
    const GridConfig cfg;
    const CellGrid g = build_topology(30, 30);
    const WeightMatrix w = build_weights(g, cfg, {{0.01, 0.0}});
    GridState a = init_state(cfg), b = init_state(cfg);
    for (int t = 0; t < 20; ++t) {
      a = step(a, w, cfg);
      b = step(b, w, cfg);
    }
    CHECK(a.activity == b.activity);
  }
}
