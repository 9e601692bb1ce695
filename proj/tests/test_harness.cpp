#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "torusnav/error.hpp"
#include "torusnav/harness.hpp"

using namespace torusnav;
using doctest::Approx;

namespace {

std::vector<TrajectorySample> straight(double speed, std::size_t n, double dt = 0.1) {
  std::vector<TrajectorySample> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = (k + 1) * dt;
    out[k] = {t, speed, 0.0, 0.0, speed * t, 0.0};
  }
  return out;
}

double max_error(const std::vector<PositionEstimate>& a, const std::vector<PositionEstimate>& b) {
  return compare(a, b).max_error;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

DisturbanceSpec noise_only(double std_dev, std::uint64_t seed) {
  DisturbanceSpec d;
  d.wave_amp = 0.0;
  d.noise_std = std_dev;
  d.seed = seed;
  return d;
}

}  // namespace

TEST_SUITE("generators") {
  TEST_CASE("one lap of the 1.5 m circle") {
    const auto s = gen_circle(1.5, 0.1, 0.1);
    CHECK(s.size() == 943);
    CHECK(std::hypot(*s.back().truth_x, *s.back().truth_y) < 0.01);
    CHECK(s.front().psi == 0.0);
    const double step = 0.01 / 1.5;
    CHECK(s.back().psi + step == Approx(2 * std::numbers::pi).epsilon(step));
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(std::hypot(*s[k].truth_x, *s[k].truth_y - 1.5) == Approx(1.5).epsilon(1e-14));
      CHECK(s[k].vx_body == 0.1);
      CHECK(s[k].vy_body == 0.0);
      CHECK(s[k].t == Approx((k + 1) * 0.1));
      if (k > 0) CHECK(s[k].psi > s[k - 1].psi);
    }
  }

  TEST_CASE("4 x 2 rectangle") {
    const auto s = gen_waypoint_rect(4.0, 2.0, 0.1, 0.1);
    CHECK(s.size() == 1200);
    CHECK(*s.back().truth_x == 0.0);
    CHECK(*s.back().truth_y == 0.0);
    std::set<double> headings;
    for (const auto& x : s) {
      headings.insert(x.psi);
      CHECK(*x.truth_x >= 0.0);
      CHECK(*x.truth_x <= 4.0);
      CHECK(*x.truth_y >= 0.0);
      CHECK(*x.truth_y <= 2.0);
    }
    const double pi = std::numbers::pi;
    CHECK(headings == std::set<double>{0.0, pi / 2, pi, 3 * pi / 2});
  }

  TEST_CASE("generators reject saturating steps and bad sizes") {
    CHECK_THROWS_AS(gen_circle(1.5, 3.0, 0.1), Error);
    CHECK_THROWS_AS(gen_circle(-1.0, 0.1, 0.1), Error);
    CHECK_THROWS_AS(gen_waypoint_rect(4.0, 2.0, 2.5, 0.1), Error);
    CHECK_THROWS_AS(gen_waypoint_rect(0.0, 2.0, 0.1, 0.1), Error);
  }

  TEST_CASE("dead reckoning reproduces generated truth") {
    const auto circle = gen_circle(1.5, 0.1, 0.1);
    const double circle_bound = 0.1 * 0.1 * 0.1 * 0.1 * circle.size() / (2 * 1.5);
    CHECK(max_error(dead_reckon(circle), truth_positions(circle)) < circle_bound);
    CHECK(compare(dead_reckon(circle), truth_positions(circle)).final_error < 0.02);

    const auto rect = gen_waypoint_rect(4.0, 2.0, 0.1, 0.1);
    CHECK(max_error(dead_reckon(rect), truth_positions(rect)) < 4 * 2 * 0.1 * 0.1);

    const auto odd = gen_waypoint_rect(1.234, 0.777, 0.13, 0.1);
    CHECK(max_error(dead_reckon(odd), truth_positions(odd)) < 4 * 2 * 0.13 * 0.1);
  }
}

TEST_SUITE("disturbance") {
  TEST_CASE("zero disturbance is the identity") {
    const auto s = gen_circle(1.0, 0.1, 0.1);
    const auto d = add_disturbance(s, noise_only(0.0, 3));
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(d[k].vx_body == s[k].vx_body);
      CHECK(d[k].vy_body == s[k].vy_body);
    }
  }

  TEST_CASE("truth is untouched") {
    const auto s = gen_waypoint_rect(2.0, 1.0, 0.1, 0.1);
    const auto d = add_disturbance(s, DisturbanceSpec{});
    std::size_t changed = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(*d[k].truth_x == *s[k].truth_x);
      CHECK(*d[k].truth_y == *s[k].truth_y);
      CHECK(d[k].t == s[k].t);
      CHECK(d[k].psi == s[k].psi);
      changed += d[k].vx_body != s[k].vx_body;
    }
    CHECK(changed > s.size() / 2);
  }

  TEST_CASE("1 Hz wave repeats every 10 samples in the world frame") {
    const auto s = gen_circle(1.0, 0.1, 0.1);
    DisturbanceSpec spec;
    spec.noise_std = 0.0;
    spec.wave_dir = 0.4;
    const auto d = add_disturbance(s, spec);
    std::vector<Vec2> added(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      added[k] = body_to_world({d[k].vx_body, d[k].vy_body}, d[k].psi) -
                 body_to_world({s[k].vx_body, s[k].vy_body}, s[k].psi);
    }
    double peak = 0.0;
    for (std::size_t k = 0; k + 10 < s.size(); ++k) {
      CHECK((added[k + 10] - added[k]).norm() < 1e-12);
      peak = std::max(peak, added[k].norm());
      CHECK(std::abs(added[k].x * std::sin(0.4) - added[k].y * std::cos(0.4)) < 1e-12);
    }
    CHECK(peak <= 0.02);
    CHECK(peak > 0.019);
  }

  TEST_CASE("noise is seeded") {
    const auto s = straight(0.1, 200);
    const auto a = add_disturbance(s, DisturbanceSpec{});
    const auto b = add_disturbance(s, DisturbanceSpec{});
    DisturbanceSpec other;
    other.seed = 2;
    const auto c = add_disturbance(s, other);
    bool differs = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      CHECK(a[k].vx_body == b[k].vx_body);
      CHECK(a[k].vy_body == b[k].vy_body);
      differs = differs || a[k].vx_body != c[k].vx_body;
    }
    CHECK(differs);
  }
}

TEST_SUITE("baselines") {
  TEST_CASE("dead reckoning of constant velocity is exact") {
    const auto s = straight(0.07, 300);
    const auto est = dead_reckon(s);
    CHECK(compare(est, truth_positions(s)).max_error < 1e-12);
  }

  TEST_CASE("zero velocity stays home") {
    const auto est = dead_reckon(straight(0.0, 50));
    for (const auto& p : est) {
      CHECK(p.x == 0.0);
      CHECK(p.y == 0.0);
    }
  }

  TEST_CASE("Kalman filter with trusted measurements is dead reckoning") {
    for (const auto& s : {gen_circle(1.5, 0.1, 0.1), gen_waypoint_rect(4.0, 2.0, 0.1, 0.1)}) {
      CHECK(max_error(kf_velocity_baseline(s, 1e-14, 1e-7), dead_reckon(s)) < 1e-6);
    }
  }

  TEST_CASE("Kalman filter beats dead reckoning on noisy constant velocity") {
    const auto s = straight(0.1, 600);
    const auto truth = truth_positions(s);
    std::vector<double> kf_rmse, dr_rmse;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto noisy = add_disturbance(s, noise_only(0.01, seed));
      kf_rmse.push_back(compare(kf_velocity_baseline(noisy, 1e-4, 1e-7), truth).rmse);
      dr_rmse.push_back(compare(dead_reckon(noisy), truth).rmse);
    }
    CHECK(median(kf_rmse) < median(dr_rmse));
  }

  TEST_CASE("Kalman filter beats dead reckoning on a turning path") {
    const auto s = gen_circle(1.5, 0.1, 0.1);
    const auto truth = truth_positions(s);
    std::vector<double> kf_rmse, dr_rmse;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto noisy = add_disturbance(s, noise_only(0.01, seed));
      kf_rmse.push_back(compare(kf_velocity_baseline(noisy, 1e-4, 1e-7), truth).rmse);
      dr_rmse.push_back(compare(dead_reckon(noisy), truth).rmse);
    }
    CHECK(median(kf_rmse) < 0.9 * median(dr_rmse));
  }

  TEST_CASE("Kalman filter drifts less when stationary") {
    const auto s = straight(0.0, 600);
    const auto truth = truth_positions(s);
    std::vector<double> kf_final, dr_final;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const auto noisy = add_disturbance(s, noise_only(0.01, seed));
      kf_final.push_back(compare(kf_velocity_baseline(noisy, 1e-4, 1e-7), truth).final_error);
      dr_final.push_back(compare(dead_reckon(noisy), truth).final_error);
    }
    CHECK(median(kf_final) < median(dr_final));
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("identical sequences score zero") {
    const auto truth = truth_positions(gen_circle(1.0, 0.1, 0.1));
    const ErrorReport r = compare(truth, truth);
    CHECK(r.rmse == 0.0);
    CHECK(r.final_error == 0.0);
    CHECK(r.max_error == 0.0);
    CHECK(r.drift_per_meter == 0.0);
    CHECK(r.path_length > 6.0);
  }

  TEST_CASE("constant offset") {
    auto truth = truth_positions(gen_circle(1.0, 0.1, 0.1));
    auto est = truth;
    for (auto& p : est) p.x += 1.0;
    const ErrorReport r = compare(est, truth);
    CHECK(r.rmse == Approx(1.0));
    CHECK(r.max_error == Approx(1.0));
    CHECK(r.final_error == Approx(1.0));
    CHECK(r.drift_per_meter == Approx(r.final_error / r.path_length));
  }

  TEST_CASE("reversed closed loop") {
    const std::vector<PositionEstimate> truth{{0, 0, 1}, {1, 0, 2}, {1, 1, 3}, {0, 1, 4}, {0, 0, 5}};
    std::vector<PositionEstimate> est{{0, 0, 1}, {0, 1, 2}, {1, 1, 3}, {1, 0, 4}, {0, 0, 5}};
    const ErrorReport r = compare(est, truth);
    CHECK(r.final_error == 0.0);
    CHECK(r.rmse == Approx(std::sqrt(4.0 / 5.0)));
    CHECK(r.path_length == Approx(4.0));
    CHECK(r.max_error == Approx(std::sqrt(2.0)));
  }

  TEST_CASE("mismatched inputs are rejected") {
    const std::vector<PositionEstimate> a{{0, 0, 0.1}, {0, 0, 0.2}};
    const std::vector<PositionEstimate> b{{0, 0, 0.1}};
    const std::vector<PositionEstimate> c{{0, 0, 0.1}, {0, 0, 0.3}};
    for (const auto* other : {&b, &c}) {
      try {
        compare(a, *other);
        FAIL("accepted mismatched sequences");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LengthMismatch);
      }
    }
  }
}
