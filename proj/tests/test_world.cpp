#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ddqn/angles.hpp"
#include "ddqn/world.hpp"

using namespace ddqn;
using namespace ddqn::world;

namespace {

// Independent oracle for the closed-form arc: explicit Euler with many
// substeps.
Pose euler_integrate(Pose p, double v, double w, double dt, int substeps) {
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    p.x += v * h * std::cos(p.yaw);
    p.y += v * h * std::sin(p.yaw);
    p.yaw += w * h;
  }
  p.yaw = wrap_angle(p.yaw);
  return p;
}

WorldMap empty_square(double half) {
  WorldMap map;
  map.bounds = {-half, -half, half, half};
  return map;
}

}  // namespace

TEST_CASE("integrate_motion straight line") {
  const Pose out = integrate_motion({0, 0, 0}, {0.15, 0.0, 0.2});
  CHECK(out.x == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(out.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.yaw == doctest::Approx(0.0));
}

TEST_CASE("integrate_motion pure rotation") {
  const Pose out = integrate_motion({0, 0, 0}, {0.0, 1.5, 0.2});
  CHECK(out.x == doctest::Approx(0.0));
  CHECK(out.y == doctest::Approx(0.0));
  CHECK(out.yaw == doctest::Approx(0.3));
}

TEST_CASE("integrate_motion arc matches the Euler oracle") {
  const Pose out = integrate_motion({0, 0, 0}, {0.15, 1.5, 0.2});
  const Pose oracle = euler_integrate({0, 0, 0}, 0.15, 1.5, 0.2, 10000);
  CHECK(std::abs(out.x - 0.029552) < 1e-6);
  CHECK(std::abs(out.y - 0.0044664) < 1e-6);
  CHECK(out.yaw == doctest::Approx(0.3));
  CHECK(std::abs(out.x - oracle.x) < 1e-5);
  CHECK(std::abs(out.y - oracle.y) < 1e-5);
}

TEST_CASE("integrate_motion conserves the turn radius") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Pose p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-kPi, kPi)};
    const double v = rng.uniform(0.01, 0.5);
    const double w = rng.uniform(0.1, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const double dt = rng.uniform(0.05, 1.0);
    const double radius = v / w;
    // arc center sits at distance |radius| to the left of the heading
    const double cx = p.x - radius * std::sin(p.yaw);
    const double cy = p.y + radius * std::cos(p.yaw);
    const Pose q = integrate_motion(p, {v, w, dt});
    const double before = std::hypot(p.x - cx, p.y - cy);
    const double after = std::hypot(q.x - cx, q.y - cy);
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("integrate_motion rejects bad dt") {
  CHECK_THROWS_AS(integrate_motion({0, 0, 0}, {0.15, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_motion({0, 0, 0}, {0.15, 0.0, -0.1}), std::invalid_argument);
}

TEST_CASE("cast_ray hits walls and obstacles") {
  WorldMap map = empty_square(2.0);
  CHECK(cast_ray(map, 0, 0, 0) == doctest::Approx(2.0));
  CHECK(cast_ray(map, 0, 0, kPi / 4) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));

  map.circles.push_back({1.0, 0.0, 0.5});
  CHECK(cast_ray(map, 0, 0, 0) == doctest::Approx(0.5));

  WorldMap rect_map = empty_square(2.0);
  rect_map.rects.push_back({0.5, -0.25, 1.0, 0.25});
  CHECK(cast_ray(rect_map, 0, 0, 0) == doctest::Approx(0.5));
  CHECK(cast_ray(rect_map, 0, 0, kPi) == doctest::Approx(2.0));
}

TEST_CASE("cast_ray clamps to max range") {
  WorldMap map = empty_square(10.0);
  CHECK(cast_ray(map, 0, 0, 1.234) == doctest::Approx(3.5));
}

TEST_CASE("cast_ray is monotone under obstacle removal") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    WorldMap map = empty_square(2.0);
    const int n = 1 + static_cast<int>(rng.uniform_int(4));
    for (int i = 0; i < n; ++i)
      map.circles.push_back({rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4),
                             rng.uniform(0.05, 0.3)});
    const double angle = rng.uniform(-kPi, kPi);
    double ox = 0.0, oy = 0.0;
    if (!in_free_space(map, ox, oy, 0.0)) continue;
    const double with_all = cast_ray(map, ox, oy, angle);
    WorldMap fewer = map;
    fewer.circles.erase(fewer.circles.begin() + static_cast<long>(rng.uniform_int(n)));
    CHECK(cast_ray(fewer, ox, oy, angle) >= with_all - 1e-12);
  }
}

TEST_CASE("scan_lidar beams and clamping") {
  WorldMap map = empty_square(2.0);
  const auto scan = scan_lidar(map, {0, 0, 0});
  REQUIRE(scan.size() == 24);
  CHECK(scan[0] == doctest::Approx(2.0));
  CHECK(scan[6] == doctest::Approx(2.0));   // +90 degrees
  CHECK(scan[12] == doctest::Approx(2.0));  // behind

  WorldMap clamped = map;
  clamped.lidar_max_range = 1.5;
  for (double r : scan_lidar(clamped, {0, 0, 0})) CHECK(r == doctest::Approx(1.5));

  const auto off_center = scan_lidar(map, {1.5, 0, 0});
  CHECK(off_center[0] == doctest::Approx(0.5));
  CHECK(off_center[12] == doctest::Approx(3.5));  // 3.5 m to the far wall, equals max range
}

TEST_CASE("scan_lidar ranges stay in (0, max]") {
  Rng rng(5);
  WorldMap map = empty_square(2.0);
  map.circles.push_back({0.8, 0.8, 0.3});
  map.rects.push_back({-1.2, -1.2, -0.6, -0.8});
  for (int i = 0; i < 200; ++i) {
    const Pose p{rng.uniform(-1.9, 1.9), rng.uniform(-1.9, 1.9), rng.uniform(-kPi, kPi)};
    if (!in_free_space(map, p.x, p.y, 0.0)) continue;
    for (double r : scan_lidar(map, p)) {
      CHECK(r > 0.0);
      CHECK(r <= map.lidar_max_range);
    }
  }
}

TEST_CASE("scan of a rotated pose is a cyclic shift: 24-fold symmetric ring") {
  WorldMap map;
  map.bounds = {-10, -10, 10, 10};
  for (int k = 0; k < 24; ++k) {
    const double a = k * (kTwoPi / 24);
    map.circles.push_back({2.0 * std::cos(a), 2.0 * std::sin(a), 0.2});
  }
  const Pose p0{0, 0, 0.1};
  const Pose p1{0, 0, 0.1 + kTwoPi / 24};
  const auto s0 = scan_lidar(map, p0);
  const auto s1 = scan_lidar(map, p1);
  for (int i = 0; i < 24; ++i) CHECK(std::abs(s1[i] - s0[(i + 1) % 24]) < 1e-9);
}

TEST_CASE("check_collision boundary is strict") {
  std::vector<double> scan(24, 3.5);
  CHECK_FALSE(check_collision(scan, 0.13));
  scan[7] = 0.12;
  CHECK(check_collision(scan, 0.13));
  scan[7] = 0.13;
  CHECK_FALSE(check_collision(scan, 0.13));
}

TEST_CASE("goal_reached boundary is strict") {
  CHECK(goal_reached({0, 0, 0.4}, {0, 0}, 0.2));
  CHECK_FALSE(goal_reached({0, 0, 0}, {1, 0}, 0.2));
  CHECK_FALSE(goal_reached({0, 0, 0}, {0.2, 0}, 0.2));
}

TEST_CASE("reset_episode is deterministic per seed") {
  const WorldMap map = default_arena();
  Rng a(42), b(42);
  const auto [pa, ga] = reset_episode(map, a);
  const auto [pb, gb] = reset_episode(map, b);
  CHECK(pa.x == pb.x);
  CHECK(pa.y == pb.y);
  CHECK(pa.yaw == pb.yaw);
  CHECK(ga.x == gb.x);
  CHECK(ga.y == gb.y);
}

TEST_CASE("reset_episode respects clearance and start distance") {
  WorldMap map = default_arena();
  map.circles.push_back({1.0, 1.0, 0.3});
  Rng rng(3);
  const double clearance = map.robot_radius + map.goal_threshold;
  for (int i = 0; i < 500; ++i) {
    const auto [pose, goal] = reset_episode(map, rng);
    CHECK(std::hypot(goal.x - pose.x, goal.y - pose.y) >= 2 * map.goal_threshold);
    CHECK(in_free_space(map, goal.x, goal.y, clearance));
  }
}

TEST_CASE("reset_episode fails on an over-crowded map") {
  WorldMap map = default_arena();
  map.start = {-1.8, -1.8, 0};
  map.circles.push_back({0.0, 0.0, 1.9});  // covers nearly all of the arena
  Rng rng(1);
  CHECK_THROWS_AS(reset_episode(map, rng), SamplingExhausted);
}

TEST_CASE("reset_episode goal coordinates are uniform per axis") {
  const WorldMap map = default_arena();
  const double clearance = map.robot_radius + map.goal_threshold;
  const double lo = map.bounds.xmin + clearance;
  const double hi = map.bounds.xmax - clearance;
  Rng rng(2024);
  int bins_x[4] = {0, 0, 0, 0};
  int bins_y[4] = {0, 0, 0, 0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto [pose, goal] = reset_episode(map, rng);
    const int bx = std::min(3, static_cast<int>((goal.x - lo) / (hi - lo) * 4));
    const int by = std::min(3, static_cast<int>((goal.y - lo) / (hi - lo) * 4));
    ++bins_x[bx];
    ++bins_y[by];
  }
  for (int b = 0; b < 4; ++b) {
    CHECK(std::abs(bins_x[b] / static_cast<double>(n) - 0.25) < 0.02);
    CHECK(std::abs(bins_y[b] / static_cast<double>(n) - 0.25) < 0.02);
  }
}

TEST_CASE("map parsing round trip and validation") {
  std::istringstream in(
      "# demo arena\n"
      "bounds -2 -2 2 2\n"
      "start 0.5 0 1.5708\n"
      "circle 1.0 1.0 0.25\n"
      "rect -1.5 -1.5 -1.0 -1.0\n");
  const WorldMap map = parse_map(in);
  CHECK(map.bounds.xmax == 2.0);
  CHECK(map.start.x == 0.5);
  REQUIRE(map.circles.size() == 1);
  REQUIRE(map.rects.size() == 1);

  std::istringstream bad_kind("bounds -2 -2 2 2\nwall 0 0 1 1\n");
  CHECK_THROWS_AS(parse_map(bad_kind), MapError);
  std::istringstream no_bounds("circle 0 0 1\n");
  CHECK_THROWS_AS(parse_map(no_bounds), MapError);
  std::istringstream outside("bounds -1 -1 1 1\ncircle 0.9 0 0.5\n");
  CHECK_THROWS_AS(parse_map(outside), MapError);
  std::istringstream start_blocked("bounds -1 -1 1 1\ncircle 0 0 0.5\nstart 0 0 0\n");
  CHECK_THROWS_AS(parse_map(start_blocked), MapError);
  CHECK_THROWS_AS(load_map("/nonexistent/path.map"), MapError);
}

TEST_CASE("validate rejects threshold misorder") {
  WorldMap map = default_arena();
  map.goal_threshold = 0.1;  // below collision_threshold
  CHECK_THROWS_AS(validate(map), MapError);
}
