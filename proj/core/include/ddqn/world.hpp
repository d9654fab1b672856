#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddqn/rng.hpp"

namespace ddqn::world {

/// Robot position and heading in the world frame. yaw is kept in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

struct Goal {
  double x = 0.0;
  double y = 0.0;
};

struct Circle {
  double cx = 0.0;
  double cy = 0.0;
  double r = 0.0;
};

struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
};

/// One control step: body velocities held constant for dt seconds.
struct StepCommand {
  double linear_velocity = 0.15;   // m/s
  double angular_velocity = 0.0;   // rad/s
  double dt = 0.2;                 // s
};

/// Arena bounds, static obstacles, fixed start pose and sensor limits.
struct WorldMap {
  Rect bounds{-2.0, -2.0, 2.0, 2.0};
  std::vector<Circle> circles;
  std::vector<Rect> rects;
  Pose start{0.0, 0.0, 0.0};
  double robot_radius = 0.105;        // m
  double lidar_max_range = 3.5;       // m
  int lidar_beam_count = 24;
  double collision_threshold = 0.13;  // m, on the min lidar range
  double goal_threshold = 0.2;        // m, Euclidean distance to goal
};

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Goal rejection sampling ran out of attempts (over-crowded map).
struct SamplingExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 4 m x 4 m walled square, start at the center, default sensor limits.
WorldMap default_arena();

/// Parses the line-oriented map format:
///   bounds xmin ymin xmax ymax
///   circle cx cy r
///   rect xmin ymin xmax ymax
///   start x y yaw
/// '#' starts a comment; blank lines are skipped; SI units throughout.
WorldMap parse_map(std::istream& in);
WorldMap load_map(const std::string& path);

/// Throws MapError when a map invariant is violated (obstacles outside
/// bounds, thresholds out of order, start inside an obstacle, ...).
void validate(const WorldMap& map);

/// Unicycle kinematics over one step: exact circular arc when |omega| is
/// above 1e-9 rad/s, straight line otherwise. Resulting yaw is wrapped.
Pose integrate_motion(const Pose& pose, const StepCommand& cmd);

/// Distance along the ray from (ox, oy) at `angle` to the nearest obstacle
/// surface or boundary wall, clamped to lidar_max_range.
double cast_ray(const WorldMap& map, double ox, double oy, double angle);

/// Full ring scan: beam i is cast at pose.yaw + i * (2*pi / beam_count),
/// counterclockwise, beam 0 straight ahead.
std::vector<double> scan_lidar(const WorldMap& map, const Pose& pose);

/// True iff the smallest return in the scan is below the threshold (strict).
bool check_collision(const std::vector<double>& scan, double collision_threshold);

/// True iff the pose is strictly within goal_threshold of the goal.
bool goal_reached(const Pose& pose, const Goal& goal, double goal_threshold);

/// True when (x, y) keeps at least `clearance` of space to the walls and to
/// every obstacle surface.
bool in_free_space(const WorldMap& map, double x, double y, double clearance = 0.0);

/// Places the robot at the map's fixed start pose and rejection-samples a
/// goal uniformly over free space with clearance robot_radius +
/// goal_threshold and at least 2 * goal_threshold away from the start.
/// Throws SamplingExhausted after 10,000 rejected draws.
std::pair<Pose, Goal> reset_episode(const WorldMap& map, Rng& rng);

}  // namespace ddqn::world
