#include "ddqn/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ddqn/angles.hpp"

namespace ddqn::world {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_rect_distance(double x, double y, const Rect& r) {
  const double dx = std::max({r.xmin - x, 0.0, x - r.xmax});
  const double dy = std::max({r.ymin - y, 0.0, y - r.ymax});
  return std::hypot(dx, dy);
}

// Entry/exit parameters of a ray against one axis slab. Returns false when
// the ray is parallel to the slab and outside it.
bool slab_interval(double o, double d, double lo, double hi, double& tlo, double& thi) {
  if (std::abs(d) < 1e-15) {
    if (o < lo || o > hi) return false;
    tlo = -kInf;
    thi = kInf;
    return true;
  }
  const double t1 = (lo - o) / d;
  const double t2 = (hi - o) / d;
  tlo = std::min(t1, t2);
  thi = std::max(t1, t2);
  return true;
}

}  // namespace

WorldMap default_arena() {
  WorldMap map;
  map.bounds = {-2.0, -2.0, 2.0, 2.0};
  map.start = {0.0, 0.0, 0.0};
  return map;
}

WorldMap parse_map(std::istream& in) {
  WorldMap map = default_arena();
  map.bounds = {0.0, 0.0, 0.0, 0.0};
  bool saw_bounds = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank or comment-only line
    auto fail = [&](const char* what) -> void {
      throw MapError("map line " + std::to_string(lineno) + ": " + what);
    };
    if (kind == "bounds") {
      Rect b;
      if (!(ls >> b.xmin >> b.ymin >> b.xmax >> b.ymax)) fail("bounds needs xmin ymin xmax ymax");
      map.bounds = b;
      saw_bounds = true;
    } else if (kind == "circle") {
      Circle c;
      if (!(ls >> c.cx >> c.cy >> c.r)) fail("circle needs cx cy r");
      map.circles.push_back(c);
    } else if (kind == "rect") {
      Rect r;
      if (!(ls >> r.xmin >> r.ymin >> r.xmax >> r.ymax)) fail("rect needs xmin ymin xmax ymax");
      map.rects.push_back(r);
    } else if (kind == "start") {
      Pose p;
      if (!(ls >> p.x >> p.y >> p.yaw)) fail("start needs x y yaw");
      p.yaw = wrap_angle(p.yaw);
      map.start = p;
    } else {
      fail("unknown record kind");
    }
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
  }
  if (!saw_bounds) throw MapError("map has no bounds record");
  validate(map);
  return map;
}

WorldMap load_map(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MapError("cannot open map file: " + path);
  return parse_map(f);
}

void validate(const WorldMap& map) {
  const Rect& b = map.bounds;
  if (!(b.xmin < b.xmax && b.ymin < b.ymax)) throw MapError("bounds are empty or inverted");
  if (!(map.robot_radius > 0.0)) throw MapError("robot_radius must be positive");
  if (!(map.collision_threshold > 0.0 && map.collision_threshold < map.lidar_max_range))
    throw MapError("collision_threshold must lie in (0, lidar_max_range)");
  if (!(map.goal_threshold > map.collision_threshold))
    throw MapError("goal_threshold must exceed collision_threshold");
  if (map.lidar_beam_count <= 0) throw MapError("lidar_beam_count must be positive");
  for (const Circle& c : map.circles) {
    if (!(c.r > 0.0)) throw MapError("circle radius must be positive");
    if (c.cx - c.r < b.xmin || c.cx + c.r > b.xmax || c.cy - c.r < b.ymin || c.cy + c.r > b.ymax)
      throw MapError("circle obstacle extends outside bounds");
  }
  for (const Rect& r : map.rects) {
    if (!(r.xmin < r.xmax && r.ymin < r.ymax)) throw MapError("rect obstacle is empty or inverted");
    if (r.xmin < b.xmin || r.xmax > b.xmax || r.ymin < b.ymin || r.ymax > b.ymax)
      throw MapError("rect obstacle extends outside bounds");
  }
  if (!in_free_space(map, map.start.x, map.start.y))
    throw MapError("start pose is not in free space");
}

Pose integrate_motion(const Pose& pose, const StepCommand& cmd) {
  if (!(cmd.dt > 0.0) || !std::isfinite(cmd.dt) || !std::isfinite(cmd.linear_velocity) ||
      !std::isfinite(cmd.angular_velocity))
    throw std::invalid_argument("integrate_motion: invalid step command");
  const double v = cmd.linear_velocity;
  const double w = cmd.angular_velocity;
  const double dt = cmd.dt;
  Pose out;
  if (std::abs(w) > 1e-9) {
    const double radius = v / w;
    out.x = pose.x + radius * (std::sin(pose.yaw + w * dt) - std::sin(pose.yaw));
    out.y = pose.y - radius * (std::cos(pose.yaw + w * dt) - std::cos(pose.yaw));
  } else {
    out.x = pose.x + v * dt * std::cos(pose.yaw);
    out.y = pose.y + v * dt * std::sin(pose.yaw);
  }
  out.yaw = wrap_angle(pose.yaw + w * dt);
  return out;
}

double cast_ray(const WorldMap& map, double ox, double oy, double angle) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  double best = map.lidar_max_range;

  // Boundary walls: from inside, the exit parameter of the bounds slab.
  {
    double tx0, tx1, ty0, ty1;
    if (slab_interval(ox, dx, map.bounds.xmin, map.bounds.xmax, tx0, tx1) &&
        slab_interval(oy, dy, map.bounds.ymin, map.bounds.ymax, ty0, ty1)) {
      const double exit = std::min(tx1, ty1);
      if (exit > 0.0) best = std::min(best, exit);
    }
  }

  for (const Circle& c : map.circles) {
    const double fx = ox - c.cx;
    const double fy = oy - c.cy;
    const double b = fx * dx + fy * dy;
    const double q = fx * fx + fy * fy - c.r * c.r;
    const double disc = b * b - q;
    if (disc < 0.0) continue;
    const double t = -b - std::sqrt(disc);
    if (t > 0.0 && t < best) best = t;
  }

  for (const Rect& r : map.rects) {
    double tx0, tx1, ty0, ty1;
    if (!slab_interval(ox, dx, r.xmin, r.xmax, tx0, tx1)) continue;
    if (!slab_interval(oy, dy, r.ymin, r.ymax, ty0, ty1)) continue;
    const double tmin = std::max(tx0, ty0);
    const double tmax = std::min(tx1, ty1);
    if (tmax >= tmin && tmin > 0.0 && tmin < best) best = tmin;
  }

  return best;
}

std::vector<double> scan_lidar(const WorldMap& map, const Pose& pose) {
  std::vector<double> ranges(static_cast<std::size_t>(map.lidar_beam_count));
  const double step = kTwoPi / map.lidar_beam_count;
  for (int i = 0; i < map.lidar_beam_count; ++i)
    ranges[static_cast<std::size_t>(i)] = cast_ray(map, pose.x, pose.y, pose.yaw + i * step);
  return ranges;
}

bool check_collision(const std::vector<double>& scan, double collision_threshold) {
  return *std::min_element(scan.begin(), scan.end()) < collision_threshold;
}

bool goal_reached(const Pose& pose, const Goal& goal, double goal_threshold) {
  return std::hypot(goal.x - pose.x, goal.y - pose.y) < goal_threshold;
}

bool in_free_space(const WorldMap& map, double x, double y, double clearance) {
  const Rect& b = map.bounds;
  if (x < b.xmin + clearance || x > b.xmax - clearance || y < b.ymin + clearance ||
      y > b.ymax - clearance)
    return false;
  for (const Circle& c : map.circles) {
    if (std::hypot(x - c.cx, y - c.cy) < c.r + clearance) return false;
  }
  for (const Rect& r : map.rects) {
    if (point_rect_distance(x, y, r) < clearance ||
        (x >= r.xmin && x <= r.xmax && y >= r.ymin && y <= r.ymax))
      return false;
  }
  return true;
}

std::pair<Pose, Goal> reset_episode(const WorldMap& map, Rng& rng) {
  const double clearance = map.robot_radius + map.goal_threshold;
  const double lo_x = map.bounds.xmin + clearance;
  const double hi_x = map.bounds.xmax - clearance;
  const double lo_y = map.bounds.ymin + clearance;
  const double hi_y = map.bounds.ymax - clearance;
  if (lo_x >= hi_x || lo_y >= hi_y)
    throw SamplingExhausted("goal sampling: no room inside bounds at required clearance");
  const double min_start_dist = 2.0 * map.goal_threshold;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double gx = rng.uniform(lo_x, hi_x);
    const double gy = rng.uniform(lo_y, hi_y);
    if (std::hypot(gx - map.start.x, gy - map.start.y) < min_start_dist) continue;
    if (!in_free_space(map, gx, gy, clearance)) continue;
    return {map.start, Goal{gx, gy}};
  }
  throw SamplingExhausted("goal sampling exhausted after 10000 attempts");
}

}  // namespace ddqn::world
