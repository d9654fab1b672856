#include "ddqn/state.hpp"

#include <cmath>
#include <stdexcept>

namespace ddqn::state {

double heading_error(const world::Pose& pose, const world::Goal& goal) {
  const double dx = goal.x - pose.x;
  const double dy = goal.y - pose.y;
  if (dx == 0.0 && dy == 0.0)
    throw std::invalid_argument("heading_error: pose coincides with goal");
  return wrap_angle(std::atan2(dy, dx) - pose.yaw);
}

double goal_distance(const world::Pose& pose, const world::Goal& goal) {
  return std::hypot(goal.x - pose.x, goal.y - pose.y);
}

std::vector<double> build_state(const std::vector<double>& scan, const world::Pose& pose,
                                const world::Goal& goal) {
  if (scan.size() != static_cast<std::size_t>(kLidarBeams))
    throw std::invalid_argument("build_state: scan must have 24 entries");
  std::vector<double> s;
  s.reserve(kStateSize);
  s.insert(s.end(), scan.begin(), scan.end());
  s.push_back(goal_distance(pose, goal));
  s.push_back(heading_error(pose, goal));
  return s;
}

}  // namespace ddqn::state
