#pragma once

#include <vector>

#include "ddqn/angles.hpp"
#include "ddqn/world.hpp"

namespace ddqn::state {

inline constexpr int kLidarBeams = 24;
inline constexpr int kStateSize = kLidarBeams + 2;  // 24 ranges + distance + heading error

/// Bearing to the goal relative to the robot's heading, wrapped to (-pi, pi].
/// Rejects a pose exactly on the goal (the bearing is undefined there).
double heading_error(const world::Pose& pose, const world::Goal& goal);

/// Euclidean distance from the pose to the goal.
double goal_distance(const world::Pose& pose, const world::Goal& goal);

/// 26-dimensional observation: [scan(0..23), goal distance, heading error],
/// raw physical units (meters / radians), no normalization.
std::vector<double> build_state(const std::vector<double>& scan, const world::Pose& pose,
                                const world::Goal& goal);

}  // namespace ddqn::state
