#pragma once

namespace ddqn::reward {

/// How an episode ended.
enum class Outcome { kGoal, kCollision, kTimeout };

const char* to_string(Outcome o);

struct RewardConfig {
  double goal_reward = 200.0;
  double collision_reward = -200.0;
  double timeout_reward = -200.0;
  double angle_scale = 5.0;           // peak of the angular factor
  double distance_exponent_cap = 8.0; // caps the distance factor at 2^cap
};

void validate(const RewardConfig& cfg);

/// Inputs to the shaped step reward, measured after the action was applied.
struct RewardInputs {
  double heading_error = 0.0;    // rad, (-pi, pi]
  int action = 2;                // 0..4
  double current_distance = 0.0; // m, distance to goal now
  double start_distance = 0.0;   // m, distance to goal at episode start
};

/// Heading error adjusted by the action's angular offset
/// delta_a = (action - 2) * pi/8; action 2 leaves the heading untouched.
double prospective_heading(double heading_error, int action);

/// Angular factor: scale * (1 - 2|theta|/pi). Positive iff |theta| < pi/2,
/// peaks at alignment, symmetric, strictly decreasing in |theta|.
double angular_reward(double theta, double angle_scale = 5.0);

/// Distance factor: 2^min(start/current, cap). Above 2 once the robot is
/// closer than at episode start, in (1, 2] otherwise.
double distance_reward(double current_distance, double start_distance,
                       double exponent_cap = 8.0);

/// Shaped per-step reward: distance factor times the angular factor of the
/// prospective heading.
double step_reward(const RewardInputs& in, const RewardConfig& cfg);

/// Reward that replaces the shaped reward on terminal steps.
double terminal_reward(Outcome outcome, const RewardConfig& cfg);

}  // namespace ddqn::reward
