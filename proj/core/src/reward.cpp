#include "ddqn/reward.hpp"

#include <cmath>
#include <stdexcept>

#include "ddqn/angles.hpp"

namespace ddqn::reward {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kGoal: return "goal";
    case Outcome::kCollision: return "collision";
    case Outcome::kTimeout: return "timeout";
  }
  return "unknown";
}

void validate(const RewardConfig& cfg) {
  if (!(cfg.goal_reward > 0.0 && cfg.collision_reward < 0.0))
    throw std::invalid_argument("reward config: need goal_reward > 0 > collision_reward");
  if (!(cfg.timeout_reward < 0.0))
    throw std::invalid_argument("reward config: timeout_reward must be negative");
  if (!(cfg.angle_scale > 0.0))
    throw std::invalid_argument("reward config: angle_scale must be positive");
  if (!(cfg.distance_exponent_cap > 0.0))
    throw std::invalid_argument("reward config: distance_exponent_cap must be positive");
}

double prospective_heading(double heading_error, int action) {
  if (action < 0 || action > 4)
    throw std::invalid_argument("prospective_heading: action must be in 0..4");
  const double offset = (action - 2) * (kPi / 8.0);
  return wrap_angle(heading_error - offset);
}

double angular_reward(double theta, double angle_scale) {
  return angle_scale * (1.0 - 2.0 * std::abs(theta) / kPi);
}

double distance_reward(double current_distance, double start_distance, double exponent_cap) {
  if (!(current_distance > 0.0) || !(start_distance > 0.0))
    throw std::invalid_argument("distance_reward: distances must be positive");
  const double exponent = std::min(start_distance / current_distance, exponent_cap);
  return std::exp2(exponent);
}

double step_reward(const RewardInputs& in, const RewardConfig& cfg) {
  const double theta = prospective_heading(in.heading_error, in.action);
  return distance_reward(in.current_distance, in.start_distance, cfg.distance_exponent_cap) *
         angular_reward(theta, cfg.angle_scale);
}

double terminal_reward(Outcome outcome, const RewardConfig& cfg) {
  switch (outcome) {
    case Outcome::kGoal: return cfg.goal_reward;
    case Outcome::kCollision: return cfg.collision_reward;
    case Outcome::kTimeout: return cfg.timeout_reward;
  }
  throw std::invalid_argument("terminal_reward: unknown outcome");
}

}  // namespace ddqn::reward
