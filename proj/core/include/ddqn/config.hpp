#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ddqn/harness.hpp"

namespace ddqn::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the line-oriented `key = value` run configuration. Recognized
/// keys: episode_step, target_update, discount_factor, learning_rate,
/// epsilon, epsilon_decay, epsilon_min, batch_size, train_start, memory,
/// rule, map, episodes, seed, dt, goal_reward, collision_reward,
/// timeout_reward, angle_scale, distance_exponent_cap, normalize_state,
/// checkpoint_every, out_dir. Unknown or duplicate keys are rejected;
/// missing keys keep the shipped defaults. '#' starts a comment.
harness::RunConfig parse_config(std::istream& in);
harness::RunConfig load_config(const std::string& path);

/// Canonical echo of the effective configuration; parsing it back
/// reproduces the run byte-for-byte.
void write_effective_config(std::ostream& out, const harness::RunConfig& cfg);

const char* rule_name(agent::TargetRule rule);
agent::TargetRule parse_rule(const std::string& name);

}  // namespace ddqn::cli
