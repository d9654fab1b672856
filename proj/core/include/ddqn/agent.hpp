#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ddqn/net.hpp"
#include "ddqn/replay.hpp"
#include "ddqn/rng.hpp"

namespace ddqn::agent {

/// Which Bellman target the train step uses.
///   kVanillaMax: y = r + gamma * max_a Q_target(s', a)
///   kDoubleQ:    y = r + gamma * Q_target(s', argmax_a Q_online(s', a))
enum class TargetRule { kVanillaMax, kDoubleQ };

struct Hyperparams {
  int episode_step = 500;        // per-episode step limit
  int target_update = 2000;      // hard target sync period, in train steps
  double discount_factor = 0.99;
  double learning_rate = 0.00025;
  double epsilon = 1.0;
  double epsilon_decay = 0.99;   // applied once per episode end
  double epsilon_min = 0.05;
  int batch_size = 64;
  int train_start = 64;          // train once the memory holds this many
  std::size_t memory = 1000000;
};

void validate(const Hyperparams& hp);

/// Five fixed steering actions at constant forward speed. Index 2 is
/// straight ahead; the table is antisymmetric about it.
struct ActionTable {
  std::array<double, 5> angular_velocity{-1.5, -0.75, 0.0, 0.75, 1.5};
  double linear_velocity = 0.15;
  static constexpr int size() { return 5; }
};

struct AgentState {
  net::NetworkParams online;
  net::NetworkParams target;
  net::OptimizerState opt;
  double epsilon = 1.0;
  std::uint64_t global_step = 0;
  TargetRule rule = TargetRule::kDoubleQ;
};

/// Fresh agent: online net initialized from the rng, target = copy of online.
AgentState make_agent(const net::NetworkSpec& spec, const Hyperparams& hp, TargetRule rule,
                      Rng& rng);

/// Agent restored from a checkpoint (online = target = stored params).
AgentState make_agent_from_checkpoint(const net::Checkpoint& ck, TargetRule rule);

/// Epsilon-greedy: uniform random index with probability epsilon, otherwise
/// argmax with ties broken to the lowest index. Consumes no randomness when
/// epsilon is zero.
int select_action(std::span<const double> q, double epsilon, Rng& rng);

/// Per-item Bellman targets under the given rule; done items bootstrap
/// nothing (y = r).
std::vector<double> compute_targets(const std::vector<replay::Transition>& batch,
                                    const net::NetworkParams& online,
                                    const net::NetworkParams& target, double gamma,
                                    TargetRule rule);

/// One learning step: returns std::nullopt (and leaves everything untouched)
/// while the memory holds fewer than train_start transitions; otherwise
/// samples a batch, applies one RMSProp step on the online network, bumps
/// global_step and hard-syncs the target every target_update steps. Returns
/// the batch TD loss.
std::optional<double> train_step(AgentState& agent, const Hyperparams& hp,
                                 const replay::ReplayMemory& mem, Rng& rng);

/// target <- copy of online.
void sync_target(AgentState& agent);

/// epsilon <- max(epsilon_min, epsilon * epsilon_decay); once per episode end.
void decay_epsilon(AgentState& agent, const Hyperparams& hp);

/// Dense state-action value table, Q[s][a].
using QTable = std::vector<std::vector<double>>;

/// Tabular Q-learning update:
///   Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
/// Exposed publicly; the acceptance oracle iterates it against value
/// iteration. Rejects alpha outside [0, 1].
void tabular_q_update(QTable& q, int s, int a, double r, int s_next, double alpha, double gamma);

}  // namespace ddqn::agent
