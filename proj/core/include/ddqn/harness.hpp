#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddqn/agent.hpp"
#include "ddqn/net.hpp"
#include "ddqn/replay.hpp"
#include "ddqn/reward.hpp"
#include "ddqn/rng.hpp"
#include "ddqn/world.hpp"

namespace ddqn::harness {

struct EpisodeResult {
  int index = 0;            // 1-based episode number
  int steps = 0;
  double total_reward = 0.0;
  reward::Outcome outcome = reward::Outcome::kTimeout;
  double epsilon_at_end = 0.0;  // after the end-of-episode decay
  double wall_seconds = 0.0;
};

/// Everything one training/evaluation run needs. A fixed seed makes the
/// entire run deterministic (only wall_seconds varies between repeats).
struct RunConfig {
  std::string map_path;  // empty selects the built-in 4x4 arena
  agent::Hyperparams hp;
  reward::RewardConfig reward;
  agent::TargetRule rule = agent::TargetRule::kDoubleQ;
  int episodes = 300;
  std::uint64_t seed = 1;
  double dt = 0.2;
  int checkpoint_every = 100;
  std::string out_dir = "run_out";
  bool normalize_state = false;
  bool emit_trace = false;  // per-step reward trace next to the episode CSV
  net::NetworkSpec net_spec;
};

/// World plus the per-step constants of the control loop.
struct Environment {
  world::WorldMap map;
  reward::RewardConfig reward_cfg;
  agent::ActionTable actions;
  double dt = 0.2;
  int episode_step = 500;
  bool normalize_state = false;
};

Environment make_environment(const RunConfig& cfg);

/// Terminal precedence on a single step: collision beats goal beats timeout.
/// Empty optional when the episode continues.
std::optional<reward::Outcome> classify_outcome(bool collided, bool reached, bool timed_out);

/// One training episode: reset, then loop scan -> state -> epsilon-greedy
/// action -> motion -> rescan -> terminal check -> reward -> replay push ->
/// train step. Decays epsilon once at episode end. When step_rewards is
/// non-null every received reward is appended to it.
EpisodeResult run_episode(const Environment& env, agent::AgentState& ag,
                          const agent::Hyperparams& hp, replay::ReplayMemory& mem, Rng& rng,
                          std::vector<double>* step_rewards = nullptr);

struct TrainRunResult {
  std::vector<EpisodeResult> episodes;
  net::NetworkParams final_params;
};

/// Full training run: one persistent agent and memory over cfg.episodes
/// episodes. Writes out_dir/episodes.csv, periodic checkpoints and a final
/// checkpoint (and out_dir/trace.csv when emit_trace is set).
TrainRunResult train_run(const RunConfig& cfg);

struct EvalStats {
  double success_rate = 0.0;
  double mean_reward = 0.0;
  double mean_steps = 0.0;
};

/// Greedy policy (epsilon 0), no learning, no replay pushes.
EvalStats evaluate(const net::NetworkParams& params, const Environment& env, int episodes,
                   std::uint64_t seed);

struct CompareResult {
  std::vector<EpisodeResult> vanilla;
  std::vector<EpisodeResult> double_q;
  double final_mean_vanilla = 0.0;  // mean total reward over the last 100 episodes
  double final_mean_double = 0.0;
};

/// Seed-matched pair of training runs (VanillaMax vs DoubleQ) under one
/// configuration. Writes out_dir/comparison.csv with columns
/// episode,reward_vanilla,reward_double,movavg_vanilla,movavg_double
/// (moving-average window 50).
CompareResult compare_rules(const RunConfig& cfg);

/// Trailing-window mean: element i averages xs[max(0, i-window+1) ..= i].
std::vector<double> moving_average(const std::vector<double>& xs, int window);

/// Small tabular MDP used by the oracles. transitions[s][a][s2] is a
/// probability row; terminal states absorb with zero continuation value.
struct SmallMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<std::vector<std::vector<double>>> transitions;
  std::vector<std::vector<double>> rewards;  // expected immediate reward
  std::vector<std::uint8_t> terminal;
  double gamma = 0.95;
};

void validate(const SmallMdp& mdp);

/// Fixed point of the Bellman optimality operator, within tol in sup-norm.
/// Guards against non-convergence at 100,000 iterations.
agent::QTable value_iteration(const SmallMdp& mdp, double tol);

struct ProbeResult {
  double mean_max_q_vanilla = 0.0;
  double mean_max_q_double = 0.0;
  double true_max_q = 0.0;
};

struct ProbeSeedResult {
  double max_q_vanilla = 0.0;
  double max_q_double = 0.0;
};

/// Trains one tiny network per target rule on an identical experience
/// stream of one-hot states with reward noise of the given deviation, then
/// reports max_a Q(s0, a) for both.
ProbeSeedResult overestimation_probe_seed(const SmallMdp& mdp, double noise_std,
                                          std::uint64_t seed, int train_steps,
                                          int dataset_size = 2000);

/// Mean of the per-seed estimates against the value-iteration truth.
ProbeResult overestimation_probe(const SmallMdp& mdp, double noise_std,
                                 const std::vector<std::uint64_t>& seeds, int train_steps,
                                 int dataset_size = 2000);

/// CSV plumbing shared with the CLI.
std::string episode_csv_header();
void write_episode_csv_row(std::ostream& out, const EpisodeResult& r);

}  // namespace ddqn::harness
