#include "ddqn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ddqn/state.hpp"
#include "ddqn/textfmt.hpp"

namespace ddqn::harness {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void normalize_state_vector(std::vector<double>& s, const world::WorldMap& map) {
  const double diag = std::hypot(map.bounds.xmax - map.bounds.xmin,
                                 map.bounds.ymax - map.bounds.ymin);
  for (int i = 0; i < state::kLidarBeams; ++i) s[static_cast<std::size_t>(i)] /= map.lidar_max_range;
  s[state::kLidarBeams] /= diag;
  s[state::kLidarBeams + 1] /= kPi;
}

std::vector<double> observe(const Environment& env, const world::Pose& pose,
                            const world::Goal& goal, const std::vector<double>& scan) {
  std::vector<double> s = state::build_state(scan, pose, goal);
  if (env.normalize_state) normalize_state_vector(s, env.map);
  return s;
}

void check_run_config(const RunConfig& cfg) {
  agent::validate(cfg.hp);
  reward::validate(cfg.reward);
  if (cfg.episodes <= 0) throw std::invalid_argument("run config: episodes must be positive");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run config: dt must be positive");
  if (cfg.checkpoint_every <= 0)
    throw std::invalid_argument("run config: checkpoint_every must be positive");
}

// Shared training loop. The callback sees each finished episode together
// with the live agent (for checkpointing) and the step rewards of that
// episode.
using EpisodeSink =
    std::function<void(const EpisodeResult&, const agent::AgentState&, const std::vector<double>&)>;

TrainRunResult run_training(const RunConfig& cfg, const EpisodeSink& sink) {
  check_run_config(cfg);
  const Environment env = make_environment(cfg);
  Rng rng(cfg.seed);
  agent::AgentState ag = agent::make_agent(cfg.net_spec, cfg.hp, cfg.rule, rng);
  replay::ReplayMemory mem(cfg.hp.memory);

  TrainRunResult out;
  out.episodes.reserve(static_cast<std::size_t>(cfg.episodes));
  std::vector<double> step_rewards;
  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    step_rewards.clear();
    EpisodeResult r = run_episode(env, ag, cfg.hp, mem, rng, &step_rewards);
    r.index = ep;
    out.episodes.push_back(r);
    if (sink) sink(r, ag, step_rewards);
  }
  out.final_params = net::copy_params(ag.online);
  return out;
}

double mean_total_reward_tail(const std::vector<EpisodeResult>& episodes, std::size_t window) {
  const std::size_t n = std::min(window, episodes.size());
  double acc = 0.0;
  for (std::size_t i = episodes.size() - n; i < episodes.size(); ++i)
    acc += episodes[i].total_reward;
  return acc / static_cast<double>(n);
}

}  // namespace

Environment make_environment(const RunConfig& cfg) {
  Environment env;
  env.map = cfg.map_path.empty() ? world::default_arena() : world::load_map(cfg.map_path);
  world::validate(env.map);
  env.reward_cfg = cfg.reward;
  env.dt = cfg.dt;
  env.episode_step = cfg.hp.episode_step;
  env.normalize_state = cfg.normalize_state;
  return env;
}

std::optional<reward::Outcome> classify_outcome(bool collided, bool reached, bool timed_out) {
  if (collided) return reward::Outcome::kCollision;
  if (reached) return reward::Outcome::kGoal;
  if (timed_out) return reward::Outcome::kTimeout;
  return std::nullopt;
}

EpisodeResult run_episode(const Environment& env, agent::AgentState& ag,
                          const agent::Hyperparams& hp, replay::ReplayMemory& mem, Rng& rng,
                          std::vector<double>* step_rewards) {
  const auto t0 = Clock::now();
  auto [pose, goal] = world::reset_episode(env.map, rng);
  const double start_distance = state::goal_distance(pose, goal);
  std::vector<double> scan = world::scan_lidar(env.map, pose);
  std::vector<double> s = observe(env, pose, goal, scan);

  EpisodeResult result;
  for (int step = 1; step <= env.episode_step; ++step) {
    const std::vector<double> q = net::forward(ag.online, s);
    const int a = agent::select_action(q, ag.epsilon, rng);
    pose = world::integrate_motion(
        pose, {env.actions.linear_velocity, env.actions.angular_velocity[static_cast<std::size_t>(a)],
               env.dt});
    scan = world::scan_lidar(env.map, pose);

    const auto outcome = classify_outcome(world::check_collision(scan, env.map.collision_threshold),
                                          world::goal_reached(pose, goal, env.map.goal_threshold),
                                          step == env.episode_step);
    double r;
    if (outcome) {
      r = reward::terminal_reward(*outcome, env.reward_cfg);
    } else {
      const reward::RewardInputs in{state::heading_error(pose, goal), a,
                                    state::goal_distance(pose, goal), start_distance};
      r = reward::step_reward(in, env.reward_cfg);
    }
    std::vector<double> s_next = observe(env, pose, goal, scan);
    mem.push({s, a, r, s_next, outcome.has_value()});
    agent::train_step(ag, hp, mem, rng);

    result.total_reward += r;
    result.steps = step;
    if (step_rewards) step_rewards->push_back(r);
    if (outcome) {
      result.outcome = *outcome;
      break;
    }
    s = std::move(s_next);
  }
  agent::decay_epsilon(ag, hp);
  result.epsilon_at_end = ag.epsilon;
  result.wall_seconds = seconds_since(t0);
  return result;
}

TrainRunResult train_run(const RunConfig& cfg) {
  check_run_config(cfg);
  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "episodes.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open episodes.csv in " + cfg.out_dir);
  csv << episode_csv_header() << '\n';

  std::ofstream trace;
  if (cfg.emit_trace) {
    trace.open(fs::path(cfg.out_dir) / "trace.csv", std::ios::binary);
    if (!trace) throw std::runtime_error("cannot open trace.csv in " + cfg.out_dir);
    trace << "episode,step,reward\n";
  }

  auto checkpoint_path = [&cfg](int episode, bool final) {
    char name[40];
    if (final)
      std::snprintf(name, sizeof(name), "checkpoint_final.txt");
    else
      std::snprintf(name, sizeof(name), "checkpoint_%06d.txt", episode);
    return (fs::path(cfg.out_dir) / name).string();
  };

  auto sink = [&](const EpisodeResult& r, const agent::AgentState& ag,
                  const std::vector<double>& rewards) {
    write_episode_csv_row(csv, r);
    if (cfg.emit_trace) {
      for (std::size_t i = 0; i < rewards.size(); ++i)
        trace << r.index << ',' << (i + 1) << ',' << format_g17(rewards[i]) << '\n';
    }
    if (r.index % cfg.checkpoint_every == 0 && r.index != cfg.episodes) {
      net::save_checkpoint(checkpoint_path(r.index, false), ag.online, ag.opt,
                           {cfg.seed, r.index, ag.epsilon, ag.global_step});
    }
    if (r.index == cfg.episodes) {
      net::save_checkpoint(checkpoint_path(r.index, true), ag.online, ag.opt,
                           {cfg.seed, r.index, ag.epsilon, ag.global_step});
    }
  };
  return run_training(cfg, sink);
}

EvalStats evaluate(const net::NetworkParams& params, const Environment& env, int episodes,
                   std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("evaluate: episodes must be positive");
  Rng rng(seed);
  EvalStats stats;
  int goals = 0;
  double reward_acc = 0.0;
  double step_acc = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    auto [pose, goal] = world::reset_episode(env.map, rng);
    const double start_distance = state::goal_distance(pose, goal);
    std::vector<double> scan = world::scan_lidar(env.map, pose);
    std::vector<double> s = observe(env, pose, goal, scan);
    double total = 0.0;
    int steps = 0;
    for (int step = 1; step <= env.episode_step; ++step) {
      const std::vector<double> q = net::forward(params, s);
      const int a = agent::select_action(q, 0.0, rng);
      pose = world::integrate_motion(
          pose,
          {env.actions.linear_velocity, env.actions.angular_velocity[static_cast<std::size_t>(a)],
           env.dt});
      scan = world::scan_lidar(env.map, pose);
      const auto outcome =
          classify_outcome(world::check_collision(scan, env.map.collision_threshold),
                           world::goal_reached(pose, goal, env.map.goal_threshold),
                           step == env.episode_step);
      steps = step;
      if (outcome) {
        total += reward::terminal_reward(*outcome, env.reward_cfg);
        if (*outcome == reward::Outcome::kGoal) ++goals;
        break;
      }
      const reward::RewardInputs in{state::heading_error(pose, goal), a,
                                    state::goal_distance(pose, goal), start_distance};
      total += reward::step_reward(in, env.reward_cfg);
      s = observe(env, pose, goal, scan);
    }
    reward_acc += total;
    step_acc += steps;
  }
  stats.success_rate = static_cast<double>(goals) / episodes;
  stats.mean_reward = reward_acc / episodes;
  stats.mean_steps = step_acc / episodes;
  return stats;
}

CompareResult compare_rules(const RunConfig& cfg) {
  check_run_config(cfg);
  RunConfig arm = cfg;
  arm.rule = agent::TargetRule::kVanillaMax;
  CompareResult out;
  out.vanilla = run_training(arm, nullptr).episodes;
  arm.rule = agent::TargetRule::kDoubleQ;
  out.double_q = run_training(arm, nullptr).episodes;

  std::vector<double> rv, rd;
  rv.reserve(out.vanilla.size());
  rd.reserve(out.double_q.size());
  for (const auto& e : out.vanilla) rv.push_back(e.total_reward);
  for (const auto& e : out.double_q) rd.push_back(e.total_reward);
  const std::vector<double> mv = moving_average(rv, 50);
  const std::vector<double> md = moving_average(rd, 50);

  fs::create_directories(cfg.out_dir);
  std::ofstream csv(fs::path(cfg.out_dir) / "comparison.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open comparison.csv in " + cfg.out_dir);
  csv << "episode,reward_vanilla,reward_double,movavg_vanilla,movavg_double\n";
  for (std::size_t i = 0; i < rv.size(); ++i) {
    csv << (i + 1) << ',' << format_g17(rv[i]) << ',' << format_g17(rd[i]) << ','
        << format_g17(mv[i]) << ',' << format_g17(md[i]) << '\n';
  }

  out.final_mean_vanilla = mean_total_reward_tail(out.vanilla, 100);
  out.final_mean_double = mean_total_reward_tail(out.double_q, 100);
  return out;
}

std::vector<double> moving_average(const std::vector<double>& xs, int window) {
  if (xs.empty()) throw std::invalid_argument("moving_average: empty input");
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(xs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    if (i >= static_cast<std::size_t>(window)) acc -= xs[i - static_cast<std::size_t>(window)];
    const std::size_t n = std::min(i + 1, static_cast<std::size_t>(window));
    out[i] = acc / static_cast<double>(n);
  }
  return out;
}

void validate(const SmallMdp& mdp) {
  if (mdp.n_states <= 0 || mdp.n_actions <= 0)
    throw std::invalid_argument("SmallMdp: need positive state/action counts");
  if (!(mdp.gamma >= 0.0 && mdp.gamma < 1.0))
    throw std::invalid_argument("SmallMdp: gamma must lie in [0, 1)");
  if (static_cast<int>(mdp.transitions.size()) != mdp.n_states ||
      static_cast<int>(mdp.rewards.size()) != mdp.n_states ||
      static_cast<int>(mdp.terminal.size()) != mdp.n_states)
    throw std::invalid_argument("SmallMdp: table sizes do not match n_states");
  for (int s = 0; s < mdp.n_states; ++s) {
    if (mdp.terminal[static_cast<std::size_t>(s)]) continue;
    const auto& per_action = mdp.transitions[static_cast<std::size_t>(s)];
    if (static_cast<int>(per_action.size()) != mdp.n_actions)
      throw std::invalid_argument("SmallMdp: transition row count mismatch");
    for (const auto& row : per_action) {
      if (static_cast<int>(row.size()) != mdp.n_states)
        throw std::invalid_argument("SmallMdp: transition row length mismatch");
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) throw std::invalid_argument("SmallMdp: negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("SmallMdp: transition row does not sum to 1");
    }
  }
}

agent::QTable value_iteration(const SmallMdp& mdp, double tol) {
  validate(mdp);
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
  agent::QTable q(static_cast<std::size_t>(mdp.n_states),
                  std::vector<double>(static_cast<std::size_t>(mdp.n_actions), 0.0));
  agent::QTable next = q;
  // Stop once the sup-norm change guarantees ||Q - Q*|| <= tol.
  const double threshold =
      mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / mdp.gamma : std::numeric_limits<double>::max();
  for (int iter = 0; iter < 100000; ++iter) {
    double diff = 0.0;
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        double value = mdp.rewards[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
        if (!mdp.terminal[static_cast<std::size_t>(s)]) {
          const auto& row =
              mdp.transitions[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
          for (int s2 = 0; s2 < mdp.n_states; ++s2) {
            if (mdp.terminal[static_cast<std::size_t>(s2)]) continue;
            const auto& qrow = q[static_cast<std::size_t>(s2)];
            value += mdp.gamma * row[static_cast<std::size_t>(s2)] *
                     *std::max_element(qrow.begin(), qrow.end());
          }
        }
        diff = std::max(diff,
                        std::abs(value - q[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]));
        next[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = value;
      }
    }
    q.swap(next);
    if (diff <= threshold) return q;
  }
  throw std::runtime_error("value_iteration: no convergence within 100000 iterations");
}

namespace {

std::vector<double> one_hot(int index, int n) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

int sample_categorical(const std::vector<double>& row, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += row[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(row.size()) - 1;
}

}  // namespace

ProbeSeedResult overestimation_probe_seed(const SmallMdp& mdp, double noise_std,
                                          std::uint64_t seed, int train_steps, int dataset_size) {
  validate(mdp);
  if (mdp.terminal[0]) throw std::invalid_argument("probe: start state must be non-terminal");
  if (train_steps <= 0 || dataset_size <= 0)
    throw std::invalid_argument("probe: steps and dataset size must be positive");

  // Uniform-random behavior policy; rewards carry the injected noise.
  Rng data_rng(derive_seed(seed, 0xDA7A));
  std::vector<replay::Transition> dataset;
  dataset.reserve(static_cast<std::size_t>(dataset_size));
  int s = 0;
  while (static_cast<int>(dataset.size()) < dataset_size) {
    const int a = static_cast<int>(data_rng.uniform_int(static_cast<std::uint64_t>(mdp.n_actions)));
    const int s2 = sample_categorical(
        mdp.transitions[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)], data_rng);
    const double r = mdp.rewards[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] +
                     noise_std * data_rng.normal();
    const bool done = mdp.terminal[static_cast<std::size_t>(s2)] != 0;
    dataset.push_back({one_hot(s, mdp.n_states), a, r, one_hot(s2, mdp.n_states), done});
    s = done ? 0 : s2;
  }

  agent::Hyperparams hp;
  hp.batch_size = 32;
  hp.train_start = 32;
  hp.learning_rate = 1e-3;
  hp.target_update = 100;
  hp.discount_factor = mdp.gamma;
  hp.memory = static_cast<std::size_t>(dataset_size);

  const net::NetworkSpec spec{{mdp.n_states, 24, mdp.n_actions}};
  ProbeSeedResult out;
  for (const agent::TargetRule rule :
       {agent::TargetRule::kVanillaMax, agent::TargetRule::kDoubleQ}) {
    Rng init_rng(derive_seed(seed, 0x1217));  // identical initialization per arm
    agent::AgentState ag = agent::make_agent(spec, hp, rule, init_rng);
    replay::ReplayMemory mem(hp.memory);
    for (const auto& t : dataset) mem.push(t);
    Rng train_rng(derive_seed(seed, 0x7247));  // identical batch sequence per arm
    for (int step = 0; step < train_steps; ++step) agent::train_step(ag, hp, mem, train_rng);
    const std::vector<double> q = net::forward(ag.online, one_hot(0, mdp.n_states));
    const double est = *std::max_element(q.begin(), q.end());
    if (rule == agent::TargetRule::kVanillaMax)
      out.max_q_vanilla = est;
    else
      out.max_q_double = est;
  }
  return out;
}

ProbeResult overestimation_probe(const SmallMdp& mdp, double noise_std,
                                 const std::vector<std::uint64_t>& seeds, int train_steps,
                                 int dataset_size) {
  if (seeds.empty()) throw std::invalid_argument("probe: need at least one seed");
  ProbeResult out;
  for (const std::uint64_t seed : seeds) {
    const ProbeSeedResult r = overestimation_probe_seed(mdp, noise_std, seed, train_steps,
                                                        dataset_size);
    out.mean_max_q_vanilla += r.max_q_vanilla;
    out.mean_max_q_double += r.max_q_double;
  }
  out.mean_max_q_vanilla /= static_cast<double>(seeds.size());
  out.mean_max_q_double /= static_cast<double>(seeds.size());
  const agent::QTable truth = value_iteration(mdp, 1e-10);
  out.true_max_q = *std::max_element(truth[0].begin(), truth[0].end());
  return out;
}

std::string episode_csv_header() {
  return "episode,steps,total_reward,outcome,epsilon,wall_seconds";
}

void write_episode_csv_row(std::ostream& out, const EpisodeResult& r) {
  out << r.index << ',' << r.steps << ',' << format_g17(r.total_reward) << ','
      << reward::to_string(r.outcome) << ',' << format_g17(r.epsilon_at_end) << ','
      << format_g17(r.wall_seconds) << '\n';
}

}  // namespace ddqn::harness
