#include "ddqn/agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddqn::agent {

namespace {

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
  return best;
}

}  // namespace

void validate(const Hyperparams& hp) {
  if (!(hp.episode_step > 0)) throw std::invalid_argument("episode_step must be positive");
  if (!(hp.target_update > 0)) throw std::invalid_argument("target_update must be positive");
  if (!(hp.discount_factor >= 0.0 && hp.discount_factor < 1.0))
    throw std::invalid_argument("discount_factor must lie in [0, 1)");
  if (!(hp.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(hp.epsilon_min >= 0.0 && hp.epsilon_min <= hp.epsilon && hp.epsilon <= 1.0))
    throw std::invalid_argument("need 0 <= epsilon_min <= epsilon <= 1");
  if (!(hp.epsilon_decay > 0.0 && hp.epsilon_decay <= 1.0))
    throw std::invalid_argument("epsilon_decay must lie in (0, 1]");
  if (!(hp.batch_size > 0)) throw std::invalid_argument("batch_size must be positive");
  if (!(hp.batch_size <= hp.train_start &&
        static_cast<std::size_t>(hp.train_start) <= hp.memory))
    throw std::invalid_argument("need batch_size <= train_start <= memory");
}

AgentState make_agent(const net::NetworkSpec& spec, const Hyperparams& hp, TargetRule rule,
                      Rng& rng) {
  validate(hp);
  AgentState a;
  a.online = net::init_params(spec, rng);
  a.target = net::copy_params(a.online);
  a.opt = net::make_optimizer_state(a.online);
  a.epsilon = hp.epsilon;
  a.rule = rule;
  return a;
}

AgentState make_agent_from_checkpoint(const net::Checkpoint& ck, TargetRule rule) {
  AgentState a;
  a.online = ck.params;
  a.target = net::copy_params(ck.params);
  a.opt = ck.opt;
  a.epsilon = ck.meta.epsilon;
  a.global_step = ck.meta.global_step;
  a.rule = rule;
  return a;
}

int select_action(std::span<const double> q, double epsilon, Rng& rng) {
  if (q.empty()) throw std::invalid_argument("select_action: empty value vector");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("select_action: epsilon must lie in [0, 1]");
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return static_cast<int>(rng.uniform_int(q.size()));
  return argmax_lowest(q);
}

std::vector<double> compute_targets(const std::vector<replay::Transition>& batch,
                                    const net::NetworkParams& online,
                                    const net::NetworkParams& target, double gamma,
                                    TargetRule rule) {
  if (batch.empty()) throw std::invalid_argument("compute_targets: empty batch");
  std::vector<double> ys;
  ys.reserve(batch.size());
  for (const auto& t : batch) {
    if (t.done) {
      ys.push_back(t.reward);
      continue;
    }
    const std::vector<double> qt = net::forward(target, t.next_state);
    double future;
    if (rule == TargetRule::kVanillaMax) {
      future = *std::max_element(qt.begin(), qt.end());
    } else {
      const std::vector<double> qo = net::forward(online, t.next_state);
      future = qt[static_cast<std::size_t>(argmax_lowest(qo))];
    }
    ys.push_back(t.reward + gamma * future);
  }
  return ys;
}

std::optional<double> train_step(AgentState& agent, const Hyperparams& hp,
                                 const replay::ReplayMemory& mem, Rng& rng) {
  if (mem.size() < static_cast<std::size_t>(hp.train_start)) return std::nullopt;
  const auto batch = mem.sample_uniform(static_cast<std::size_t>(hp.batch_size), rng);
  const auto targets =
      compute_targets(batch, agent.online, agent.target, hp.discount_factor, agent.rule);
  std::vector<std::vector<double>> states;
  std::vector<int> actions;
  states.reserve(batch.size());
  actions.reserve(batch.size());
  for (const auto& t : batch) {
    states.push_back(t.state);
    actions.push_back(t.action);
  }
  double loss = 0.0;
  const net::Gradients grads = net::backward(agent.online, states, actions, targets, &loss);
  net::rmsprop_step(agent.online, grads, agent.opt, hp.learning_rate);
  ++agent.global_step;
  if (agent.global_step % static_cast<std::uint64_t>(hp.target_update) == 0) sync_target(agent);
  return loss;
}

void sync_target(AgentState& agent) { agent.target = net::copy_params(agent.online); }

void decay_epsilon(AgentState& agent, const Hyperparams& hp) {
  agent.epsilon = std::max(hp.epsilon_min, agent.epsilon * hp.epsilon_decay);
}

void tabular_q_update(QTable& q, int s, int a, double r, int s_next, double alpha, double gamma) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("tabular_q_update: alpha must lie in [0, 1]");
  if (s < 0 || s >= static_cast<int>(q.size()) || s_next < 0 ||
      s_next >= static_cast<int>(q.size()))
    throw std::out_of_range("tabular_q_update: state index");
  auto& row = q[static_cast<std::size_t>(s)];
  if (a < 0 || a >= static_cast<int>(row.size()))
    throw std::out_of_range("tabular_q_update: action index");
  const auto& next_row = q[static_cast<std::size_t>(s_next)];
  const double best_next = *std::max_element(next_row.begin(), next_row.end());
  row[static_cast<std::size_t>(a)] +=
      alpha * (r + gamma * best_next - row[static_cast<std::size_t>(a)]);
}

}  // namespace ddqn::agent
