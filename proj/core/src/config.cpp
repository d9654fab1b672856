#include "ddqn/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ddqn/textfmt.hpp"

namespace ddqn::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw ConfigError("config line " + std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& v, int lineno) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    fail(lineno, "expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, int lineno) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
    fail(lineno, "expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, int lineno) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v.front() == '-' || errno == ERANGE)
    fail(lineno, "expected a non-negative integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, int lineno) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(lineno, "expected true/false, got '" + v + "'");
}

}  // namespace

const char* rule_name(agent::TargetRule rule) {
  return rule == agent::TargetRule::kVanillaMax ? "dqn" : "ddqn";
}

agent::TargetRule parse_rule(const std::string& name) {
  if (name == "dqn") return agent::TargetRule::kVanillaMax;
  if (name == "ddqn") return agent::TargetRule::kDoubleQ;
  throw ConfigError("rule must be 'dqn' or 'ddqn', got '" + name + "'");
}

harness::RunConfig parse_config(std::istream& in) {
  harness::RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (!seen.insert(key).second) fail(lineno, "duplicate key '" + key + "'");

    if (key == "episode_step") cfg.hp.episode_step = static_cast<int>(parse_int(value, lineno));
    else if (key == "target_update") cfg.hp.target_update = static_cast<int>(parse_int(value, lineno));
    else if (key == "discount_factor") cfg.hp.discount_factor = parse_double(value, lineno);
    else if (key == "learning_rate") cfg.hp.learning_rate = parse_double(value, lineno);
    else if (key == "epsilon") cfg.hp.epsilon = parse_double(value, lineno);
    else if (key == "epsilon_decay") cfg.hp.epsilon_decay = parse_double(value, lineno);
    else if (key == "epsilon_min") cfg.hp.epsilon_min = parse_double(value, lineno);
    else if (key == "batch_size") cfg.hp.batch_size = static_cast<int>(parse_int(value, lineno));
    else if (key == "train_start") cfg.hp.train_start = static_cast<int>(parse_int(value, lineno));
    else if (key == "memory") cfg.hp.memory = static_cast<std::size_t>(parse_u64(value, lineno));
    else if (key == "rule") {
      try {
        cfg.rule = parse_rule(value);
      } catch (const ConfigError& e) {
        fail(lineno, e.what());
      }
    }
    else if (key == "map") cfg.map_path = value;
    else if (key == "episodes") cfg.episodes = static_cast<int>(parse_int(value, lineno));
    else if (key == "seed") cfg.seed = parse_u64(value, lineno);
    else if (key == "dt") cfg.dt = parse_double(value, lineno);
    else if (key == "goal_reward") cfg.reward.goal_reward = parse_double(value, lineno);
    else if (key == "collision_reward") cfg.reward.collision_reward = parse_double(value, lineno);
    else if (key == "timeout_reward") cfg.reward.timeout_reward = parse_double(value, lineno);
    else if (key == "angle_scale") cfg.reward.angle_scale = parse_double(value, lineno);
    else if (key == "distance_exponent_cap")
      cfg.reward.distance_exponent_cap = parse_double(value, lineno);
    else if (key == "normalize_state") cfg.normalize_state = parse_bool(value, lineno);
    else if (key == "checkpoint_every")
      cfg.checkpoint_every = static_cast<int>(parse_int(value, lineno));
    else if (key == "out_dir") cfg.out_dir = value;
    else fail(lineno, "unknown key '" + key + "'");
  }
  return cfg;
}

harness::RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return parse_config(f);
}

void write_effective_config(std::ostream& out, const harness::RunConfig& cfg) {
  out << "episode_step = " << cfg.hp.episode_step << '\n';
  out << "target_update = " << cfg.hp.target_update << '\n';
  out << "discount_factor = " << format_g17(cfg.hp.discount_factor) << '\n';
  out << "learning_rate = " << format_g17(cfg.hp.learning_rate) << '\n';
  out << "epsilon = " << format_g17(cfg.hp.epsilon) << '\n';
  out << "epsilon_decay = " << format_g17(cfg.hp.epsilon_decay) << '\n';
  out << "epsilon_min = " << format_g17(cfg.hp.epsilon_min) << '\n';
  out << "batch_size = " << cfg.hp.batch_size << '\n';
  out << "train_start = " << cfg.hp.train_start << '\n';
  out << "memory = " << cfg.hp.memory << '\n';
  out << "rule = " << rule_name(cfg.rule) << '\n';
  out << "map = " << cfg.map_path << '\n';
  out << "episodes = " << cfg.episodes << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "dt = " << format_g17(cfg.dt) << '\n';
  out << "goal_reward = " << format_g17(cfg.reward.goal_reward) << '\n';
  out << "collision_reward = " << format_g17(cfg.reward.collision_reward) << '\n';
  out << "timeout_reward = " << format_g17(cfg.reward.timeout_reward) << '\n';
  out << "angle_scale = " << format_g17(cfg.reward.angle_scale) << '\n';
  out << "distance_exponent_cap = " << format_g17(cfg.reward.distance_exponent_cap) << '\n';
  out << "normalize_state = " << (cfg.normalize_state ? "true" : "false") << '\n';
  out << "checkpoint_every = " << cfg.checkpoint_every << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
}

}  // namespace ddqn::cli
