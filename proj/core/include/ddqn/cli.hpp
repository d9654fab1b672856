#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ddqn/config.hpp"

namespace ddqn::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Command-line overrides; any set field beats the config file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> map_path;
  std::optional<std::string> rule;
};

struct EvalOptions {
  std::string checkpoint_path;
  std::string map_path;  // empty selects the built-in arena
  int episodes = 50;
  std::uint64_t seed = 1;
  int episode_step = 500;
};

int cmd_train(const std::string& config_path, const RunOverrides& ov, std::ostream& out,
              std::ostream& err);
int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config_path, const RunOverrides& ov, std::ostream& out,
                std::ostream& err);
/// Finite-difference check of the backward pass; prints `max_rel_err=<v>`.
/// `corrupt` is a testing hook that injects a gradient error on purpose.
int cmd_gradcheck(std::uint64_t seed, bool corrupt, std::ostream& out, std::ostream& err);
int cmd_plot(const std::string& csv_path, const std::string& svg_path, std::ostream& out,
             std::ostream& err);

/// Full argv-level entry point (argv[0] excluded). Returns the exit code.
int run(std::vector<std::string> args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

/// One parsed row of an episode CSV.
struct EpisodeRow {
  int episode = 0;
  int steps = 0;
  double total_reward = 0.0;
  std::string outcome;
  double epsilon = 0.0;
  double wall_seconds = 0.0;
};

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a CSV with exactly the documented episode schema.
std::vector<EpisodeRow> read_episode_csv(const std::string& path);

}  // namespace ddqn::cli
