#include "ddqn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "ddqn/harness.hpp"
#include "ddqn/svg.hpp"
#include "ddqn/textfmt.hpp"

namespace ddqn::cli {

namespace fs = std::filesystem;

namespace {

harness::RunConfig load_with_overrides(const std::string& config_path, const RunOverrides& ov) {
  harness::RunConfig cfg;
  if (!config_path.empty()) cfg = load_config(config_path);
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.map_path) cfg.map_path = *ov.map_path;
  if (ov.rule) cfg.rule = parse_rule(*ov.rule);
  agent::validate(cfg.hp);
  reward::validate(cfg.reward);
  return cfg;
}

void echo_effective_config(const harness::RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::ofstream f(fs::path(cfg.out_dir) / "effective_config", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write effective_config in " + cfg.out_dir);
  write_effective_config(f, cfg);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

int cmd_train(const std::string& config_path, const RunOverrides& ov, std::ostream& out,
              std::ostream& err) {
  harness::RunConfig cfg;
  try {
    cfg = load_with_overrides(config_path, ov);
  } catch (const std::exception& e) {
    err << "train: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    echo_effective_config(cfg);
    const harness::TrainRunResult result = harness::train_run(cfg);
    int goals = 0;
    for (const auto& ep : result.episodes)
      if (ep.outcome == reward::Outcome::kGoal) ++goals;
    const std::size_t tail = std::min<std::size_t>(100, result.episodes.size());
    double tail_mean = 0.0;
    for (std::size_t i = result.episodes.size() - tail; i < result.episodes.size(); ++i)
      tail_mean += result.episodes[i].total_reward;
    tail_mean /= static_cast<double>(tail);
    out << "summary episodes=" << result.episodes.size() << " goals=" << goals
        << " goal_rate=" << format_g17(static_cast<double>(goals) / cfg.episodes)
        << " final" << tail << "_mean_reward=" << format_g17(tail_mean) << '\n';
    return kExitOk;
  } catch (const world::MapError& e) {
    err << "train: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "train: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.episodes <= 0) {
    err << "eval: episodes must be positive\n";
    return kExitUsage;
  }
  if (opt.episode_step <= 0) {
    err << "eval: steps must be positive\n";
    return kExitUsage;
  }
  net::Checkpoint ck;
  try {
    ck = net::load_checkpoint(opt.checkpoint_path);
  } catch (const std::exception& e) {
    err << "eval: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    harness::Environment env;
    env.map = opt.map_path.empty() ? world::default_arena() : world::load_map(opt.map_path);
    world::validate(env.map);
    env.episode_step = opt.episode_step;
    const harness::EvalStats stats = harness::evaluate(ck.params, env, opt.episodes, opt.seed);
    out << "success_rate=" << format_g17(stats.success_rate)
        << " mean_reward=" << format_g17(stats.mean_reward)
        << " mean_steps=" << format_g17(stats.mean_steps) << '\n';
    return kExitOk;
  } catch (const world::MapError& e) {
    err << "eval: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "eval: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_compare(const std::string& config_path, const RunOverrides& ov, std::ostream& out,
                std::ostream& err) {
  harness::RunConfig cfg;
  try {
    cfg = load_with_overrides(config_path, ov);
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    echo_effective_config(cfg);
    const harness::CompareResult result = harness::compare_rules(cfg);

    std::vector<double> rv, rd, ep;
    for (const auto& e : result.vanilla) rv.push_back(e.total_reward);
    for (const auto& e : result.double_q) rd.push_back(e.total_reward);
    for (std::size_t i = 1; i <= rv.size(); ++i) ep.push_back(static_cast<double>(i));
    const std::vector<double> mv = harness::moving_average(rv, 50);
    const std::vector<double> md = harness::moving_average(rd, 50);
    const std::string chart = svg::line_chart(
        "Per-episode total reward (moving average, window 50)", "episode", "total reward",
        {{"dqn (max target)", "#d62728", ep, mv}, {"ddqn (double target)", "#1f77b4", ep, md}});
    std::ofstream f(fs::path(cfg.out_dir) / "comparison.svg", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write comparison.svg in " + cfg.out_dir);
    f << chart;
    f.close();

    out << "final100_mean_dqn=" << format_g17(result.final_mean_vanilla) << '\n';
    out << "final100_mean_ddqn=" << format_g17(result.final_mean_double) << '\n';
    out << "ddqn_mean_ge_dqn_mean="
        << (result.final_mean_double >= result.final_mean_vanilla ? "true" : "false") << '\n';
    return kExitOk;
  } catch (const world::MapError& e) {
    err << "compare: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_gradcheck(std::uint64_t seed, bool corrupt, std::ostream& out, std::ostream& err) {
  try {
    const net::NetworkSpec spec;  // default 26-64-64-5
    constexpr int kReps = 20;
    constexpr int kBatch = 3;
    constexpr double kH = 1e-5;
    // Finite differences are only a valid oracle away from the rectifier
    // kinks; batches whose hidden pre-activations sit closer than this
    // margin are redrawn.
    constexpr double kKinkMargin = 2e-3;
    double max_rel = 0.0;

    for (int rep = 0; rep < kReps; ++rep) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
      net::NetworkParams params = net::init_params(spec, rng);
      std::vector<std::vector<double>> states;
      std::vector<int> actions;
      std::vector<double> targets;
      for (int attempt = 0; attempt < 500 && static_cast<int>(states.size()) < kBatch;
           ++attempt) {
        std::vector<double> s;
        for (int i = 0; i < 24; ++i) s.push_back(rng.uniform(0.1, 3.5));
        s.push_back(rng.uniform(0.05, 5.0));
        s.push_back(rng.uniform(-kPi, kPi));
        if (net::min_abs_hidden_preactivation(params, s) < kKinkMargin) continue;
        states.push_back(std::move(s));
        actions.push_back(static_cast<int>(rng.uniform_int(5)));
        targets.push_back(rng.uniform(-5.0, 5.0));
      }
      if (static_cast<int>(states.size()) < kBatch)
        throw std::runtime_error("gradcheck: could not find a kink-free batch");

      net::Gradients grads = net::backward(params, states, actions, targets);
      if (corrupt) grads.weights[0][0] += 1e-3 * (1.0 + std::abs(grads.weights[0][0]));

      auto probe_tensor = [&](std::vector<double>& tensor, const std::vector<double>& analytic) {
        for (std::size_t i = 0; i < tensor.size(); ++i) {
          const double saved = tensor[i];
          tensor[i] = saved + kH;
          const double lp = net::td_loss(params, states, actions, targets);
          tensor[i] = saved - kH;
          const double lm = net::td_loss(params, states, actions, targets);
          tensor[i] = saved;
          const double fd = (lp - lm) / (2.0 * kH);
          const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
          max_rel = std::max(max_rel, std::abs(fd - analytic[i]) / denom);
        }
      };
      for (std::size_t l = 0; l < params.weights.size(); ++l) {
        probe_tensor(params.weights[l], grads.weights[l]);
        probe_tensor(params.biases[l], grads.biases[l]);
      }
    }
    out << "max_rel_err=" << format_g17(max_rel) << '\n';
    return max_rel < 1e-4 ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "gradcheck: " << e.what() << '\n';
    return kExitRuntime;
  }
}

std::vector<EpisodeRow> read_episode_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(f, line)) throw CsvError("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != harness::episode_csv_header())
    throw CsvError("CSV header mismatch: expected '" + harness::episode_csv_header() + "'");
  std::vector<EpisodeRow> rows;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6)
      throw CsvError("CSV line " + std::to_string(lineno) + ": expected 6 fields");
    EpisodeRow r;
    try {
      r.episode = std::stoi(fields[0]);
      r.steps = std::stoi(fields[1]);
      r.total_reward = std::stod(fields[2]);
      r.outcome = fields[3];
      r.epsilon = std::stod(fields[4]);
      r.wall_seconds = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw CsvError("CSV line " + std::to_string(lineno) + ": malformed number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path, std::ostream& out,
             std::ostream& err) {
  std::vector<EpisodeRow> rows;
  try {
    rows = read_episode_csv(csv_path);
    if (rows.empty()) throw CsvError("CSV has no data rows: " + csv_path);
  } catch (const CsvError& e) {
    err << "plot: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    std::vector<double> ep, rewards;
    for (const auto& r : rows) {
      ep.push_back(static_cast<double>(r.episode));
      rewards.push_back(r.total_reward);
    }
    const std::vector<double> avg = harness::moving_average(rewards, 50);
    const std::string chart =
        svg::line_chart("Per-episode total reward", "episode", "total reward",
                        {{"total reward", "#1f77b4", ep, rewards},
                         {"moving average (50)", "#d62728", ep, avg}});
    std::ofstream f(svg_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write SVG: " + svg_path);
    f << chart;
    out << "wrote " << svg_path << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "plot: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic 2D-lidar navigation workbench: trains and compares DQN/DDQN "
               "local path planners"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_val = 0;
  std::string out_val, map_val, rule_val;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file (key = value lines)");
    cmd->add_option("--seed", seed_val, "override the run seed");
    cmd->add_option("--out", out_val, "override the output directory");
    cmd->add_option("--map", map_val, "override the map file");
    cmd->add_option("--rule", rule_val, "target rule: dqn | ddqn")
        ->check(CLI::IsMember({"dqn", "ddqn"}));
  };

  CLI::App* train = app.add_subcommand("train", "train a policy and write CSV + checkpoints");
  add_run_flags(train);

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  eval->add_option("checkpoint", eval_opt.checkpoint_path, "checkpoint file")->required();
  eval->add_option("--map", eval_opt.map_path, "map file (default: built-in 4x4 arena)");
  eval->add_option("--episodes", eval_opt.episodes, "number of evaluation episodes");
  eval->add_option("--seed", eval_opt.seed, "evaluation seed");
  eval->add_option("--steps", eval_opt.episode_step, "per-episode step limit");

  CLI::App* compare =
      app.add_subcommand("compare", "seed-matched dqn vs ddqn runs, merged CSV + SVG");
  add_run_flags(compare);

  std::uint64_t grad_seed = 1;
  bool grad_corrupt = false;
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference check of the backward pass");
  gradcheck->add_option("--seed", grad_seed, "seed for the random nets and batches");
  gradcheck->add_flag("--corrupt", grad_corrupt,
                      "testing hook: inject a gradient error (must fail)");

  std::string plot_csv, plot_svg = "plot.svg";
  CLI::App* plot = app.add_subcommand("plot", "render an episode CSV as an SVG chart");
  plot->add_option("csv", plot_csv, "episode CSV file")->required();
  plot->add_option("svg", plot_svg, "output SVG path");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  RunOverrides ov;
  auto collect_overrides = [&](CLI::App* cmd) {
    if (cmd->count("--seed")) ov.seed = seed_val;
    if (cmd->count("--out")) ov.out_dir = out_val;
    if (cmd->count("--map")) ov.map_path = map_val;
    if (cmd->count("--rule")) ov.rule = rule_val;
  };
  if (train->parsed()) {
    collect_overrides(train);
    return cmd_train(config_path, ov, out, err);
  }
  if (eval->parsed()) return cmd_eval(eval_opt, out, err);
  if (compare->parsed()) {
    collect_overrides(compare);
    return cmd_compare(config_path, ov, out, err);
  }
  if (gradcheck->parsed()) return cmd_gradcheck(grad_seed, grad_corrupt, out, err);
  if (plot->parsed()) return cmd_plot(plot_csv, plot_svg, out, err);
  err << "no subcommand given\n";
  return kExitUsage;
}

}  // namespace ddqn::cli
