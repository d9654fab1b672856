#include "ddqn/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ddqn/textfmt.hpp"

namespace ddqn::net {

namespace {

void check_spec(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("network spec needs at least two layers");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("network spec: layer sizes must be positive");
}

void check_batch(const NetworkParams& params, const std::vector<std::vector<double>>& states,
                 const std::vector<int>& actions, const std::vector<double>& targets) {
  if (states.empty()) throw std::invalid_argument("empty batch");
  if (states.size() != actions.size() || states.size() != targets.size())
    throw std::invalid_argument("batch arrays must have equal length");
  for (const auto& s : states)
    if (static_cast<int>(s.size()) != params.input_size())
      throw std::invalid_argument("state size does not match network input");
  for (int a : actions)
    if (a < 0 || a >= params.output_size())
      throw std::invalid_argument("action index out of range");
}

// Forward pass for one sample, keeping pre-activations z and activations h.
// h[0] is the input; h[l] for l >= 1 is the post-ReLU (or affine, for the
// output layer) activation of layer l-1.
void forward_pass(const NetworkParams& params, std::span<const double> input,
                  std::vector<std::vector<double>>& z, std::vector<std::vector<double>>& h) {
  const int layers = params.num_layers();
  z.resize(layers);
  h.resize(layers + 1);
  h[0].assign(input.begin(), input.end());
  for (int l = 0; l < layers; ++l) {
    const int in = params.layer_sizes[l];
    const int out = params.layer_sizes[l + 1];
    const auto& w = params.weights[l];
    const auto& b = params.biases[l];
    const auto& x = h[l];
    z[l].resize(out);
    h[l + 1].resize(out);
    for (int o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w.data() + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * x[i];
      z[l][o] = acc;
      h[l + 1][o] = (l + 1 < layers && acc < 0.0) ? 0.0 : acc;
    }
  }
}

}  // namespace

NetworkParams init_params(const NetworkSpec& spec, Rng& rng) {
  check_spec(spec.layer_sizes);
  NetworkParams p;
  p.layer_sizes = spec.layer_sizes;
  const int layers = static_cast<int>(spec.layer_sizes.size()) - 1;
  p.weights.resize(layers);
  p.biases.resize(layers);
  for (int l = 0; l < layers; ++l) {
    const int in = spec.layer_sizes[l];
    const int out = spec.layer_sizes[l + 1];
    const double bound = std::sqrt(6.0 / in);
    p.weights[l].resize(static_cast<std::size_t>(out) * in);
    for (double& w : p.weights[l]) w = rng.uniform(-bound, bound);
    p.biases[l].assign(static_cast<std::size_t>(out), 0.0);
  }
  return p;
}

OptimizerState make_optimizer_state(const NetworkParams& params) {
  OptimizerState opt;
  opt.weight_ms.resize(params.weights.size());
  opt.bias_ms.resize(params.biases.size());
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    opt.weight_ms[l].assign(params.weights[l].size(), 0.0);
    opt.bias_ms[l].assign(params.biases[l].size(), 0.0);
  }
  return opt;
}

std::vector<double> forward(const NetworkParams& params, std::span<const double> input) {
  if (static_cast<int>(input.size()) != params.input_size())
    throw std::invalid_argument("forward: input size does not match network");
  std::vector<std::vector<double>> z, h;
  forward_pass(params, input, z, h);
  return h.back();
}

double td_loss(const NetworkParams& params, const std::vector<std::vector<double>>& states,
               const std::vector<int>& actions, const std::vector<double>& targets) {
  check_batch(params, states, actions, targets);
  std::vector<std::vector<double>> z, h;
  double acc = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    forward_pass(params, states[i], z, h);
    const double err = targets[i] - h.back()[static_cast<std::size_t>(actions[i])];
    acc += err * err;
  }
  return acc / static_cast<double>(states.size());
}

Gradients backward(const NetworkParams& params, const std::vector<std::vector<double>>& states,
                   const std::vector<int>& actions, const std::vector<double>& targets,
                   double* loss_out) {
  check_batch(params, states, actions, targets);
  const int layers = params.num_layers();
  Gradients g;
  g.weights.resize(params.weights.size());
  g.biases.resize(params.biases.size());
  for (int l = 0; l < layers; ++l) {
    g.weights[l].assign(params.weights[l].size(), 0.0);
    g.biases[l].assign(params.biases[l].size(), 0.0);
  }

  const double batch = static_cast<double>(states.size());
  std::vector<std::vector<double>> z, h;
  std::vector<std::vector<double>> delta(layers);
  double loss = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    forward_pass(params, states[i], z, h);
    const int a = actions[i];
    const double err = h.back()[static_cast<std::size_t>(a)] - targets[i];
    loss += err * err;

    // Output layer: only the taken action's unit carries error.
    delta[layers - 1].assign(z[layers - 1].size(), 0.0);
    delta[layers - 1][static_cast<std::size_t>(a)] = 2.0 * err / batch;

    for (int l = layers - 1; l >= 0; --l) {
      const int in = params.layer_sizes[l];
      const int out = params.layer_sizes[l + 1];
      const auto& d = delta[l];
      const auto& x = h[l];
      auto& gw = g.weights[l];
      auto& gb = g.biases[l];
      for (int o = 0; o < out; ++o) {
        const double dv = d[o];
        if (dv == 0.0) continue;
        gb[o] += dv;
        double* row = gw.data() + static_cast<std::size_t>(o) * in;
        for (int k = 0; k < in; ++k) row[k] += dv * x[k];
      }
      if (l > 0) {
        auto& dprev = delta[l - 1];
        dprev.assign(static_cast<std::size_t>(in), 0.0);
        const auto& w = params.weights[l];
        for (int o = 0; o < out; ++o) {
          const double dv = d[o];
          if (dv == 0.0) continue;
          const double* row = w.data() + static_cast<std::size_t>(o) * in;
          for (int k = 0; k < in; ++k) dprev[k] += row[k] * dv;
        }
        for (int k = 0; k < in; ++k)
          if (z[l - 1][k] <= 0.0) dprev[k] = 0.0;
      }
    }
  }
  if (loss_out) *loss_out = loss / batch;
  return g;
}

void rmsprop_step(NetworkParams& params, const Gradients& grads, OptimizerState& opt, double lr) {
  if (grads.weights.size() != params.weights.size())
    throw std::invalid_argument("rmsprop_step: gradient shape mismatch");
  auto update = [lr](std::vector<double>& p, const std::vector<double>& g,
                     std::vector<double>& ms) {
    if (g.size() != p.size() || ms.size() != p.size())
      throw std::invalid_argument("rmsprop_step: tensor shape mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      ms[i] = kRmsPropRho * ms[i] + (1.0 - kRmsPropRho) * g[i] * g[i];
      p[i] -= lr * g[i] / (std::sqrt(ms[i]) + kRmsPropEpsilon);
    }
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    update(params.weights[l], grads.weights[l], opt.weight_ms[l]);
    update(params.biases[l], grads.biases[l], opt.bias_ms[l]);
  }
  ++opt.step;
}

NetworkParams copy_params(const NetworkParams& src) { return src; }

double min_abs_hidden_preactivation(const NetworkParams& params, std::span<const double> input) {
  std::vector<std::vector<double>> z, h;
  forward_pass(params, input, z, h);
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < params.num_layers() - 1; ++l)  // output layer has no kink
    for (double v : z[static_cast<std::size_t>(l)]) best = std::min(best, std::abs(v));
  return best;
}

void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const OptimizerState& opt, const CheckpointMeta& meta) {
  std::ostringstream out;
  out << "qnet-checkpoint v1\n";
  out << "layer_sizes";
  for (int s : params.layer_sizes) out << ' ' << s;
  out << '\n';
  out << "seed " << meta.seed << '\n';
  out << "episodes " << meta.episodes << '\n';
  out << "epsilon " << format_g17(meta.epsilon) << '\n';
  out << "global_step " << meta.global_step << '\n';
  auto dump = [&out](const char* tag, int layer, const std::vector<double>& values) {
    out << "tensor " << tag << ' ' << layer << ' ' << values.size() << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ' ';
      out << format_g17(values[i]);
    }
    out << '\n';
  };
  for (int l = 0; l < params.num_layers(); ++l) {
    dump("weight", l, params.weights[static_cast<std::size_t>(l)]);
    dump("bias", l, params.biases[static_cast<std::size_t>(l)]);
  }
  for (int l = 0; l < params.num_layers(); ++l) {
    dump("ms_weight", l, opt.weight_ms[static_cast<std::size_t>(l)]);
    dump("ms_bias", l, opt.bias_ms[static_cast<std::size_t>(l)]);
  }
  out << "opt_step " << opt.step << '\n';
  out << "end\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("cannot open checkpoint for writing: " + path);
  f << out.str();
  if (!f) throw CheckpointError("write failure on checkpoint: " + path);
}

namespace {

void expect_word(std::istream& in, const std::string& want) {
  std::string got;
  if (!(in >> got) || got != want)
    throw CheckpointError("malformed checkpoint: expected '" + want + "', got '" + got + "'");
}

std::vector<double> read_tensor(std::istream& in, const std::string& tag, int layer,
                                std::size_t expected_size) {
  expect_word(in, "tensor");
  expect_word(in, tag);
  int got_layer = -1;
  std::size_t n = 0;
  if (!(in >> got_layer >> n) || got_layer != layer || n != expected_size)
    throw CheckpointError("checkpoint tensor header mismatch for " + tag);
  std::vector<double> values(n);
  for (double& v : values) {
    if (!(in >> v)) throw CheckpointError("truncated checkpoint while reading " + tag);
    if (!std::isfinite(v)) throw CheckpointError("non-finite value in checkpoint " + tag);
  }
  return values;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CheckpointError("cannot open checkpoint: " + path);
  std::string magic, version;
  if (!(f >> magic >> version) || magic != "qnet-checkpoint" || version != "v1")
    throw CheckpointError("not a qnet-checkpoint v1 file: " + path);

  Checkpoint ck;
  expect_word(f, "layer_sizes");
  {
    std::string rest;
    std::getline(f, rest);
    std::istringstream ls(rest);
    int s;
    while (ls >> s) ck.params.layer_sizes.push_back(s);
  }
  check_spec(ck.params.layer_sizes);
  expect_word(f, "seed");
  if (!(f >> ck.meta.seed)) throw CheckpointError("truncated checkpoint at seed");
  expect_word(f, "episodes");
  if (!(f >> ck.meta.episodes)) throw CheckpointError("truncated checkpoint at episodes");
  expect_word(f, "epsilon");
  if (!(f >> ck.meta.epsilon)) throw CheckpointError("truncated checkpoint at epsilon");
  expect_word(f, "global_step");
  if (!(f >> ck.meta.global_step)) throw CheckpointError("truncated checkpoint at global_step");

  const int layers = static_cast<int>(ck.params.layer_sizes.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const std::size_t in = static_cast<std::size_t>(ck.params.layer_sizes[l]);
    const std::size_t out = static_cast<std::size_t>(ck.params.layer_sizes[l + 1]);
    ck.params.weights.push_back(read_tensor(f, "weight", l, out * in));
    ck.params.biases.push_back(read_tensor(f, "bias", l, out));
  }
  for (int l = 0; l < layers; ++l) {
    const std::size_t in = static_cast<std::size_t>(ck.params.layer_sizes[l]);
    const std::size_t out = static_cast<std::size_t>(ck.params.layer_sizes[l + 1]);
    ck.opt.weight_ms.push_back(read_tensor(f, "ms_weight", l, out * in));
    ck.opt.bias_ms.push_back(read_tensor(f, "ms_bias", l, out));
  }
  expect_word(f, "opt_step");
  if (!(f >> ck.opt.step)) throw CheckpointError("truncated checkpoint at opt_step");
  expect_word(f, "end");
  return ck;
}

Checkpoint load_checkpoint(const std::string& path, const NetworkSpec& expected) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.params.layer_sizes != expected.layer_sizes)
    throw CheckpointError("checkpoint layer sizes do not match the expected network spec");
  return ck;
}

}  // namespace ddqn::net
