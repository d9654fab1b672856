#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddqn/rng.hpp"

namespace ddqn::net {

/// Layer widths, input first. Hidden layers use rectified-linear units,
/// the output layer is affine.
struct NetworkSpec {
  std::vector<int> layer_sizes{26, 64, 64, 5};
};

/// Plain-value weights and biases. weights[l] is row-major (out x in).
struct NetworkParams {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  int num_layers() const { return static_cast<int>(weights.size()); }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
};

/// Gradient of the TD loss; shapes mirror NetworkParams.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

/// RMSProp accumulator: running mean of squared gradients per parameter.
struct OptimizerState {
  std::vector<std::vector<double>> weight_ms;
  std::vector<std::vector<double>> bias_ms;
  std::uint64_t step = 0;
};

inline constexpr double kRmsPropRho = 0.9;
inline constexpr double kRmsPropEpsilon = 1e-7;

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckpointMeta {
  std::uint64_t seed = 0;
  int episodes = 0;
  double epsilon = 1.0;
  std::uint64_t global_step = 0;
};

struct Checkpoint {
  NetworkParams params;
  OptimizerState opt;
  CheckpointMeta meta;
};

/// Weights uniform in (-sqrt(6/fan_in), +sqrt(6/fan_in)), biases zero.
NetworkParams init_params(const NetworkSpec& spec, Rng& rng);

OptimizerState make_optimizer_state(const NetworkParams& params);

/// Q-values for one input.
std::vector<double> forward(const NetworkParams& params, std::span<const double> input);

/// Mean over the batch of (target_i - Q(s_i, a_i))^2. Only the taken
/// action's output enters.
double td_loss(const NetworkParams& params, const std::vector<std::vector<double>>& states,
               const std::vector<int>& actions, const std::vector<double>& targets);

/// Exact gradient of td_loss with respect to every parameter. When loss_out
/// is non-null it receives the batch loss from the same pass.
Gradients backward(const NetworkParams& params, const std::vector<std::vector<double>>& states,
                   const std::vector<int>& actions, const std::vector<double>& targets,
                   double* loss_out = nullptr);

/// v <- rho v + (1 - rho) g^2;  p <- p - lr g / (sqrt(v) + eps).
void rmsprop_step(NetworkParams& params, const Gradients& grads, OptimizerState& opt, double lr);

/// Deep copy; mutating either side afterwards leaves the other unchanged.
NetworkParams copy_params(const NetworkParams& src);

/// Smallest |pre-activation| over all hidden units for this input. Used by
/// the gradient check to stay away from the rectifier kinks, where finite
/// differences are not a valid oracle.
double min_abs_hidden_preactivation(const NetworkParams& params, std::span<const double> input);

/// Structured-text checkpoint: header (schema version, layer sizes, seed,
/// episode count, epsilon, global step) followed by row-major weights at 17
/// significant digits. Round-trips bit-exactly at the decimal-string level.
void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const OptimizerState& opt, const CheckpointMeta& meta);
Checkpoint load_checkpoint(const std::string& path);
/// As above but rejects a checkpoint whose layer sizes differ from `expected`.
Checkpoint load_checkpoint(const std::string& path, const NetworkSpec& expected);

}  // namespace ddqn::net
