#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "msv/random.hpp"

namespace msv {

enum class UpdateRule { Linear, PowerLaw };

struct ActorConfig {
  std::size_t n_in = 2;
  std::size_t n_hidden = 10;
  std::size_t n_out = 1;
  double alpha_flip = 0.1;
  double lr_hidden = 1.1;
  double lr_out = 0.55;
  std::size_t batch_size = 10;
  double dw_min = 0.4;
  UpdateRule update_rule = UpdateRule::PowerLaw;
  double power_exponent = 1.75;

  void validate() const;
};

/// Hidden-layer rate `lr_hidden`, output rate half of it.
ActorConfig with_learning_rate(ActorConfig config, double lr_hidden);

/// One fully connected layer of stochastic binary neurons together with its
/// per-batch accumulated updates.
struct StochasticLayer {
  Eigen::MatrixXd weights;  // n_out x n_in
  Eigen::VectorXd bias;
  Eigen::MatrixXd acc_weights;
  Eigen::VectorXd acc_bias;

  StochasticLayer() = default;
  StochasticLayer(Eigen::Index n_out, Eigen::Index n_in);

  Eigen::Index inputs() const { return weights.cols(); }
  Eigen::Index outputs() const { return weights.rows(); }
  bool accumulators_zero() const;
};

struct ActorNetwork {
  StochasticLayer hidden;
  StochasticLayer output;
};

struct LayerTrace {
  Eigen::VectorXd input;
  Eigen::VectorXd probability;
  Eigen::VectorXd proposed;
  Eigen::VectorXd output;
};

struct ForwardTrace {
  LayerTrace hidden;
  LayerTrace output;
};

struct ActorStep {
  int y = 0;
  ForwardTrace trace;
};

double sigmoid(double z);

/// Samples every neuron of a layer. Each neuron draws its proposed bit from
/// Bernoulli(p) and then flips it with probability `flip_probability`.
/// Consumes exactly two uniforms per neuron regardless of the flip rate.
LayerTrace sample_layer(const StochasticLayer& layer, const Eigen::VectorXd& input,
                        double flip_probability, Rng& rng);

/// Forward pass through hidden and output layers. `expected_reward` is the
/// critic's prediction and is clamped into [0, 1] before computing the flip
/// probability alpha_flip * (1 - expected_reward). Returns output neuron 0.
/// Throws std::invalid_argument on a size mismatch or a non-binary input.
ActorStep actor_forward(const ActorNetwork& net, const ActorConfig& config,
                        std::span<const int> x, double expected_reward, Rng& rng);

/// Policy-gradient accumulation:
///   acc += lr * (reward - expected_reward) * (y_i - p_i) * y_j
/// with y_j = 1 for biases.
void accumulate_update(ActorNetwork& net, const ActorConfig& config, const ForwardTrace& trace,
                       double reward, double expected_reward);

/// Thresholded power law: sign(a) * |a|^exponent if |a| > dw_min, else 0.
double power_law_update(double accumulated, double dw_min, double exponent);

/// Adds the accumulated batch change to every parameter through the
/// configured rule, then zeroes the accumulators.
void apply_batch_update(ActorNetwork& net, const ActorConfig& config);

/// Weights uniform on [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
ActorNetwork init_actor(const ActorConfig& config, Rng& rng);

}  // namespace msv
