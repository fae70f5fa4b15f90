#include "msv/actor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace msv {

void ActorConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("actor." + what); };
  if (n_in == 0) fail("n_in must be >= 1");
  if (n_hidden == 0) fail("n_hidden must be >= 1");
  if (n_out == 0) fail("n_out must be >= 1");
  if (!(alpha_flip >= 0.0 && alpha_flip <= 1.0)) fail("alpha_flip must lie in [0, 1]");
  if (!(lr_hidden > 0.0) || !std::isfinite(lr_hidden)) fail("lr_hidden must be positive");
  if (!(lr_out > 0.0) || !std::isfinite(lr_out)) fail("lr_out must be positive");
  if (batch_size == 0) fail("batch_size must be >= 1");
  if (!(dw_min >= 0.0)) fail("dw_min must be non-negative");
  if (!(power_exponent > 0.0) || !std::isfinite(power_exponent))
    fail("power_exponent must be positive");
}

ActorConfig with_learning_rate(ActorConfig config, double lr_hidden) {
  config.lr_hidden = lr_hidden;
  config.lr_out = lr_hidden / 2.0;
  return config;
}

StochasticLayer::StochasticLayer(Eigen::Index n_out, Eigen::Index n_in)
    : weights(Eigen::MatrixXd::Zero(n_out, n_in)),
      bias(Eigen::VectorXd::Zero(n_out)),
      acc_weights(Eigen::MatrixXd::Zero(n_out, n_in)),
      acc_bias(Eigen::VectorXd::Zero(n_out)) {}

bool StochasticLayer::accumulators_zero() const {
  return (acc_weights.array() == 0.0).all() && (acc_bias.array() == 0.0).all();
}

double sigmoid(double z) {
  // Branching keeps exp() from overflowing for large |z|.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LayerTrace sample_layer(const StochasticLayer& layer, const Eigen::VectorXd& input,
                        double flip_probability, Rng& rng) {
  LayerTrace trace;
  trace.input = input;
  const Eigen::VectorXd pre = layer.weights * input + layer.bias;
  const Eigen::Index n = layer.outputs();
  trace.probability.resize(n);
  trace.proposed.resize(n);
  trace.output.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = sigmoid(pre[i]);
    const bool proposed = rng.bernoulli(p);
    const bool flip = rng.bernoulli(flip_probability);
    trace.probability[i] = p;
    trace.proposed[i] = proposed ? 1.0 : 0.0;
    trace.output[i] = (proposed != flip) ? 1.0 : 0.0;
  }
  return trace;
}

ActorStep actor_forward(const ActorNetwork& net, const ActorConfig& config,
                        std::span<const int> x, double expected_reward, Rng& rng) {
  if (static_cast<Eigen::Index>(x.size()) != net.hidden.inputs())
    throw std::invalid_argument("actor input size does not match the hidden layer");
  if (net.output.inputs() != net.hidden.outputs())
    throw std::invalid_argument("actor output layer does not match the hidden layer");

  Eigen::VectorXd input(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0 && x[j] != 1) throw std::invalid_argument("actor input must be binary");
    input[static_cast<Eigen::Index>(j)] = x[j];
  }

  const double r_bar = std::clamp(expected_reward, 0.0, 1.0);
  const double p_flip = config.alpha_flip * (1.0 - r_bar);

  ActorStep step;
  step.trace.hidden = sample_layer(net.hidden, input, p_flip, rng);
  step.trace.output = sample_layer(net.output, step.trace.hidden.output, p_flip, rng);
  step.y = static_cast<int>(step.trace.output.output[0]);
  return step;
}

namespace {

void accumulate_layer(StochasticLayer& layer, const LayerTrace& trace, double scale) {
  const Eigen::VectorXd error = trace.output - trace.probability;
  layer.acc_weights.noalias() += scale * error * trace.input.transpose();
  layer.acc_bias += scale * error;
}

template <typename Fn>
void apply_layer(StochasticLayer& layer, Fn&& rule) {
  layer.weights += layer.acc_weights.unaryExpr(rule);
  layer.bias += layer.acc_bias.unaryExpr(rule);
  layer.acc_weights.setZero();
  layer.acc_bias.setZero();
}

void init_layer(StochasticLayer& layer, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs()));
  for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
      layer.weights(r, c) = rng.uniform(-bound, bound);
}

}  // namespace

void accumulate_update(ActorNetwork& net, const ActorConfig& config, const ForwardTrace& trace,
                       double reward, double expected_reward) {
  const double r_bar = std::clamp(expected_reward, 0.0, 1.0);
  const double advantage = reward - r_bar;
  accumulate_layer(net.hidden, trace.hidden, config.lr_hidden * advantage);
  accumulate_layer(net.output, trace.output, config.lr_out * advantage);
}

double power_law_update(double accumulated, double dw_min, double exponent) {
  const double magnitude = std::abs(accumulated);
  if (!(magnitude > dw_min)) return 0.0;
  return std::copysign(std::pow(magnitude, exponent), accumulated);
}

void apply_batch_update(ActorNetwork& net, const ActorConfig& config) {
  if (config.update_rule == UpdateRule::Linear) {
    auto identity = [](double a) { return a; };
    apply_layer(net.hidden, identity);
    apply_layer(net.output, identity);
  } else {
    auto rule = [&](double a) { return power_law_update(a, config.dw_min, config.power_exponent); };
    apply_layer(net.hidden, rule);
    apply_layer(net.output, rule);
  }
}

ActorNetwork init_actor(const ActorConfig& config, Rng& rng) {
  ActorNetwork net{
      StochasticLayer(static_cast<Eigen::Index>(config.n_hidden),
                      static_cast<Eigen::Index>(config.n_in)),
      StochasticLayer(static_cast<Eigen::Index>(config.n_out),
                      static_cast<Eigen::Index>(config.n_hidden)),
  };
  init_layer(net.hidden, rng);
  init_layer(net.output, rng);
  return net;
}

}  // namespace msv
