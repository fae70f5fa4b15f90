#include "msv/critic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "msv/actor.hpp"

namespace msv {

void CriticConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("critic." + what); };
  if (n_in == 0) fail("n_in must be >= 1");
  if (n_hidden == 0) fail("n_hidden must be >= 1");
  if (!(lr > 0.0) || !std::isfinite(lr)) fail("lr must be positive");
  if (!(l1_coeff >= 0.0) || !std::isfinite(l1_coeff)) fail("l1_coeff must be non-negative");
  if (batch_size != 1) fail("batch_size must be 1");
}

CriticForward critic_forward(const CriticNetwork& net, std::span<const int> x) {
  if (static_cast<Eigen::Index>(x.size()) != net.w_hidden.cols())
    throw std::invalid_argument("critic input size does not match the hidden layer");
  CriticForward fwd;
  fwd.input.resize(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0 && x[j] != 1) throw std::invalid_argument("critic input must be binary");
    fwd.input[static_cast<Eigen::Index>(j)] = x[j];
  }
  const Eigen::VectorXd pre = net.w_hidden * fwd.input + net.b_hidden;
  fwd.hidden = pre.unaryExpr([](double z) { return sigmoid(z); });
  fwd.output = sigmoid(net.w_out.dot(fwd.hidden) + net.b_out);
  return fwd;
}

void critic_update(CriticNetwork& net, const CriticConfig& config, const CriticForward& forward,
                   double reward) {
  const double error = reward - forward.output;
  const Eigen::VectorXd signal = error * forward.hidden.cwiseProduct(net.w_out);
  const Eigen::MatrixXd l1 =
      net.w_hidden.unaryExpr([](double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); });
  net.w_hidden += config.lr * (signal * forward.input.transpose() - config.l1_coeff * l1);
  net.b_hidden += config.lr * signal;
}

CriticNetwork init_critic(const CriticConfig& config, Rng& rng) {
  const auto n_hidden = static_cast<Eigen::Index>(config.n_hidden);
  const auto n_in = static_cast<Eigen::Index>(config.n_in);
  CriticNetwork net;
  net.w_hidden.resize(n_hidden, n_in);
  net.b_hidden = Eigen::VectorXd::Zero(n_hidden);
  net.w_out.resize(n_hidden);
  net.b_out = 0.5;

  const double bound = 1.0 / std::sqrt(static_cast<double>(config.n_in));
  for (Eigen::Index r = 0; r < n_hidden; ++r)
    for (Eigen::Index c = 0; c < n_in; ++c) net.w_hidden(r, c) = rng.uniform(-bound, bound);
  for (Eigen::Index i = 0; i < n_hidden; ++i) net.w_out[i] = rng.uniform(-1.25, 1.25);
  return net;
}

}  // namespace msv
