#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "msv/random.hpp"

namespace msv {

struct CriticConfig {
  std::size_t n_in = 2;
  std::size_t n_hidden = 20;
  double lr = 1.0;
  double l1_coeff = 0.001;
  /// Only per-presentation training (1) is supported.
  std::size_t batch_size = 1;

  void validate() const;
};

// Sigmoidal reward predictor. The output layer is fixed at initialization;
// only the hidden layer learns.
struct CriticNetwork {
  Eigen::MatrixXd w_hidden;  // n_hidden x n_in
  Eigen::VectorXd b_hidden;
  Eigen::VectorXd w_out;
  double b_out = 0.5;
};

struct CriticForward {
  Eigen::VectorXd input;
  Eigen::VectorXd hidden;
  double output = 0.0;
};

/// Throws std::invalid_argument on a size mismatch or a non-binary input.
CriticForward critic_forward(const CriticNetwork& net, std::span<const int> x);

/// Hidden-layer rule with the output weights held fixed:
///   dw_ij = lr * ((R - y_out) * y_i * w_out_i * y_j - l1 * sign(w_ij))
/// Biases use y_j = 1 and no L1 term. `forward` must be the pass for the
/// same input on the current weights.
void critic_update(CriticNetwork& net, const CriticConfig& config, const CriticForward& forward,
                   double reward);

CriticNetwork init_critic(const CriticConfig& config, Rng& rng);

}  // namespace msv
