#pragma once

// Classical networks: the parameter-matched policy (2 -> 8 tanh -> 2 softmax,
// 42 trainable scalars) and the critic value net (2 -> 8 tanh -> 1 without
// output bias, exactly 32 scalars). Both are plain dense math over fixed-size
// Eigen matrices, with hand-written backprop used by the gradient engine.

#include <iosfwd>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "pppo/circuit.hpp"
#include "pppo/observation.hpp"

namespace pppo::baseline {

struct ClassicalPolicyParams {
  Eigen::Matrix<double, 8, 2> w_in = Eigen::Matrix<double, 8, 2>::Zero();
  Eigen::Matrix<double, 8, 1> b_hidden = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 2, 8> w_out = Eigen::Matrix<double, 2, 8>::Zero();
  Eigen::Matrix<double, 2, 1> b_out = Eigen::Matrix<double, 2, 1>::Zero();

  static constexpr int kCount = 42;  // 16 + 8 + 16 + 2
  Eigen::VectorXd to_flat() const;
  static ClassicalPolicyParams from_flat(const Eigen::VectorXd& flat);
};

struct ValueNetParams {
  Eigen::Matrix<double, 8, 2> w_in = Eigen::Matrix<double, 8, 2>::Zero();
  Eigen::Matrix<double, 8, 1> b_hidden = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 1, 8> w_out = Eigen::Matrix<double, 1, 8>::Zero();

  static constexpr int kCount = 32;  // 16 + 8 + 8, no output bias
  Eigen::VectorXd to_flat() const;
  static ValueNetParams from_flat(const Eigen::VectorXd& flat);
};

// logits = w_out * tanh(w_in * obs + b_hidden) + b_out
Eigen::Vector2d classical_logits(const ObservationPair& obs, const ClassicalPolicyParams& params);
circuit::ActionDistribution classical_forward(const ObservationPair& obs,
                                              const ClassicalPolicyParams& params, double tau);

// Backprop of (dL/dlogit0, dL/dlogit1) into the flat 42-parameter gradient.
Eigen::VectorXd classical_logits_backward(const ObservationPair& obs,
                                          const ClassicalPolicyParams& params,
                                          const Eigen::Vector2d& dlogits);

double value_forward(const ObservationPair& obs, const ValueNetParams& params);
// Gradient of the value output w.r.t. the flat 32 parameters.
Eigen::VectorXd value_backward(const ObservationPair& obs, const ValueNetParams& params);

// Weights ~ N(0, 1/fan_in), biases 0; deterministic per engine state.
ClassicalPolicyParams init_classical(std::mt19937_64& rng);
ValueNetParams init_value(std::mt19937_64& rng);

// Same flat named-parameter checkpoint format as the quantum policy.
void write_checkpoint(std::ostream& os, const ClassicalPolicyParams& params);
ClassicalPolicyParams read_classical_checkpoint(std::istream& is);
void write_checkpoint(std::ostream& os, const ValueNetParams& params);
ValueNetParams read_value_checkpoint(std::istream& is);

}  // namespace pppo::baseline
