#pragma once

// Uniform policy surface for the PPO trainer. Both policy classes map an
// observation to a pair of action scores that feed the tau-softmax: the
// quantum policies return (<P1>, <P2>), the classical baseline its logits.
// score_jacobian returns the exact 2 x P derivative of the scores, computed
// by adjoint state propagation (quantum) or backprop (classical).

#include <memory>

#include <Eigen/Dense>

#include "pppo/baseline.hpp"
#include "pppo/circuit.hpp"
#include "pppo/fock.hpp"
#include "pppo/observation.hpp"

namespace pppo {

struct Scores {
  double z1 = 0.0;
  double z2 = 0.0;
  double squared_norm = 1.0;  // quantum state retention; 1 for classical policies
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual int param_count() const = 0;
  virtual Eigen::VectorXd flat_params() const = 0;
  virtual void set_flat_params(const Eigen::VectorXd& flat) = 0;

  virtual Scores scores(const ObservationPair& obs) const = 0;
  virtual Eigen::MatrixXd score_jacobian(const ObservationPair& obs, Scores* out) const = 0;

  // L2 penalty over the active-gate magnitudes (displacement + squeezing);
  // identically zero for the classical baseline, which has no active gates.
  virtual double l2_active() const = 0;
  virtual Eigen::VectorXd l2_active_gradient() const = 0;

  virtual std::unique_ptr<Policy> clone() const = 0;
};

class QuantumPolicy final : public Policy {
 public:
  QuantumPolicy(circuit::PolicyParams params, fock::SimConfig cfg);

  int param_count() const override;
  Eigen::VectorXd flat_params() const override;
  void set_flat_params(const Eigen::VectorXd& flat) override;
  Scores scores(const ObservationPair& obs) const override;
  Eigen::MatrixXd score_jacobian(const ObservationPair& obs, Scores* out) const override;
  double l2_active() const override;
  Eigen::VectorXd l2_active_gradient() const override;
  std::unique_ptr<Policy> clone() const override;

  const circuit::PolicyParams& params() const { return params_; }
  const fock::SimConfig& config() const { return cfg_; }

 private:
  const circuit::CompiledPolicy& compiled() const;

  circuit::PolicyParams params_;
  fock::SimConfig cfg_;
  mutable std::unique_ptr<circuit::CompiledPolicy> compiled_;
};

class ClassicalPolicy final : public Policy {
 public:
  explicit ClassicalPolicy(baseline::ClassicalPolicyParams params);

  int param_count() const override;
  Eigen::VectorXd flat_params() const override;
  void set_flat_params(const Eigen::VectorXd& flat) override;
  Scores scores(const ObservationPair& obs) const override;
  Eigen::MatrixXd score_jacobian(const ObservationPair& obs, Scores* out) const override;
  double l2_active() const override;
  Eigen::VectorXd l2_active_gradient() const override;
  std::unique_ptr<Policy> clone() const override;

  const baseline::ClassicalPolicyParams& params() const { return params_; }

 private:
  baseline::ClassicalPolicyParams params_;
};

// Sum of squares of the in-layer displacement and squeezing magnitudes.
double l2_active(const circuit::PolicyParams& params);

}  // namespace pppo
