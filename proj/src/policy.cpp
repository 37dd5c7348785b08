#include "pppo/policy.hpp"

#include <utility>

namespace pppo {

double l2_active(const circuit::PolicyParams& params) {
  double sum = 0.0;
  for (const circuit::LayerParams& lp : params.layers) {
    for (int mode = 0; mode < 2; ++mode) {
      sum += lp.disp[mode] * lp.disp[mode];
      sum += lp.squeeze[mode] * lp.squeeze[mode];
    }
  }
  return sum;
}

QuantumPolicy::QuantumPolicy(circuit::PolicyParams params, fock::SimConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {}

const circuit::CompiledPolicy& QuantumPolicy::compiled() const {
  if (!compiled_) {
    compiled_ = std::make_unique<circuit::CompiledPolicy>(params_, cfg_);
  }
  return *compiled_;
}

int QuantumPolicy::param_count() const { return circuit::param_count(params_); }

Eigen::VectorXd QuantumPolicy::flat_params() const { return params_.to_flat(); }

void QuantumPolicy::set_flat_params(const Eigen::VectorXd& flat) {
  params_ = circuit::PolicyParams::from_flat(flat, params_.variant);
  compiled_.reset();
}

Scores QuantumPolicy::scores(const ObservationPair& obs) const {
  const circuit::CircuitOutputs out = compiled().run(obs);
  return {out.p1, out.p2, out.squared_norm};
}

Eigen::MatrixXd QuantumPolicy::score_jacobian(const ObservationPair& obs, Scores* out) const {
  const auto res = compiled().run_with_jacobian(obs);
  if (out != nullptr) {
    *out = {res.outputs.p1, res.outputs.p2, res.outputs.squared_norm};
  }
  return res.jacobian;
}

double QuantumPolicy::l2_active() const { return pppo::l2_active(params_); }

Eigen::VectorXd QuantumPolicy::l2_active_gradient() const {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(param_count());
  const int n = circuit::LayerParams::kCount;
  for (std::size_t l = 0; l < params_.layers.size(); ++l) {
    const circuit::LayerParams& lp = params_.layers[l];
    const long base = static_cast<long>(l) * n;
    grad[base + 2] = 2.0 * lp.disp[0];
    grad[base + 3] = 2.0 * lp.disp[1];
    grad[base + 8] = 2.0 * lp.squeeze[0];
    grad[base + 9] = 2.0 * lp.squeeze[1];
  }
  return grad;
}

std::unique_ptr<Policy> QuantumPolicy::clone() const {
  return std::make_unique<QuantumPolicy>(params_, cfg_);
}

ClassicalPolicy::ClassicalPolicy(baseline::ClassicalPolicyParams params) : params_(params) {}

int ClassicalPolicy::param_count() const { return baseline::ClassicalPolicyParams::kCount; }

Eigen::VectorXd ClassicalPolicy::flat_params() const { return params_.to_flat(); }

void ClassicalPolicy::set_flat_params(const Eigen::VectorXd& flat) {
  params_ = baseline::ClassicalPolicyParams::from_flat(flat);
}

Scores ClassicalPolicy::scores(const ObservationPair& obs) const {
  const Eigen::Vector2d logits = baseline::classical_logits(obs, params_);
  return {logits[0], logits[1], 1.0};
}

Eigen::MatrixXd ClassicalPolicy::score_jacobian(const ObservationPair& obs, Scores* out) const {
  if (out != nullptr) *out = scores(obs);
  Eigen::MatrixXd jac(2, param_count());
  jac.row(0) = baseline::classical_logits_backward(obs, params_, {1.0, 0.0}).transpose();
  jac.row(1) = baseline::classical_logits_backward(obs, params_, {0.0, 1.0}).transpose();
  return jac;
}

double ClassicalPolicy::l2_active() const { return 0.0; }

Eigen::VectorXd ClassicalPolicy::l2_active_gradient() const {
  return Eigen::VectorXd::Zero(param_count());
}

std::unique_ptr<Policy> ClassicalPolicy::clone() const {
  return std::make_unique<ClassicalPolicy>(params_);
}

}  // namespace pppo
