#include "pppo/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pppo/errors.hpp"
#include "pppo/text_io.hpp"

namespace pppo::circuit {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// M=2 fast path: the amplitude vector viewed as a D x D matrix (mode 0 = rows).
Eigen::VectorXcd apply_single_mode(const Eigen::MatrixXcd& gate, const Eigen::VectorXcd& amps,
                                   int mode, int d) {
  Eigen::Map<const RowMat> a(amps.data(), d, d);
  Eigen::VectorXcd out(amps.size());
  Eigen::Map<RowMat> o(out.data(), d, d);
  if (mode == 0) {
    o.noalias() = gate * a;
  } else {
    o.noalias() = a * gate.transpose();
  }
  return out;
}

void check_two_modes(const fock::SimConfig& cfg) {
  if (cfg.modes != 2) {
    throw ConfigError("circuit: the policy circuit is defined for exactly 2 qumodes");
  }
}

const std::array<const char*, LayerParams::kCount> kSlotNames = {
    "bs1.theta", "bs1.phi", "disp.0",    "disp.1",    "rot1.0", "rot1.1", "bs2.theta",
    "bs2.phi",   "squeeze.0", "squeeze.1", "rot2.0", "rot2.1", "kerr.0", "kerr.1"};

}  // namespace

Eigen::VectorXd PolicyParams::to_flat() const {
  Eigen::VectorXd flat(static_cast<long>(layers.size()) * LayerParams::kCount);
  long i = 0;
  for (const LayerParams& lp : layers) {
    flat[i++] = lp.bs1_theta;
    flat[i++] = lp.bs1_phi;
    flat[i++] = lp.disp[0];
    flat[i++] = lp.disp[1];
    flat[i++] = lp.rot1[0];
    flat[i++] = lp.rot1[1];
    flat[i++] = lp.bs2_theta;
    flat[i++] = lp.bs2_phi;
    flat[i++] = lp.squeeze[0];
    flat[i++] = lp.squeeze[1];
    flat[i++] = lp.rot2[0];
    flat[i++] = lp.rot2[1];
    flat[i++] = lp.kerr[0];
    flat[i++] = lp.kerr[1];
  }
  return flat;
}

PolicyParams PolicyParams::from_flat(const Eigen::VectorXd& flat, EncodingVariant variant) {
  if (flat.size() % LayerParams::kCount != 0) {
    throw ShapeError("PolicyParams::from_flat: length must be a multiple of 14");
  }
  PolicyParams p;
  p.variant = variant;
  p.layers.resize(flat.size() / LayerParams::kCount);
  long i = 0;
  for (LayerParams& lp : p.layers) {
    lp.bs1_theta = flat[i++];
    lp.bs1_phi = flat[i++];
    lp.disp[0] = flat[i++];
    lp.disp[1] = flat[i++];
    lp.rot1[0] = flat[i++];
    lp.rot1[1] = flat[i++];
    lp.bs2_theta = flat[i++];
    lp.bs2_phi = flat[i++];
    lp.squeeze[0] = flat[i++];
    lp.squeeze[1] = flat[i++];
    lp.rot2[0] = flat[i++];
    lp.rot2[1] = flat[i++];
    lp.kerr[0] = flat[i++];
    lp.kerr[1] = flat[i++];
  }
  return p;
}

double feature_transform(double s) {
  if (!std::isfinite(s)) throw NumericalError("feature_transform: input must be finite");
  const double magnitude = (4.0 / std::numbers::pi) * std::cbrt(std::abs(std::atan(s)));
  return std::copysign(magnitude, s);
}

fock::FockState prepare_input(const ObservationPair& obs, const fock::SimConfig& cfg) {
  check_two_modes(cfg);
  fock::FockState state = fock::FockState::vacuum(cfg);
  const fock::GateMatrix init = fock::squeezing_gate(kInitSqueezing, 0.0, cfg);
  state = fock::apply_gate(state, init, 0);
  state = fock::apply_gate(state, init, 1);
  const double x[2] = {feature_transform(obs.pole_angle), feature_transform(obs.angular_velocity)};
  for (int mode = 0; mode < 2; ++mode) {
    state = fock::apply_gate(state, fock::displacement_gate(x[mode], kEncodingPhase, cfg), mode);
  }
  return state;
}

fock::FockState apply_layer(const fock::FockState& state, const LayerParams& lp,
                            const fock::SimConfig& cfg) {
  check_two_modes(cfg);
  fock::FockState s = fock::apply_gate(state, fock::beamsplitter_gate(lp.bs1_theta, lp.bs1_phi, cfg), 0, 1);
  for (int mode = 0; mode < 2; ++mode)
    s = fock::apply_gate(s, fock::displacement_gate(lp.disp[mode], 0.0, cfg), mode);
  for (int mode = 0; mode < 2; ++mode)
    s = fock::apply_gate(s, fock::rotation_gate(lp.rot1[mode], cfg), mode);
  s = fock::apply_gate(s, fock::beamsplitter_gate(lp.bs2_theta, lp.bs2_phi, cfg), 0, 1);
  for (int mode = 0; mode < 2; ++mode)
    s = fock::apply_gate(s, fock::squeezing_gate(lp.squeeze[mode], 0.0, cfg), mode);
  for (int mode = 0; mode < 2; ++mode)
    s = fock::apply_gate(s, fock::rotation_gate(lp.rot2[mode], cfg), mode);
  for (int mode = 0; mode < 2; ++mode)
    s = fock::apply_gate(s, fock::kerr_gate(lp.kerr[mode], cfg), mode);
  return s;
}

CircuitOutputs forward_outputs(const ObservationPair& obs, const PolicyParams& params,
                               const fock::SimConfig& cfg) {
  const CompiledPolicy compiled(params, cfg);
  return compiled.run(obs);
}

std::pair<double, double> forward(const ObservationPair& obs, const PolicyParams& params,
                                  const fock::SimConfig& cfg) {
  const CircuitOutputs out = forward_outputs(obs, params, cfg);
  return {out.p1, out.p2};
}

ActionDistribution policy_distribution(double p1, double p2, double tau) {
  if (!(tau > 0.0)) throw ConfigError("policy_distribution: tau must be positive");
  const double z0 = p1 / tau;
  const double z1 = p2 / tau;
  const double m = std::max(z0, z1);
  const double e0 = std::exp(z0 - m);
  const double e1 = std::exp(z1 - m);
  const double sum = e0 + e1;
  ActionDistribution dist;
  dist.p0 = e0 / sum;
  dist.p1 = e1 / sum;
  dist.log_p0 = (z0 - m) - std::log(sum);
  dist.log_p1 = (z1 - m) - std::log(sum);
  return dist;
}

int param_count(const PolicyParams& params) {
  return static_cast<int>(params.layers.size()) * LayerParams::kCount;
}

PolicyParams init_params(std::mt19937_64& rng, int layers, EncodingVariant variant,
                         double sigma_active) {
  if (layers < 1) throw ConfigError("init_params: need at least one layer");
  const fock::SimConfig defaults;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> active(0.0, sigma_active);
  const auto clamped = [&](double limit) {
    return std::clamp(active(rng), -limit, limit);
  };

  PolicyParams p;
  p.variant = variant;
  p.layers.resize(layers);
  for (LayerParams& lp : p.layers) {
    lp.bs1_theta = phase(rng);
    lp.bs1_phi = phase(rng);
    lp.disp[0] = clamped(defaults.max_displacement);
    lp.disp[1] = clamped(defaults.max_displacement);
    lp.rot1[0] = phase(rng);
    lp.rot1[1] = phase(rng);
    lp.bs2_theta = phase(rng);
    lp.bs2_phi = phase(rng);
    lp.squeeze[0] = clamped(defaults.max_squeezing);
    lp.squeeze[1] = clamped(defaults.max_squeezing);
    lp.rot2[0] = phase(rng);
    lp.rot2[1] = phase(rng);
    lp.kerr[0] = phase(rng);
    lp.kerr[1] = phase(rng);
  }
  return p;
}

CompiledPolicy::CompiledPolicy(const PolicyParams& params, const fock::SimConfig& cfg)
    : cfg_(cfg), variant_(params.variant) {
  check_two_modes(cfg_);
  cfg_.validate();
  n_params_ = circuit::param_count(params);
  const int d = cfg_.cutoff;

  const auto push_single = [&](const Eigen::MatrixXcd& gate, int mode,
                               std::vector<ParamDeriv> derivs = {}) {
    Op op;
    op.gate = gate;
    op.gate_adjoint = gate.adjoint();
    op.mode_a = mode;
    op.derivs = std::move(derivs);
    ops_.push_back(std::move(op));
  };
  const auto push_encode = [&](int mode) {
    Op op;
    op.mode_a = mode;
    op.encode_mode = mode;
    ops_.push_back(std::move(op));
  };

  const fock::GateWithDerivative init = fock::squeezing_with_derivative(kInitSqueezing, 0.0, cfg_);
  push_single(init.gate, 0);
  push_single(init.gate, 1);
  if (variant_ == EncodingVariant::SingleEncode) {
    push_encode(0);
    push_encode(1);
  }

  int base = 0;
  for (const LayerParams& lp : params.layers) {
    if (variant_ == EncodingVariant::Reupload) {
      push_encode(0);
      push_encode(1);
    }
    const auto push_bs = [&](double theta, double phi, int idx_theta, int idx_phi) {
      const fock::BeamsplitterGates bs = fock::beamsplitter_with_derivatives(theta, phi, cfg_);
      Op op;
      op.gate = bs.gate;
      op.gate_adjoint = bs.gate.adjoint();
      op.mode_a = 0;
      op.mode_b = 1;
      op.derivs = {{base + idx_theta, bs.dtheta}, {base + idx_phi, bs.dphi}};
      ops_.push_back(std::move(op));
    };
    push_bs(lp.bs1_theta, lp.bs1_phi, 0, 1);
    for (int mode = 0; mode < 2; ++mode) {
      const auto g = fock::displacement_with_derivative(lp.disp[mode], 0.0, cfg_);
      push_single(g.gate, mode, {{base + 2 + mode, g.derivative}});
    }
    for (int mode = 0; mode < 2; ++mode) {
      const auto g = fock::rotation_with_derivative(lp.rot1[mode], cfg_);
      push_single(g.gate, mode, {{base + 4 + mode, g.derivative}});
    }
    push_bs(lp.bs2_theta, lp.bs2_phi, 6, 7);
    for (int mode = 0; mode < 2; ++mode) {
      const auto g = fock::squeezing_with_derivative(lp.squeeze[mode], 0.0, cfg_);
      push_single(g.gate, mode, {{base + 8 + mode, g.derivative}});
    }
    for (int mode = 0; mode < 2; ++mode) {
      const auto g = fock::rotation_with_derivative(lp.rot2[mode], cfg_);
      push_single(g.gate, mode, {{base + 10 + mode, g.derivative}});
    }
    for (int mode = 0; mode < 2; ++mode) {
      const auto g = fock::kerr_with_derivative(lp.kerr[mode], cfg_);
      push_single(g.gate, mode, {{base + 12 + mode, g.derivative}});
    }
    base += LayerParams::kCount;
  }

  // P = -i c (a - a^dag)
  const Eigen::MatrixXcd a = fock::annihilation_matrix(d);
  quad_p_ = -kI * cfg_.quadrature_scale() * (a - Eigen::MatrixXcd(a.adjoint()));
}

Eigen::VectorXcd CompiledPolicy::apply(const Op& op, const Eigen::MatrixXcd& m,
                                       const Eigen::VectorXcd& amps) const {
  if (op.mode_b >= 0) return m * amps;
  return apply_single_mode(m, amps, op.mode_a, cfg_.cutoff);
}

CircuitOutputs CompiledPolicy::run(const ObservationPair& obs) const {
  const int d = cfg_.cutoff;
  std::array<Eigen::MatrixXcd, 2> enc;
  enc[0] = fock::displacement_gate(feature_transform(obs.pole_angle), kEncodingPhase, cfg_).entries;
  enc[1] = fock::displacement_gate(feature_transform(obs.angular_velocity), kEncodingPhase, cfg_).entries;

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<long>(d) * d);
  amps[0] = 1.0;
  for (const Op& op : ops_) {
    amps = apply(op, op.encode_mode >= 0 ? enc[op.encode_mode] : op.gate, amps);
  }

  const double n2 = amps.squaredNorm();
  if (n2 < 1e-12) throw NumericalError("circuit: output state norm is numerically zero");
  CircuitOutputs out;
  out.squared_norm = n2;
  for (int mode = 0; mode < 2; ++mode) {
    const Eigen::VectorXcd pv = apply_single_mode(quad_p_, amps, mode, d);
    const double expect = std::real(amps.dot(pv)) / n2;
    (mode == 0 ? out.p1 : out.p2) = expect;
  }
  return out;
}

CompiledPolicy::JacobianResult CompiledPolicy::run_with_jacobian(const ObservationPair& obs) const {
  const int d = cfg_.cutoff;
  std::array<Eigen::MatrixXcd, 2> enc;
  std::array<Eigen::MatrixXcd, 2> enc_adj;
  enc[0] = fock::displacement_gate(feature_transform(obs.pole_angle), kEncodingPhase, cfg_).entries;
  enc[1] = fock::displacement_gate(feature_transform(obs.angular_velocity), kEncodingPhase, cfg_).entries;
  enc_adj[0] = enc[0].adjoint();
  enc_adj[1] = enc[1].adjoint();

  const std::size_t n_ops = ops_.size();
  std::vector<Eigen::VectorXcd> states(n_ops + 1);
  states[0] = Eigen::VectorXcd::Zero(static_cast<long>(d) * d);
  states[0][0] = 1.0;
  for (std::size_t k = 0; k < n_ops; ++k) {
    const Op& op = ops_[k];
    states[k + 1] = apply(op, op.encode_mode >= 0 ? enc[op.encode_mode] : op.gate, states[k]);
  }

  const Eigen::VectorXcd& psi = states[n_ops];
  const double n2 = psi.squaredNorm();
  if (n2 < 1e-12) throw NumericalError("circuit: output state norm is numerically zero");

  JacobianResult res;
  res.outputs.squared_norm = n2;
  res.jacobian = Eigen::MatrixXd::Zero(2, n_params_);

  std::array<Eigen::VectorXcd, 2> alpha;  // O_m |psi>, pulled back through the circuit
  std::array<double, 2> expect;
  for (int mode = 0; mode < 2; ++mode) {
    alpha[mode] = apply_single_mode(quad_p_, psi, mode, d);
    expect[mode] = std::real(psi.dot(alpha[mode])) / n2;
  }
  res.outputs.p1 = expect[0];
  res.outputs.p2 = expect[1];
  Eigen::VectorXcd beta = psi;

  for (std::size_t k = n_ops; k-- > 0;) {
    const Op& op = ops_[k];
    for (const ParamDeriv& pd : op.derivs) {
      const Eigen::VectorXcd v = apply(op, pd.matrix, states[k]);
      for (int mode = 0; mode < 2; ++mode) {
        const double ds = 2.0 * std::real(alpha[mode].dot(v));
        const double dn = 2.0 * std::real(beta.dot(v));
        res.jacobian(mode, pd.index) += (ds - expect[mode] * dn) / n2;
      }
    }
    const Eigen::MatrixXcd& adj = op.encode_mode >= 0 ? enc_adj[op.encode_mode] : op.gate_adjoint;
    alpha[0] = apply(op, adj, alpha[0]);
    alpha[1] = apply(op, adj, alpha[1]);
    beta = apply(op, adj, beta);
  }
  return res;
}

void write_checkpoint(std::ostream& os, const PolicyParams& params) {
  const Eigen::VectorXd flat = params.to_flat();
  for (long i = 0; i < flat.size(); ++i) {
    const long layer = i / LayerParams::kCount;
    const long slot = i % LayerParams::kCount;
    os << "layer." << layer << '.' << kSlotNames[slot] << " = " << io::format_full(flat[i]) << '\n';
  }
}

std::string checkpoint_string(const PolicyParams& params) {
  std::ostringstream os;
  write_checkpoint(os, params);
  return os.str();
}

PolicyParams read_checkpoint(std::istream& is, EncodingVariant variant) {
  const io::KvPairs pairs = io::read_kv_stream(is);
  if (pairs.empty() || pairs.size() % LayerParams::kCount != 0) {
    throw ConfigError("policy checkpoint: expected a multiple of 14 parameter lines");
  }
  const long layers = static_cast<long>(pairs.size()) / LayerParams::kCount;
  std::map<std::string, double> values;
  for (const auto& [k, v] : pairs) {
    if (!values.emplace(k, io::parse_double(v)).second) {
      throw ConfigError("policy checkpoint: duplicate key " + k);
    }
  }
  Eigen::VectorXd flat(layers * LayerParams::kCount);
  for (long layer = 0; layer < layers; ++layer) {
    for (int slot = 0; slot < LayerParams::kCount; ++slot) {
      std::ostringstream key;
      key << "layer." << layer << '.' << kSlotNames[slot];
      const auto it = values.find(key.str());
      if (it == values.end()) throw ConfigError("policy checkpoint: missing key " + key.str());
      flat[layer * LayerParams::kCount + slot] = it->second;
    }
  }
  return PolicyParams::from_flat(flat, variant);
}

const char* variant_name(EncodingVariant variant) {
  return variant == EncodingVariant::SingleEncode ? "single" : "reupload";
}

}  // namespace pppo::circuit
