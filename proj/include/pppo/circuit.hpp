#pragma once

// The photonic policy circuit: squeezed-vacuum initialization, displacement
// data encoding (single or re-uploaded per layer), the layered variational
// ansatz of Fig-2 type (BS, D, R, BS, S, R, K), homodyne P-quadrature readout
// and the tau-softmax action distribution.

#include <array>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pppo/fock.hpp"
#include "pppo/observation.hpp"

namespace pppo::circuit {

inline constexpr double kInitSqueezing = 0.5;   // S(1/2, 0) on each qumode
inline constexpr double kEncodingPhase = 1.5707963267948966;  // pi/2: displace along P

// One variational layer for M=2: exactly 14 trainable scalars.
struct LayerParams {
  double bs1_theta = 0.0;
  double bs1_phi = 0.0;
  std::array<double, 2> disp{0.0, 0.0};     // magnitudes, phase fixed 0
  std::array<double, 2> rot1{0.0, 0.0};
  double bs2_theta = 0.0;
  double bs2_phi = 0.0;
  std::array<double, 2> squeeze{0.0, 0.0};  // magnitudes, phase fixed 0
  std::array<double, 2> rot2{0.0, 0.0};
  std::array<double, 2> kerr{0.0, 0.0};

  static constexpr int kCount = 14;
};

enum class EncodingVariant { SingleEncode, Reupload };

struct PolicyParams {
  std::vector<LayerParams> layers;
  EncodingVariant variant = EncodingVariant::SingleEncode;

  Eigen::VectorXd to_flat() const;
  static PolicyParams from_flat(const Eigen::VectorXd& flat, EncodingVariant variant);
};

struct ActionDistribution {
  double p0 = 0.5;
  double p1 = 0.5;
  double log_p0 = 0.0;
  double log_p1 = 0.0;
};

// Eq.-(7)-style squashing: sign(s) * (4/pi) * |arctan(s)|^(1/3).
// Odd, monotone, bounded by (4/pi)*(pi/2)^(1/3) ~ 1.48007.
double feature_transform(double s);

// Vacuum -> per-mode S(0.5, 0) -> per-mode D(feature_transform(s_k), pi/2).
fock::FockState prepare_input(const ObservationPair& obs, const fock::SimConfig& cfg);

// BS(bs1); D(disp_k); R(rot1_k); BS(bs2); S(squeeze_k); R(rot2_k); K(kerr_k).
fock::FockState apply_layer(const fock::FockState& state, const LayerParams& lp,
                            const fock::SimConfig& cfg);

struct CircuitOutputs {
  double p1 = 0.0;            // <P> on mode 0
  double p2 = 0.0;            // <P> on mode 1
  double squared_norm = 1.0;  // truncation retention of the output state
};

// Full forward pass; compiles the gate set on every call. Prefer
// CompiledPolicy when evaluating the same parameters repeatedly.
std::pair<double, double> forward(const ObservationPair& obs, const PolicyParams& params,
                                  const fock::SimConfig& cfg);
CircuitOutputs forward_outputs(const ObservationPair& obs, const PolicyParams& params,
                               const fock::SimConfig& cfg);

// Stable softmax over (p1/tau, p2/tau).
ActionDistribution policy_distribution(double p1, double p2, double tau);

int param_count(const PolicyParams& params);

// Phases (beamsplitter angles, rotations, Kerr) uniform on [0, 2pi); active
// magnitudes (displacement, squeezing) ~ N(0, sigma^2) clamped to the gate
// safety limits.
PolicyParams init_params(std::mt19937_64& rng, int layers,
                         EncodingVariant variant = EncodingVariant::SingleEncode,
                         double sigma_active = 0.05);

// Gate matrices (and their exact parameter derivatives) cached for fixed
// parameters; only the data-encoding displacements are rebuilt per call.
class CompiledPolicy {
 public:
  CompiledPolicy(const PolicyParams& params, const fock::SimConfig& cfg);

  CircuitOutputs run(const ObservationPair& obs) const;

  struct JacobianResult {
    CircuitOutputs outputs;
    // 2 x param_count: d(p1, p2)/d(theta) via adjoint state propagation
    Eigen::MatrixXd jacobian;
  };
  JacobianResult run_with_jacobian(const ObservationPair& obs) const;

  int param_count() const { return n_params_; }
  const fock::SimConfig& config() const { return cfg_; }

 private:
  struct ParamDeriv {
    int index;                 // flat parameter index
    Eigen::MatrixXcd matrix;   // exact d(gate)/d(param)
  };
  struct Op {
    Eigen::MatrixXcd gate;     // empty for encoding slots (built per run)
    Eigen::MatrixXcd gate_adjoint;
    int mode_a = 0;
    int mode_b = -1;           // >= 0 marks a two-mode gate
    int encode_mode = -1;      // >= 0 marks a data-encoding displacement
    std::vector<ParamDeriv> derivs;
  };

  Eigen::VectorXcd apply(const Op& op, const Eigen::MatrixXcd& m,
                         const Eigen::VectorXcd& amps) const;
  std::vector<Op> build_ops(const ObservationPair& obs) const;

  fock::SimConfig cfg_;
  EncodingVariant variant_;
  int n_params_ = 0;
  std::vector<Op> ops_;                 // encoding ops carry empty matrices
  Eigen::MatrixXcd quad_p_;             // single-mode P operator matrix
};

// Flat named-parameter text checkpoint: "layer.<i>.<gate>.<slot> = <decimal>"
// with 17 significant digits (value-exact round trip).
void write_checkpoint(std::ostream& os, const PolicyParams& params);
PolicyParams read_checkpoint(std::istream& is, EncodingVariant variant);
std::string checkpoint_string(const PolicyParams& params);

const char* variant_name(EncodingVariant variant);

}  // namespace pppo::circuit
