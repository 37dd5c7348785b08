#pragma once

// Truncated Fock-basis simulator for continuous-variable photonic circuits.
//
// States live on M qumodes with per-mode cutoff D (Hilbert dimension D^M),
// amplitudes indexed by the multi-index (n_0, ..., n_{M-1}) with mode 0 as the
// most significant digit. Gates are synthesized as matrix exponentials of
// their (anti-Hermitian) generators; non-number-conserving gates are built in
// an enlarged Fock space and truncated back to the nominal cutoff, so applying
// them loses exactly the amplitude that leaks past the cutoff. Quadrature
// scale follows the hbar convention in SimConfig; the default hbar = 2 gives
// X = a + a^dag and P = -i(a - a^dag).

#include <complex>
#include <iosfwd>

#include <Eigen/Dense>

namespace pppo::fock {

struct SimConfig {
  int modes = 2;
  int cutoff = 16;
  double hbar = 2.0;
  // Gate-parameter safety limits; exceeding them raises GateDomainError
  // instead of silently producing a garbage truncated state.
  double max_displacement = 4.0;
  double max_squeezing = 1.5;

  void validate() const;
  long dim() const;  // D^M
  double quadrature_scale() const;  // sqrt(hbar/2); 1 under the default convention
};

enum class GateArity { One, Two };

struct GateMatrix {
  Eigen::MatrixXcd entries;  // D x D (one mode) or D^2 x D^2 (two modes)
  GateArity arity = GateArity::One;
};

// A gate together with the exact derivative of its truncated matrix with
// respect to the gate parameter. Used by the adjoint gradient engine.
struct GateWithDerivative {
  Eigen::MatrixXcd gate;
  Eigen::MatrixXcd derivative;
};

struct BeamsplitterGates {
  Eigen::MatrixXcd gate;
  Eigen::MatrixXcd dtheta;
  Eigen::MatrixXcd dphi;
};

struct FockState {
  Eigen::VectorXcd amplitudes;
  SimConfig config;

  static FockState vacuum(const SimConfig& cfg);
  double squared_norm() const;
};

// <n-1|a|n> = sqrt(n) on the superdiagonal, zero elsewhere.
Eigen::MatrixXcd annihilation_matrix(int cutoff);

// exp(G) for anti-Hermitian G, via the eigendecomposition of the Hermitian -iG.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& generator);

// D(r, phi) = exp(r e^{i phi} a^dag - r e^{-i phi} a)
GateMatrix displacement_gate(double r, double phi, const SimConfig& cfg);
// S(z) = exp((z* a^2 - z a^dag^2)/2), z = r e^{i phi}
GateMatrix squeezing_gate(double r, double phi, const SimConfig& cfg);
// diag(e^{i n phi}); exactly unitary
GateMatrix rotation_gate(double phi, const SimConfig& cfg);
// diag(e^{i kappa n^2}); exactly unitary
GateMatrix kerr_gate(double kappa, const SimConfig& cfg);
// exp(theta (e^{i phi} a^dag b - e^{-i phi} a b^dag)); photon-number conserving
GateMatrix beamsplitter_gate(double theta, double phi, const SimConfig& cfg);

GateWithDerivative displacement_with_derivative(double r, double phi, const SimConfig& cfg);
GateWithDerivative squeezing_with_derivative(double r, double phi, const SimConfig& cfg);
GateWithDerivative rotation_with_derivative(double phi, const SimConfig& cfg);
GateWithDerivative kerr_with_derivative(double kappa, const SimConfig& cfg);
BeamsplitterGates beamsplitter_with_derivatives(double theta, double phi, const SimConfig& cfg);

FockState apply_gate(const FockState& state, const GateMatrix& gate, int mode);
FockState apply_gate(const FockState& state, const GateMatrix& gate, int mode_a, int mode_b);

// <psi| X_phi |psi> / <psi|psi> with X_phi = X cos(phi) + P sin(phi);
// phi = pi/2 yields <P>.
double quadrature_expectation(const FockState& state, int mode, double phi);

// <n_mode> of the (norm-corrected) state; diagnostic.
double mean_photon_number(const FockState& state, int mode);

// Plain-text dump for cross-implementation diffing: one matrix row per line,
// entries as "re,im" pairs separated by single spaces.
void dump_gate(const GateMatrix& gate, std::ostream& os);

// Runs the closed-form gate oracles and prints one line per check.
// Returns true when every check passes.
bool selftest(std::ostream& os);

}  // namespace pppo::fock
