#include "pppo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "pppo/errors.hpp"

namespace pppo::fock {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Smallest build dimension that keeps the amplitude leaked past it below
// ~1e-11 for a displacement of magnitude r acting on states populated up to
// the nominal cutoff.
int displacement_build_dim(double r, int cutoff) {
  const double a = std::abs(r);
  const int margin = static_cast<int>(std::ceil(a * a + 6.0 * a * std::sqrt(static_cast<double>(cutoff)) + 16.0));
  return cutoff + margin;
}

// Squeezing scales photon number by ~e^{2r}; pad accordingly.
int squeezing_build_dim(double r, int cutoff) {
  const double a = std::abs(r);
  return static_cast<int>(std::ceil(cutoff * std::exp(2.0 * a))) + 24;
}

Eigen::MatrixXcd displacement_generator(double phi, int dim) {
  const Eigen::MatrixXcd a = annihilation_matrix(dim);
  const Complex u = std::exp(kI * phi);
  return u * a.adjoint() - std::conj(u) * a;
}

Eigen::MatrixXcd squeezing_generator(double phi, int dim) {
  const Eigen::MatrixXcd a = annihilation_matrix(dim);
  const Eigen::MatrixXcd a2 = a * a;
  const Complex u = std::exp(kI * phi);
  return 0.5 * (std::conj(u) * a2 - u * a2.adjoint());
}

// Build exp(r*G) at `build_dim` >= cutoff and truncate both the gate and its
// exact r-derivative G*exp(r*G) back to cutoff x cutoff.
GateWithDerivative padded_gate(const Eigen::MatrixXcd& generator, double r, int cutoff) {
  const Eigen::MatrixXcd full = matrix_exponential(r * generator);
  GateWithDerivative out;
  out.gate = full.topLeftCorner(cutoff, cutoff);
  out.derivative = (generator * full).topLeftCorner(cutoff, cutoff);
  return out;
}

void check_mode(const SimConfig& cfg, int mode) {
  if (mode < 0 || mode >= cfg.modes) {
    throw ShapeError("mode index out of range");
  }
}

}  // namespace

void SimConfig::validate() const {
  if (modes < 1) throw ConfigError("SimConfig: modes must be >= 1");
  if (cutoff < 2) throw ConfigError("SimConfig: cutoff must be >= 2");
  if (!(hbar > 0.0)) throw ConfigError("SimConfig: hbar must be positive");
}

long SimConfig::dim() const { return ipow(cutoff, modes); }

double SimConfig::quadrature_scale() const { return std::sqrt(hbar / 2.0); }

FockState FockState::vacuum(const SimConfig& cfg) {
  cfg.validate();
  FockState s;
  s.config = cfg;
  s.amplitudes = Eigen::VectorXcd::Zero(cfg.dim());
  s.amplitudes[0] = 1.0;
  return s;
}

double FockState::squared_norm() const { return amplitudes.squaredNorm(); }

Eigen::MatrixXcd annihilation_matrix(int cutoff) {
  if (cutoff < 2) throw ConfigError("annihilation_matrix: cutoff must be >= 2");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& generator) {
  if (generator.rows() != generator.cols()) {
    throw ShapeError("matrix_exponential: input must be square");
  }
  const double scale = std::max(1.0, generator.cwiseAbs().maxCoeff());
  const double herm_defect = (generator + generator.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > 1e-9 * scale) {
    throw ShapeError("matrix_exponential: generator is not anti-Hermitian");
  }
  // G = iH with H Hermitian; exp(G) = V diag(e^{i w}) V^dag.
  const Eigen::MatrixXcd h = -kI * generator;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("matrix_exponential: eigendecomposition failed");
  }
  const Eigen::VectorXcd phases =
      (kI * eig.eigenvalues().array().cast<Complex>()).exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

GateWithDerivative displacement_with_derivative(double r, double phi, const SimConfig& cfg) {
  cfg.validate();
  if (std::abs(r) > cfg.max_displacement) {
    throw GateDomainError("displacement magnitude exceeds safety limit");
  }
  const int build = displacement_build_dim(r, cfg.cutoff);
  GateWithDerivative g = padded_gate(displacement_generator(phi, build), r, cfg.cutoff);
  return g;
}

GateMatrix displacement_gate(double r, double phi, const SimConfig& cfg) {
  return {displacement_with_derivative(r, phi, cfg).gate, GateArity::One};
}

GateWithDerivative squeezing_with_derivative(double r, double phi, const SimConfig& cfg) {
  cfg.validate();
  if (std::abs(r) > cfg.max_squeezing) {
    throw GateDomainError("squeezing magnitude exceeds safety limit");
  }
  const int build = squeezing_build_dim(r, cfg.cutoff);
  return padded_gate(squeezing_generator(phi, build), r, cfg.cutoff);
}

GateMatrix squeezing_gate(double r, double phi, const SimConfig& cfg) {
  return {squeezing_with_derivative(r, phi, cfg).gate, GateArity::One};
}

GateWithDerivative rotation_with_derivative(double phi, const SimConfig& cfg) {
  cfg.validate();
  const int d = cfg.cutoff;
  GateWithDerivative g;
  g.gate = Eigen::MatrixXcd::Zero(d, d);
  g.derivative = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    const Complex u = std::exp(kI * (phi * n));
    g.gate(n, n) = u;
    g.derivative(n, n) = kI * static_cast<double>(n) * u;
  }
  return g;
}

GateMatrix rotation_gate(double phi, const SimConfig& cfg) {
  return {rotation_with_derivative(phi, cfg).gate, GateArity::One};
}

GateWithDerivative kerr_with_derivative(double kappa, const SimConfig& cfg) {
  cfg.validate();
  const int d = cfg.cutoff;
  GateWithDerivative g;
  g.gate = Eigen::MatrixXcd::Zero(d, d);
  g.derivative = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const Complex u = std::exp(kI * (kappa * n2));
    g.gate(n, n) = u;
    g.derivative(n, n) = kI * n2 * u;
  }
  return g;
}

GateMatrix kerr_gate(double kappa, const SimConfig& cfg) {
  return {kerr_with_derivative(kappa, cfg).gate, GateArity::One};
}

// The beamsplitter generator conserves total photon number, so the gate is
// assembled sector by sector: each total-N sector is exponentiated on its
// full (N+1)-dimensional basis and then restricted to the in-cutoff states.
// For N <= D-1 the sector lies entirely inside the cutoff and the block is
// exactly unitary; higher sectors are genuinely sub-unitary (leakage).
BeamsplitterGates beamsplitter_with_derivatives(double theta, double phi, const SimConfig& cfg) {
  cfg.validate();
  const int d = cfg.cutoff;
  const long dim2 = static_cast<long>(d) * d;
  BeamsplitterGates out;
  out.gate = Eigen::MatrixXcd::Zero(dim2, dim2);
  out.dtheta = Eigen::MatrixXcd::Zero(dim2, dim2);
  out.dphi = Eigen::MatrixXcd::Zero(dim2, dim2);

  const Complex u = std::exp(kI * phi);
  for (int total = 0; total <= 2 * (d - 1); ++total) {
    const int size = total + 1;  // basis n1 = 0..total, n2 = total - n1
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(size, size);
    for (int n1 = 0; n1 + 1 <= total; ++n1) {
      // e^{i phi} a1^dag a2 : |n1, n2> -> sqrt((n1+1) n2) |n1+1, n2-1>
      const double c = std::sqrt(static_cast<double>(n1 + 1) * (total - n1));
      gen(n1 + 1, n1) = u * c;
      gen(n1, n1 + 1) = -std::conj(u) * c;
    }
    const Eigen::MatrixXcd block = matrix_exponential(theta * gen);
    const Eigen::MatrixXcd dblock = gen * block;

    const int lo = std::max(0, total - (d - 1));
    const int hi = std::min(total, d - 1);
    for (int r = lo; r <= hi; ++r) {
      const long row = static_cast<long>(r) * d + (total - r);
      for (int c = lo; c <= hi; ++c) {
        const long col = static_cast<long>(c) * d + (total - c);
        out.gate(row, col) = block(r, c);
        out.dtheta(row, col) = dblock(r, c);
      }
    }
  }

  // BS(theta, phi) = R1(phi) BS(theta, 0) R1(-phi) holds exactly in the
  // truncated space, so d/dphi = i [n1, BS].
  for (long r = 0; r < dim2; ++r) {
    const double n1r = static_cast<double>(r / d);
    for (long c = 0; c < dim2; ++c) {
      const double n1c = static_cast<double>(c / d);
      out.dphi(r, c) = kI * (n1r - n1c) * out.gate(r, c);
    }
  }
  return out;
}

GateMatrix beamsplitter_gate(double theta, double phi, const SimConfig& cfg) {
  return {beamsplitter_with_derivatives(theta, phi, cfg).gate, GateArity::Two};
}

FockState apply_gate(const FockState& state, const GateMatrix& gate, int mode) {
  const SimConfig& cfg = state.config;
  check_mode(cfg, mode);
  if (gate.arity != GateArity::One || gate.entries.rows() != cfg.cutoff ||
      gate.entries.cols() != cfg.cutoff) {
    throw ShapeError("apply_gate: single-mode gate has wrong shape");
  }
  const int d = cfg.cutoff;
  const long dim = state.amplitudes.size();
  const long stride = ipow(d, cfg.modes - 1 - mode);
  const long block = stride * d;

  FockState out;
  out.config = cfg;
  out.amplitudes = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd x(d), y(d);
  for (long base = 0; base < dim; base += block) {
    for (long inner = 0; inner < stride; ++inner) {
      for (int n = 0; n < d; ++n) x[n] = state.amplitudes[base + inner + n * stride];
      y.noalias() = gate.entries * x;
      for (int n = 0; n < d; ++n) out.amplitudes[base + inner + n * stride] = y[n];
    }
  }
  return out;
}

FockState apply_gate(const FockState& state, const GateMatrix& gate, int mode_a, int mode_b) {
  const SimConfig& cfg = state.config;
  check_mode(cfg, mode_a);
  check_mode(cfg, mode_b);
  if (mode_a == mode_b) throw ShapeError("apply_gate: two-mode gate needs distinct modes");
  const int d = cfg.cutoff;
  const long d2 = static_cast<long>(d) * d;
  if (gate.arity != GateArity::Two || gate.entries.rows() != d2 || gate.entries.cols() != d2) {
    throw ShapeError("apply_gate: two-mode gate has wrong shape");
  }
  const long dim = state.amplitudes.size();
  const long stride_a = ipow(d, cfg.modes - 1 - mode_a);
  const long stride_b = ipow(d, cfg.modes - 1 - mode_b);

  FockState out;
  out.config = cfg;
  out.amplitudes = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd x(d2), y(d2);
  for (long base = 0; base < dim; ++base) {
    // visit each slice once: indices with zero digits on both target modes
    if ((base / stride_a) % d != 0 || (base / stride_b) % d != 0) continue;
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb)
        x[static_cast<long>(na) * d + nb] = state.amplitudes[base + na * stride_a + nb * stride_b];
    y.noalias() = gate.entries * x;
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb)
        out.amplitudes[base + na * stride_a + nb * stride_b] = y[static_cast<long>(na) * d + nb];
  }
  return out;
}

double quadrature_expectation(const FockState& state, int mode, double phi) {
  const SimConfig& cfg = state.config;
  check_mode(cfg, mode);
  const double n2 = state.squared_norm();
  if (n2 < 1e-12) {
    throw NumericalError("quadrature_expectation: state norm is numerically zero");
  }
  const int d = cfg.cutoff;
  const long dim = state.amplitudes.size();
  const long stride = ipow(d, cfg.modes - 1 - mode);

  // <a> via the strided lowering action: a |..., n, ...> = sqrt(n) |..., n-1, ...>
  Complex mean_a = 0.0;
  for (long idx = 0; idx < dim; ++idx) {
    const int n = static_cast<int>((idx / stride) % d);
    if (n == 0) continue;
    mean_a += std::conj(state.amplitudes[idx - stride]) *
              (std::sqrt(static_cast<double>(n)) * state.amplitudes[idx]);
  }
  const double c = cfg.quadrature_scale();
  return 2.0 * c * std::real(std::exp(-kI * phi) * mean_a) / n2;
}

double mean_photon_number(const FockState& state, int mode) {
  const SimConfig& cfg = state.config;
  check_mode(cfg, mode);
  const double n2 = state.squared_norm();
  if (n2 < 1e-12) {
    throw NumericalError("mean_photon_number: state norm is numerically zero");
  }
  const int d = cfg.cutoff;
  const long stride = ipow(d, cfg.modes - 1 - mode);
  double acc = 0.0;
  for (long idx = 0; idx < state.amplitudes.size(); ++idx) {
    const int n = static_cast<int>((idx / stride) % d);
    acc += n * std::norm(state.amplitudes[idx]);
  }
  return acc / n2;
}

void dump_gate(const GateMatrix& gate, std::ostream& os) {
  const auto& m = gate.entries;
  char buf[64];
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(r, c).real(), m(r, c).imag());
      os << (c ? " " : "") << buf;
    }
    os << '\n';
  }
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool report(std::ostream& os, const char* name, double err, double tol) {
  const bool ok = err <= tol;
  os << (ok ? "PASS" : "FAIL") << "  " << name << "  (max err " << err << ", tol " << tol << ")\n";
  return ok;
}

}  // namespace

bool selftest(std::ostream& os) {
  bool all = true;
  SimConfig cfg;
  cfg.modes = 1;
  cfg.cutoff = 16;

  // Coherent columns of D(r, phi) against e^{-r^2/2} alpha^n / sqrt(n!)
  for (double r : {0.5, 1.0, 2.0}) {
    const double phi = 0.7;
    const GateMatrix dgate = displacement_gate(r, phi, cfg);
    const Complex alpha = r * std::exp(kI * phi);
    double err = 0.0;
    for (int n = 0; n <= 8; ++n) {
      const Complex expect = std::exp(-0.5 * r * r) * std::pow(alpha, n) / std::sqrt(factorial(n));
      err = std::max(err, std::abs(dgate.entries(n, 0) - expect));
    }
    std::ostringstream name;
    name << "displacement coherent column r=" << r;
    all &= report(os, name.str().c_str(), err, 1e-9);
  }

  // Squeezed vacuum amplitudes of S(0.5, 0)
  {
    const double r = 0.5;
    const GateMatrix sgate = squeezing_gate(r, 0.0, cfg);
    double err = 0.0;
    for (int n = 0; n < cfg.cutoff; ++n) {
      Complex expect = 0.0;
      if (n % 2 == 0) {
        const int m = n / 2;
        expect = std::pow(-std::tanh(r), m) * std::sqrt(factorial(2 * m)) /
                 (std::pow(2.0, m) * factorial(m) * std::sqrt(std::cosh(r)));
      }
      err = std::max(err, std::abs(sgate.entries(n, 0) - expect));
    }
    all &= report(os, "squeezed vacuum column r=0.5", err, 1e-8);
  }

  // Rotation / Kerr unitarity
  {
    const GateMatrix rot = rotation_gate(1.234, cfg);
    const GateMatrix kerr = kerr_gate(0.789, cfg);
    const double err_r = (rot.entries.adjoint() * rot.entries -
                          Eigen::MatrixXcd::Identity(cfg.cutoff, cfg.cutoff))
                             .cwiseAbs()
                             .maxCoeff();
    const double err_k = (kerr.entries.adjoint() * kerr.entries -
                          Eigen::MatrixXcd::Identity(cfg.cutoff, cfg.cutoff))
                             .cwiseAbs()
                             .maxCoeff();
    all &= report(os, "rotation unitarity", err_r, 1e-12);
    all &= report(os, "kerr unitarity", err_k, 1e-12);
  }

  // Truncated commutator diag(1, ..., 1, -(D-1))
  {
    double err = 0.0;
    for (int d : {2, 4, 16}) {
      const Eigen::MatrixXcd a = annihilation_matrix(d);
      Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
      for (int n = 0; n < d - 1; ++n) comm(n, n) -= 1.0;
      comm(d - 1, d - 1) += static_cast<double>(d - 1);
      err = std::max(err, comm.cwiseAbs().maxCoeff());
    }
    all &= report(os, "truncated commutator identity", err, 1e-12);
  }

  // Beamsplitter photon-number block structure and 50:50 splitting
  {
    SimConfig two = cfg;
    two.modes = 2;
    two.cutoff = 8;
    const GateMatrix bs = beamsplitter_gate(0.3, 0.4, two);
    double err = 0.0;
    const int d = two.cutoff;
    for (long r = 0; r < bs.entries.rows(); ++r)
      for (long c = 0; c < bs.entries.cols(); ++c)
        if (r / d + r % d != c / d + c % d) err = std::max(err, std::abs(bs.entries(r, c)));
    all &= report(os, "beamsplitter number conservation", err, 1e-12);

    FockState one_photon = FockState::vacuum(two);
    one_photon.amplitudes[0] = 0.0;
    one_photon.amplitudes[1 * d + 0] = 1.0;  // |1, 0>
    const GateMatrix half = beamsplitter_gate(std::acos(-1.0) / 4.0, 0.0, two);
    const FockState split = apply_gate(one_photon, half, 0, 1);
    const double p10 = std::norm(split.amplitudes[1 * d + 0]);
    const double p01 = std::norm(split.amplitudes[0 * d + 1]);
    const double err5050 = std::max(std::abs(p10 - 0.5), std::abs(p01 - 0.5));
    all &= report(os, "beamsplitter 50:50 single photon", err5050, 1e-12);
  }

  // Quadrature oracle on coherent states: <X> = 2c Re(alpha), <P> = 2c Im(alpha)
  {
    SimConfig one = cfg;
    const FockState vac = FockState::vacuum(one);
    const FockState coh = apply_gate(vac, displacement_gate(1.0, 0.0, one), 0);
    const FockState cohp = apply_gate(vac, displacement_gate(1.0, std::acos(-1.0) / 2.0, one), 0);
    const double c = one.quadrature_scale();
    const double err_x = std::abs(quadrature_expectation(coh, 0, 0.0) - 2.0 * c);
    const double err_p = std::abs(quadrature_expectation(cohp, 0, std::acos(-1.0) / 2.0) - 2.0 * c);
    all &= report(os, "coherent quadrature expectations", std::max(err_x, err_p), 1e-9);
  }

  return all;
}

}  // namespace pppo::fock
