#include "pppo/fock.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pppo/errors.hpp"

using namespace pppo;
using namespace pppo::fock;
using Complex = std::complex<double>;

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Closed-form coherent-state amplitudes: <n|D(alpha)|0> = e^{-|a|^2/2} a^n / sqrt(n!)
Complex coherent_amplitude(Complex alpha, int n) {
  return std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
}

// Closed-form squeezed-vacuum amplitudes for real squeezing r:
// <2m|S(r,0)|0> = (cosh r)^{-1/2} (-tanh r)^m sqrt((2m)!) / (2^m m!), odd entries 0.
double squeezed_amplitude(double r, int n) {
  if (n % 2 != 0) return 0.0;
  const int m = n / 2;
  return std::pow(-std::tanh(r), m) * std::sqrt(factorial(2 * m)) /
         (std::pow(2.0, m) * factorial(m) * std::sqrt(std::cosh(r)));
}

SimConfig one_mode(int cutoff = 16) {
  SimConfig cfg;
  cfg.modes = 1;
  cfg.cutoff = cutoff;
  return cfg;
}

SimConfig two_mode(int cutoff = 16) {
  SimConfig cfg;
  cfg.modes = 2;
  cfg.cutoff = cutoff;
  return cfg;
}

}  // namespace

TEST_CASE("annihilation matrix entries") {
  SUBCASE("D=2") {
    const auto a = annihilation_matrix(2);
    CHECK(a(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(a(0, 0)) == 0.0);
    CHECK(std::abs(a(1, 0)) == 0.0);
    CHECK(std::abs(a(1, 1)) == 0.0);
  }
  SUBCASE("superdiagonal sqrt(n), D=4") {
    const auto a = annihilation_matrix(4);
    for (int n = 1; n < 4; ++n) {
      CHECK(std::abs(a(n - 1, n) - std::sqrt(static_cast<double>(n))) < 1e-15);
    }
    // everything else exactly zero
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (c != r + 1) CHECK(std::abs(a(r, c)) == 0.0);
  }
  SUBCASE("rejects D < 2") { CHECK_THROWS_AS(annihilation_matrix(1), ConfigError); }
}

TEST_CASE("truncated commutator is diag(1,...,1,-(D-1))") {
  for (int d : {2, 4, 16}) {
    const auto a = annihilation_matrix(d);
    const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const double expect = (r != c) ? 0.0 : (r == d - 1 ? -(d - 1.0) : 1.0);
        CHECK(std::abs(comm(r, c) - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("matrix exponential") {
  SUBCASE("zero generator gives identity") {
    const Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(5, 5);
    const auto e = matrix_exponential(g);
    CHECK((e - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("diagonal generator i*phi*diag(0..D-1)") {
    const int d = 6;
    const double phi = 0.9321;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) g(n, n) = kI * (phi * n);
    const auto e = matrix_exponential(g);
    for (int n = 0; n < d; ++n) {
      CHECK(std::abs(e(n, n) - std::exp(kI * (phi * n))) < 1e-12);
    }
  }
  SUBCASE("displacement generator column 0 matches coherent amplitudes at D=20") {
    const int d = 20;
    const auto a = annihilation_matrix(d);
    const Eigen::MatrixXcd g = a.adjoint() - a;  // alpha = 1
    const auto e = matrix_exponential(g);
    // truncation at D=20 limits agreement to ~|amplitude at the cutoff| ~ 4e-10
    for (int n = 0; n < 10; ++n) {
      CHECK(std::abs(e(n, 0) - coherent_amplitude(1.0, n)) < 1e-8);
    }
  }
  SUBCASE("rejects non-square input") {
    CHECK_THROWS_AS(matrix_exponential(Eigen::MatrixXcd::Zero(3, 4)), ShapeError);
  }
  SUBCASE("rejects non-anti-Hermitian input") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(3, 3);
    g(0, 0) = 1.0;  // Hermitian, not anti-Hermitian
    CHECK_THROWS_AS(matrix_exponential(g), ShapeError);
  }
}

TEST_CASE("displacement gate oracles") {
  const auto cfg = one_mode();
  SUBCASE("r=0 is identity") {
    const auto g = displacement_gate(0.0, 0.3, cfg);
    CHECK((g.entries - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("coherent columns for r in {0.5, 1, 2}") {
    for (double r : {0.5, 1.0, 2.0}) {
      for (double phi : {0.0, kPi / 2}) {
        const auto g = displacement_gate(r, phi, cfg);
        const Complex alpha = r * std::exp(kI * phi);
        for (int n = 0; n <= 8; ++n) {
          CHECK(std::abs(g.entries(n, 0) - coherent_amplitude(alpha, n)) < 1e-9);
        }
      }
    }
  }
  SUBCASE("vacuum overlap e^{-r^2/2}") {
    for (double r : {0.25, 1.0, 2.0}) {
      const auto g = displacement_gate(r, 1.1, cfg);
      CHECK(std::abs(g.entries(0, 0) - std::exp(-0.5 * r * r)) < 1e-9);
    }
  }
  SUBCASE("column norms stay near 1 while n + energy is well below the cutoff") {
    // exact-truncation semantics: the defect equals the probability leaked
    // past the cutoff, so it grows with column index and magnitude.
    for (double r : {0.25, 0.5, 1.0}) {
      const auto g = displacement_gate(r, 0.0, cfg);
      for (int n = 0; n <= 4; ++n) {
        CHECK(std::abs(g.entries.col(n).norm() - 1.0) < 1e-6);
      }
    }
    // at r=2 only the vacuum column stays this clean (Poisson tail ~ 5e-6)
    const auto g2 = displacement_gate(2.0, 0.0, cfg);
    CHECK(std::abs(g2.entries.col(0).norm() - 1.0) < 1e-5);
  }
  SUBCASE("safety limit") {
    CHECK_THROWS_AS(displacement_gate(4.5, 0.0, cfg), GateDomainError);
  }
}

TEST_CASE("squeezing gate oracles") {
  const auto cfg = one_mode();
  SUBCASE("r=0 is identity") {
    const auto g = squeezing_gate(0.0, 0.0, cfg);
    CHECK((g.entries - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("squeezed vacuum column") {
    for (double r : {0.25, 0.5, 0.75}) {
      const auto g = squeezing_gate(r, 0.0, cfg);
      for (int n = 0; n < 16; ++n) {
        CHECK(std::abs(g.entries(n, 0) - squeezed_amplitude(r, n)) < 1e-8);
      }
    }
  }
  SUBCASE("vacuum overlap 1/sqrt(cosh r) at r=0.5") {
    const auto g = squeezing_gate(0.5, 0.0, cfg);
    const double expect = 1.0 / std::sqrt(std::cosh(0.5));  // = 0.9417100...
    CHECK(std::abs(g.entries(0, 0) - expect) < 1e-9);
    CHECK(expect == doctest::Approx(0.94171).epsilon(1e-4));
    // photons are created in pairs
    CHECK(std::abs(g.entries(1, 0)) < 1e-12);
  }
  SUBCASE("column norms at training-scale magnitudes") {
    const auto g = squeezing_gate(0.1, 0.0, cfg);
    for (int n = 0; n <= 4; ++n) {
      CHECK(std::abs(g.entries.col(n).norm() - 1.0) < 1e-6);
    }
  }
  SUBCASE("safety limit") {
    CHECK_THROWS_AS(squeezing_gate(1.6, 0.0, cfg), GateDomainError);
  }
}

TEST_CASE("rotation gate") {
  SUBCASE("phi=0 identity, phi=2pi identity") {
    const auto cfg = one_mode(8);
    CHECK((rotation_gate(0.0, cfg).entries - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((rotation_gate(2 * kPi, cfg).entries - Eigen::MatrixXcd::Identity(8, 8))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  SUBCASE("phi=pi/2 at D=4 gives diag(1, i, -1, -i)") {
    const auto g = rotation_gate(kPi / 2, one_mode(4));
    const Complex expect[4] = {1.0, kI, -1.0, -kI};
    for (int n = 0; n < 4; ++n) CHECK(std::abs(g.entries(n, n) - expect[n]) < 1e-12);
  }
  SUBCASE("exactly unitary") {
    const auto g = rotation_gate(1.2345, one_mode());
    CHECK((g.entries.adjoint() * g.entries - Eigen::MatrixXcd::Identity(16, 16))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("kerr gate") {
  SUBCASE("kappa=0 identity") {
    const auto g = kerr_gate(0.0, one_mode(8));
    CHECK((g.entries - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("kappa=pi at D=3 gives diag(1, -1, 1)") {
    const auto g = kerr_gate(kPi, one_mode(3));
    CHECK(std::abs(g.entries(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(g.entries(1, 1) + 1.0) < 1e-12);
    CHECK(std::abs(g.entries(2, 2) - 1.0) < 1e-12);
  }
  SUBCASE("unit modulus determinant and unitarity") {
    const auto g = kerr_gate(0.4321, one_mode(6));
    CHECK(std::abs(std::abs(g.entries.determinant()) - 1.0) < 1e-12);
    CHECK((g.entries.adjoint() * g.entries - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("beamsplitter gate") {
  const auto cfg = two_mode(8);
  SUBCASE("theta=0 identity") {
    const auto g = beamsplitter_gate(0.0, 0.7, cfg);
    CHECK((g.entries - Eigen::MatrixXcd::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("conserves total photon number for random angles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = beamsplitter_gate(uni(rng), uni(rng), cfg);
      const int d = cfg.cutoff;
      for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
          if (r / d + r % d != c / d + c % d) CHECK(std::abs(g.entries(r, c)) < 1e-12);
    }
  }
  SUBCASE("50:50 splitter on |1,0>") {
    const auto g = beamsplitter_gate(kPi / 4, 0.0, cfg);
    FockState s = FockState::vacuum(cfg);
    s.amplitudes[0] = 0.0;
    s.amplitudes[1 * cfg.cutoff + 0] = 1.0;
    const auto out = apply_gate(s, g, 0, 1);
    CHECK(std::norm(out.amplitudes[1 * cfg.cutoff + 0]) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::norm(out.amplitudes[0 * cfg.cutoff + 1]) == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("low sectors are exactly unitary blocks") {
    const auto g = beamsplitter_gate(0.9, 1.3, cfg);
    // column |1,1> lies in total=2, entirely inside the cutoff
    const long col = 1 * cfg.cutoff + 1;
    CHECK(std::abs(g.entries.col(col).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_gate") {
  const auto cfg = two_mode(10);
  SUBCASE("identity leaves the state unchanged") {
    GateMatrix id{Eigen::MatrixXcd::Identity(10, 10), GateArity::One};
    FockState s = FockState::vacuum(cfg);
    s.amplitudes[3] = 0.5;
    s.amplitudes[0] = std::sqrt(0.75);
    const auto out = apply_gate(s, id, 1);
    CHECK((out.amplitudes - s.amplitudes).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("rotation on vacuum is vacuum") {
    const FockState vac = FockState::vacuum(cfg);
    const auto out = apply_gate(vac, rotation_gate(0.77, cfg), 1);
    CHECK((out.amplitudes - vac.amplitudes).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("displaced vacuum has <n> = r^2 on the displaced mode only") {
    const FockState vac = FockState::vacuum(two_mode(16));
    const auto out = apply_gate(vac, displacement_gate(1.0, 0.0, two_mode(16)), 0);
    CHECK(mean_photon_number(out, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mean_photon_number(out, 1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("norm never increases") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    FockState s = FockState::vacuum(cfg);
    for (long i = 0; i < s.amplitudes.size(); ++i) s.amplitudes[i] = Complex(gauss(rng), gauss(rng));
    s.amplitudes /= s.amplitudes.norm();
    std::uniform_real_distribution<double> uni(-0.6, 0.6);
    double prev = s.squared_norm();
    for (int step = 0; step < 6; ++step) {
      s = apply_gate(s, displacement_gate(uni(rng), uni(rng), cfg), step % 2);
      s = apply_gate(s, beamsplitter_gate(uni(rng), uni(rng), cfg), 0, 1);
      const double now = s.squared_norm();
      CHECK(now <= prev + 1e-12);
      prev = now;
    }
  }
  SUBCASE("arity and mode mismatches raise shape errors") {
    const FockState vac = FockState::vacuum(cfg);
    GateMatrix wrong{Eigen::MatrixXcd::Identity(4, 4), GateArity::One};
    CHECK_THROWS_AS(apply_gate(vac, wrong, 0), ShapeError);
    CHECK_THROWS_AS(apply_gate(vac, rotation_gate(0.1, cfg), 5), ShapeError);
    const auto bs = beamsplitter_gate(0.1, 0.0, cfg);
    CHECK_THROWS_AS(apply_gate(vac, bs, 0), ShapeError);
    CHECK_THROWS_AS(apply_gate(vac, bs, 1, 1), ShapeError);
  }
}

TEST_CASE("quadrature expectations") {
  const auto cfg = one_mode();
  const double c = cfg.quadrature_scale();
  SUBCASE("vacuum gives zero at any angle") {
    const FockState vac = FockState::vacuum(cfg);
    for (double phi : {0.0, 0.3, kPi / 2, 2.0}) {
      CHECK(std::abs(quadrature_expectation(vac, 0, phi)) < 1e-14);
    }
  }
  SUBCASE("coherent state oracles") {
    const FockState vac = FockState::vacuum(cfg);
    const auto x_state = apply_gate(vac, displacement_gate(1.0, 0.0, cfg), 0);
    CHECK(quadrature_expectation(x_state, 0, 0.0) == doctest::Approx(2.0 * c).epsilon(1e-9));
    CHECK(std::abs(quadrature_expectation(x_state, 0, kPi / 2)) < 1e-9);
    const auto p_state = apply_gate(vac, displacement_gate(1.0, kPi / 2, cfg), 0);
    CHECK(quadrature_expectation(p_state, 0, kPi / 2) == doctest::Approx(2.0 * c).epsilon(1e-9));
  }
  SUBCASE("normalization makes the value scale-invariant") {
    const FockState vac = FockState::vacuum(cfg);
    auto s = apply_gate(vac, displacement_gate(0.8, 0.2, cfg), 0);
    const double full = quadrature_expectation(s, 0, 0.2);
    s.amplitudes *= 0.5;
    CHECK(quadrature_expectation(s, 0, 0.2) == doctest::Approx(full).epsilon(1e-12));
  }
  SUBCASE("zero-norm state raises") {
    FockState s = FockState::vacuum(cfg);
    s.amplitudes.setZero();
    CHECK_THROWS_AS(quadrature_expectation(s, 0, 0.0), NumericalError);
  }
}

TEST_CASE("hbar convention rescales quadratures") {
  SimConfig a = one_mode();
  SimConfig b = one_mode();
  b.hbar = 1.0;
  const auto sa = apply_gate(FockState::vacuum(a), displacement_gate(1.0, 0.0, a), 0);
  const auto sb = apply_gate(FockState::vacuum(b), displacement_gate(1.0, 0.0, b), 0);
  const double xa = quadrature_expectation(sa, 0, 0.0);
  const double xb = quadrature_expectation(sb, 0, 0.0);
  CHECK(xa == doctest::Approx(std::sqrt(2.0) * xb).epsilon(1e-12));
}

TEST_CASE("gate dump format") {
  const auto g = rotation_gate(0.0, one_mode(3));
  std::ostringstream os;
  dump_gate(g, os);
  CHECK(os.str() == "1,0 0,0 0,0\n0,0 1,0 0,0\n0,0 0,0 1,0\n");
}

TEST_CASE("exact derivative matrices match finite differences of the construction") {
  const auto cfg = one_mode(12);
  const double h = 1e-6;
  SUBCASE("displacement") {
    const auto g = displacement_with_derivative(0.7, 0.0, cfg);
    const auto gp = displacement_gate(0.7 + h, 0.0, cfg);
    const auto gm = displacement_gate(0.7 - h, 0.0, cfg);
    const Eigen::MatrixXcd fd = (gp.entries - gm.entries) / (2 * h);
    CHECK((fd - g.derivative).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("squeezing") {
    const auto g = squeezing_with_derivative(0.4, 0.0, cfg);
    const auto gp = squeezing_gate(0.4 + h, 0.0, cfg);
    const auto gm = squeezing_gate(0.4 - h, 0.0, cfg);
    const Eigen::MatrixXcd fd = (gp.entries - gm.entries) / (2 * h);
    CHECK((fd - g.derivative).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("beamsplitter theta and phi") {
    const auto two = two_mode(6);
    const auto g = beamsplitter_with_derivatives(0.6, 0.9, two);
    const auto tp = beamsplitter_gate(0.6 + h, 0.9, two);
    const auto tm = beamsplitter_gate(0.6 - h, 0.9, two);
    CHECK((((tp.entries - tm.entries) / (2 * h)) - g.dtheta).cwiseAbs().maxCoeff() < 1e-8);
    const auto pp = beamsplitter_gate(0.6, 0.9 + h, two);
    const auto pm = beamsplitter_gate(0.6, 0.9 - h, two);
    CHECK((((pp.entries - pm.entries) / (2 * h)) - g.dphi).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("rotation and kerr") {
    const auto gr = rotation_with_derivative(0.8, cfg);
    const Eigen::MatrixXcd fdr =
        (rotation_gate(0.8 + h, cfg).entries - rotation_gate(0.8 - h, cfg).entries) / (2 * h);
    CHECK((fdr - gr.derivative).cwiseAbs().maxCoeff() < 1e-8);
    const auto gk = kerr_with_derivative(0.3, cfg);
    const Eigen::MatrixXcd fdk =
        (kerr_gate(0.3 + h, cfg).entries - kerr_gate(0.3 - h, cfg).entries) / (2 * h);
    // central-difference truncation error itself is ~h^2 n^6 here
    CHECK((fdk - gk.derivative).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("fock selftest passes") {
  std::ostringstream os;
  CHECK(selftest(os));
}
