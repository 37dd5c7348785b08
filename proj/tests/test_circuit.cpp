#include "pppo/circuit.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pppo/errors.hpp"

using namespace pppo;
using namespace pppo::circuit;

namespace {

constexpr double kPi = std::numbers::pi;

fock::SimConfig sim(int cutoff = 16) {
  fock::SimConfig cfg;
  cfg.modes = 2;
  cfg.cutoff = cutoff;
  return cfg;
}

PolicyParams zero_params(int layers, EncodingVariant variant) {
  PolicyParams p;
  p.variant = variant;
  p.layers.resize(layers);
  return p;
}

}  // namespace

TEST_CASE("feature transform") {
  SUBCASE("zero maps to zero") { CHECK(feature_transform(0.0) == 0.0); }
  SUBCASE("direct evaluation at s=1") {
    const double expect = (4.0 / kPi) * std::cbrt(kPi / 4.0);  // = 1.174719...
    CHECK(feature_transform(1.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(feature_transform(1.0) == doctest::Approx(1.1747).epsilon(1e-4));
  }
  SUBCASE("odd, monotone, bounded") {
    const double sup = (4.0 / kPi) * std::cbrt(kPi / 2.0);  // = 1.48007...
    double prev = -2.0;
    for (double s = -50.0; s <= 50.0; s += 0.37) {
      const double x = feature_transform(s);
      CHECK(x == doctest::Approx(-feature_transform(-s)).epsilon(1e-12));
      CHECK(std::abs(x) < 1.4804);
      CHECK(std::abs(x) <= sup + 1e-12);
      CHECK(x > prev);
      prev = x;
    }
    CHECK(feature_transform(1e12) == doctest::Approx(sup).epsilon(1e-4));
  }
  SUBCASE("non-finite input raises") {
    CHECK_THROWS_AS(feature_transform(std::nan("")), NumericalError);
  }
}

TEST_CASE("prepare_input") {
  const auto cfg = sim();
  SUBCASE("zero observation gives the two-mode squeezed product") {
    const fock::FockState s = prepare_input({0.0, 0.0}, cfg);
    // <00|psi0> = 1/cosh(0.5)
    CHECK(std::abs(s.amplitudes[0] - 1.0 / std::cosh(0.5)) < 1e-8);
    CHECK(std::abs(fock::quadrature_expectation(s, 0, kPi / 2)) < 1e-10);
    CHECK(std::abs(fock::quadrature_expectation(s, 1, kPi / 2)) < 1e-10);
  }
  SUBCASE("encoding keeps the state well inside the cutoff") {
    for (double angle : {0.0, 0.2, -3.0}) {
      const fock::FockState s = prepare_input({angle, 1.0}, cfg);
      CHECK(s.squared_norm() >= 0.999);
    }
  }
  SUBCASE("positive angle displaces P of mode 0 only, sign checked") {
    const fock::FockState s = prepare_input({1.0, 0.0}, cfg);
    const double p1 = fock::quadrature_expectation(s, 0, kPi / 2);
    const double p2 = fock::quadrature_expectation(s, 1, kPi / 2);
    CHECK(p1 > 0.0);
    CHECK(std::abs(p2) < 1e-10);
    // coherent-state oracle: <P> = 2 c x for displacement D(x, pi/2)
    const double x = feature_transform(1.0);
    CHECK(p1 == doctest::Approx(2.0 * cfg.quadrature_scale() * x).epsilon(1e-6));
  }
}

TEST_CASE("apply_layer") {
  const auto cfg = sim();
  SUBCASE("all-zero layer is the identity") {
    const fock::FockState in = prepare_input({0.3, -0.4}, cfg);
    const fock::FockState out = apply_layer(in, LayerParams{}, cfg);
    CHECK((out.amplitudes - in.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("kerr-only layer fixes the vacuum") {
    LayerParams lp;
    lp.kerr = {0.7, 1.3};
    const fock::FockState vac = fock::FockState::vacuum(cfg);
    const fock::FockState out = apply_layer(vac, lp, cfg);
    CHECK(std::abs(out.amplitudes[0] - 1.0) < 1e-12);
  }
  SUBCASE("random small layers keep the vacuum norm above 0.99") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(0.0, 2 * kPi);
    std::uniform_real_distribution<double> mag(-0.5, 0.5);
    for (int trial = 0; trial < 3; ++trial) {
      LayerParams lp;
      lp.bs1_theta = phase(rng);
      lp.bs1_phi = phase(rng);
      lp.disp = {mag(rng), mag(rng)};
      lp.rot1 = {phase(rng), phase(rng)};
      lp.bs2_theta = phase(rng);
      lp.bs2_phi = phase(rng);
      lp.squeeze = {mag(rng), mag(rng)};
      lp.rot2 = {phase(rng), phase(rng)};
      lp.kerr = {phase(rng), phase(rng)};
      const fock::FockState out = apply_layer(fock::FockState::vacuum(cfg), lp, cfg);
      CHECK(out.squared_norm() >= 0.99);
    }
  }
}

TEST_CASE("forward") {
  const auto cfg = sim();
  SUBCASE("zero params, zero observation gives (0, 0)") {
    const auto [p1, p2] = forward({0.0, 0.0}, zero_params(3, EncodingVariant::SingleEncode), cfg);
    CHECK(std::abs(p1) < 1e-10);
    CHECK(std::abs(p2) < 1e-10);
  }
  SUBCASE("zero params reduce single-encode forward to prepare_input readout") {
    const ObservationPair obs{0.4, -0.8};
    const auto [p1, p2] = forward(obs, zero_params(3, EncodingVariant::SingleEncode), cfg);
    const fock::FockState s = prepare_input(obs, cfg);
    CHECK(p1 == doctest::Approx(fock::quadrature_expectation(s, 0, kPi / 2)).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(fock::quadrature_expectation(s, 1, kPi / 2)).epsilon(1e-12));
  }
  SUBCASE("layer-count independence at the all-zero point") {
    const ObservationPair obs{0.7, 0.1};
    const auto one = forward(obs, zero_params(1, EncodingVariant::SingleEncode), cfg);
    const auto three = forward(obs, zero_params(3, EncodingVariant::SingleEncode), cfg);
    CHECK(one.first == three.first);
    CHECK(one.second == three.second);
  }
  SUBCASE("reupload with zero params stacks the encoding displacements") {
    // brute-force oracle: D(x)^3 S(0.5)|0> evolved gate by gate
    const ObservationPair obs{1.0, 0.0};
    const auto [p1, p2] = forward(obs, zero_params(3, EncodingVariant::Reupload), cfg);
    const double x = feature_transform(obs.pole_angle);
    fock::FockState ref = fock::FockState::vacuum(cfg);
    const fock::GateMatrix init = fock::squeezing_gate(kInitSqueezing, 0.0, cfg);
    ref = fock::apply_gate(ref, init, 0);
    ref = fock::apply_gate(ref, init, 1);
    const fock::GateMatrix enc = fock::displacement_gate(x, kPi / 2, cfg);
    for (int rep = 0; rep < 3; ++rep) ref = fock::apply_gate(ref, enc, 0);
    CHECK(p1 == doctest::Approx(fock::quadrature_expectation(ref, 0, kPi / 2)).epsilon(1e-10));
    CHECK(std::abs(p2) < 1e-10);
    // and it exceeds the single-encode response
    const auto single = forward(obs, zero_params(3, EncodingVariant::SingleEncode), cfg);
    CHECK(p1 > 2.0 * single.first);
  }
  SUBCASE("deterministic outputs") {
    std::mt19937_64 rng(42);
    const PolicyParams params = init_params(rng, 3, EncodingVariant::Reupload);
    const ObservationPair obs{0.05, -0.3};
    const auto a = forward(obs, params, sim(8));
    const auto b = forward(obs, params, sim(8));
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
  }
  SUBCASE("mode-relabeling symmetry") {
    std::mt19937_64 rng(9);
    PolicyParams params = init_params(rng, 2, EncodingVariant::SingleEncode);
    // swap the per-mode parameter pairs
    PolicyParams swapped = params;
    for (LayerParams& lp : swapped.layers) {
      std::swap(lp.disp[0], lp.disp[1]);
      std::swap(lp.rot1[0], lp.rot1[1]);
      std::swap(lp.squeeze[0], lp.squeeze[1]);
      std::swap(lp.rot2[0], lp.rot2[1]);
      std::swap(lp.kerr[0], lp.kerr[1]);
      // swapping modes conjugates the beamsplitter: theta -> -theta at swapped phase
      lp.bs1_phi = -lp.bs1_phi;
      lp.bs1_theta = -lp.bs1_theta;
      lp.bs2_phi = -lp.bs2_phi;
      lp.bs2_theta = -lp.bs2_theta;
    }
    const ObservationPair obs{0.4, -0.2};
    const ObservationPair obs_swapped{-0.2, 0.4};
    const auto a = forward(obs, params, sim(10));
    const auto b = forward(obs_swapped, swapped, sim(10));
    CHECK(a.first == doctest::Approx(b.second).epsilon(1e-9));
    CHECK(a.second == doctest::Approx(b.first).epsilon(1e-9));
  }
}

TEST_CASE("policy distribution") {
  SUBCASE("symmetry") {
    const ActionDistribution d = policy_distribution(0.37, 0.37, 1.0);
    CHECK(d.p0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.p1 == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("direct evaluation at (1, 0), tau=1") {
    const ActionDistribution d = policy_distribution(1.0, 0.0, 1.0);
    const double e = std::exp(1.0);
    CHECK(d.p0 == doctest::Approx(e / (e + 1.0)).epsilon(1e-12));
    CHECK(d.p1 == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-12));
    CHECK(d.p0 == doctest::Approx(0.7311).epsilon(1e-4));
  }
  SUBCASE("high temperature flattens") {
    const ActionDistribution d = policy_distribution(1.0, 0.0, 1e9);
    CHECK(std::abs(d.p0 - 0.5) < 1e-9);
  }
  SUBCASE("probabilities sum to one and match their logs") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-30.0, 30.0);
    for (int i = 0; i < 200; ++i) {
      const ActionDistribution d = policy_distribution(uni(rng), uni(rng), 0.7);
      CHECK(std::abs(d.p0 + d.p1 - 1.0) < 1e-12);
      CHECK(std::abs(std::log(d.p0) - d.log_p0) < 1e-12);
      CHECK(std::abs(std::log(d.p1) - d.log_p1) < 1e-12);
      CHECK(d.p0 > 0.0);
      CHECK(d.p1 > 0.0);
    }
  }
  SUBCASE("invalid temperature") {
    CHECK_THROWS_AS(policy_distribution(1.0, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(policy_distribution(1.0, 0.0, -2.0), ConfigError);
  }
}

TEST_CASE("parameter counting") {
  CHECK(param_count(zero_params(3, EncodingVariant::SingleEncode)) == 42);
  CHECK(param_count(zero_params(3, EncodingVariant::Reupload)) == 42);
  CHECK(param_count(zero_params(1, EncodingVariant::SingleEncode)) == 14);
  CHECK(param_count(PolicyParams{}) == 0);
}

TEST_CASE("init_params") {
  SUBCASE("deterministic per seed") {
    std::mt19937_64 a(7), b(7);
    const PolicyParams pa = init_params(a, 3, EncodingVariant::SingleEncode);
    const PolicyParams pb = init_params(b, 3, EncodingVariant::SingleEncode);
    CHECK((pa.to_flat() - pb.to_flat()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("active magnitudes have the configured spread, phases cover [0, 2pi)") {
    std::mt19937_64 rng(123);
    double sq_sum = 0.0;
    int n_active = 0;
    double max_phase = 0.0, min_phase = 10.0;
    const int draws = 2500;  // 10^4 active magnitudes over 2500 layers
    for (int i = 0; i < draws; ++i) {
      const PolicyParams p = init_params(rng, 1, EncodingVariant::SingleEncode);
      const LayerParams& lp = p.layers[0];
      for (double v : {lp.disp[0], lp.disp[1], lp.squeeze[0], lp.squeeze[1]}) {
        sq_sum += v * v;
        ++n_active;
        CHECK(std::abs(v) <= 1.5);
      }
      for (double v : {lp.bs1_theta, lp.bs1_phi, lp.rot1[0], lp.kerr[1]}) {
        max_phase = std::max(max_phase, v);
        min_phase = std::min(min_phase, v);
      }
    }
    const double sigma = std::sqrt(sq_sum / n_active);
    CHECK(sigma == doctest::Approx(0.05).epsilon(0.10));
    CHECK(max_phase > 6.0);
    CHECK(min_phase < 0.3);
    CHECK(max_phase < 2 * kPi);
    CHECK(min_phase >= 0.0);
  }
  SUBCASE("rejects zero layers") {
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(init_params(rng, 0, EncodingVariant::SingleEncode), ConfigError);
  }
}

TEST_CASE("compiled policy matches the gate-by-gate forward") {
  std::mt19937_64 rng(21);
  for (EncodingVariant variant : {EncodingVariant::SingleEncode, EncodingVariant::Reupload}) {
    const PolicyParams params = init_params(rng, 2, variant);
    const auto cfg = sim(10);
    const CompiledPolicy compiled(params, cfg);
    const ObservationPair obs{0.3, -0.6};
    const CircuitOutputs fast = compiled.run(obs);

    // reference: prepare/encode/apply_layer pipeline over public fock ops
    fock::FockState s = fock::FockState::vacuum(cfg);
    const fock::GateMatrix init = fock::squeezing_gate(kInitSqueezing, 0.0, cfg);
    s = fock::apply_gate(s, init, 0);
    s = fock::apply_gate(s, init, 1);
    const double x0 = feature_transform(obs.pole_angle);
    const double x1 = feature_transform(obs.angular_velocity);
    const auto encode = [&](fock::FockState in) {
      in = fock::apply_gate(in, fock::displacement_gate(x0, kPi / 2, cfg), 0);
      return fock::apply_gate(in, fock::displacement_gate(x1, kPi / 2, cfg), 1);
    };
    if (variant == EncodingVariant::SingleEncode) s = encode(s);
    for (const LayerParams& lp : params.layers) {
      if (variant == EncodingVariant::Reupload) s = encode(s);
      s = apply_layer(s, lp, cfg);
    }
    CHECK(fast.p1 == doctest::Approx(fock::quadrature_expectation(s, 0, kPi / 2)).epsilon(1e-10));
    CHECK(fast.p2 == doctest::Approx(fock::quadrature_expectation(s, 1, kPi / 2)).epsilon(1e-10));
    CHECK(fast.squared_norm == doctest::Approx(s.squared_norm()).epsilon(1e-10));
  }
}

TEST_CASE("circuit jacobian matches finite differences") {
  std::mt19937_64 rng(33);
  for (EncodingVariant variant : {EncodingVariant::SingleEncode, EncodingVariant::Reupload}) {
    const PolicyParams params = init_params(rng, 2, variant);
    const auto cfg = sim(8);
    const CompiledPolicy compiled(params, cfg);
    const ObservationPair obs{0.2, -0.5};
    const auto res = compiled.run_with_jacobian(obs);
    CHECK(res.jacobian.rows() == 2);
    CHECK(res.jacobian.cols() == 28);

    const Eigen::VectorXd flat = params.to_flat();
    const double h = 1e-5;
    for (int j = 0; j < flat.size(); ++j) {
      Eigen::VectorXd probe = flat;
      probe[j] = flat[j] + h;
      const auto up = forward(obs, PolicyParams::from_flat(probe, variant), cfg);
      probe[j] = flat[j] - h;
      const auto dn = forward(obs, PolicyParams::from_flat(probe, variant), cfg);
      const double fd1 = (up.first - dn.first) / (2 * h);
      const double fd2 = (up.second - dn.second) / (2 * h);
      CHECK(res.jacobian(0, j) == doctest::Approx(fd1).epsilon(1e-5).scale(1.0));
      CHECK(res.jacobian(1, j) == doctest::Approx(fd2).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("checkpoint round trip is value-exact") {
  std::mt19937_64 rng(77);
  const PolicyParams params = init_params(rng, 3, EncodingVariant::Reupload);
  std::stringstream ss;
  write_checkpoint(ss, params);
  const PolicyParams back = read_checkpoint(ss, EncodingVariant::Reupload);
  const Eigen::VectorXd a = params.to_flat();
  const Eigen::VectorXd b = back.to_flat();
  REQUIRE(a.size() == b.size());
  for (long i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  SUBCASE("malformed checkpoints raise") {
    std::stringstream bad("layer.0.bs1.theta = 0.5\n");
    CHECK_THROWS_AS(read_checkpoint(bad, EncodingVariant::SingleEncode), ConfigError);
  }
}
