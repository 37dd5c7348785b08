#include "pppo/baseline.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pppo/errors.hpp"

using namespace pppo;
using namespace pppo::baseline;

TEST_CASE("parameter counts are exact") {
  CHECK(ClassicalPolicyParams::kCount == 42);
  CHECK(ValueNetParams::kCount == 32);
  std::mt19937_64 rng(1);
  CHECK(init_classical(rng).to_flat().size() == 42);
  CHECK(init_value(rng).to_flat().size() == 32);
}

TEST_CASE("classical forward") {
  SUBCASE("zero parameters give the uniform distribution") {
    const ClassicalPolicyParams zero;
    for (double angle : {-0.4, 0.0, 1.7}) {
      const circuit::ActionDistribution d = classical_forward({angle, 0.3}, zero, 1.0);
      CHECK(d.p0 == doctest::Approx(0.5).epsilon(1e-14));
      CHECK(d.p1 == doctest::Approx(0.5).epsilon(1e-14));
    }
  }
  SUBCASE("hand-set parameters match the arithmetic oracle") {
    ClassicalPolicyParams p;
    p.w_in(0, 0) = 1.0;
    p.w_in(0, 1) = -0.5;
    p.w_in(3, 0) = 0.25;
    p.b_hidden(0) = 0.1;
    p.b_hidden(3) = -0.2;
    p.w_out(0, 0) = 2.0;
    p.w_out(1, 3) = -1.0;
    p.b_out(0) = 0.05;
    const ObservationPair obs{1.0, 0.0};
    const double h0 = std::tanh(1.0 * 1.0 + 0.1);
    const double h3 = std::tanh(0.25 * 1.0 - 0.2);
    const double l0 = 2.0 * h0 + 0.05;
    const double l1 = -1.0 * h3;
    const Eigen::Vector2d logits = classical_logits(obs, p);
    CHECK(logits[0] == doctest::Approx(l0).epsilon(1e-14));
    CHECK(logits[1] == doctest::Approx(l1).epsilon(1e-14));
    const circuit::ActionDistribution d = classical_forward(obs, p, 1.0);
    const circuit::ActionDistribution ref = circuit::policy_distribution(l0, l1, 1.0);
    CHECK(d.p0 == doctest::Approx(ref.p0).epsilon(1e-14));
  }
  SUBCASE("probabilities sum to one for random parameters") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const ClassicalPolicyParams p = init_classical(rng);
      const circuit::ActionDistribution d = classical_forward({0.3, -0.8}, p, 1.0);
      CHECK(std::abs(d.p0 + d.p1 - 1.0) < 1e-12);
    }
  }
  SUBCASE("softmax shift invariance") {
    std::mt19937_64 rng(6);
    ClassicalPolicyParams p = init_classical(rng);
    const circuit::ActionDistribution before = classical_forward({0.2, 0.4}, p, 1.0);
    p.b_out(0) += 3.7;
    p.b_out(1) += 3.7;
    const circuit::ActionDistribution after = classical_forward({0.2, 0.4}, p, 1.0);
    CHECK(before.p0 == doctest::Approx(after.p0).epsilon(1e-12));
  }
}

TEST_CASE("value forward") {
  SUBCASE("zero parameters give zero") {
    CHECK(value_forward({0.5, -0.5}, ValueNetParams{}) == 0.0);
  }
  SUBCASE("hand-set parameters match the arithmetic oracle") {
    ValueNetParams p;
    p.w_in(1, 0) = 0.5;
    p.w_in(1, 1) = 1.0;
    p.b_hidden(1) = -0.1;
    p.w_out(0, 1) = 3.0;
    const double expect = 3.0 * std::tanh(0.5 * 0.2 + 1.0 * (-0.4) - 0.1);
    CHECK(value_forward({0.2, -0.4}, p) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("output bounded by the tanh bound") {
    std::mt19937_64 rng(7);
    const ValueNetParams p = init_value(rng);
    const double bound = p.w_out.cwiseAbs().sum();
    for (double angle : {-5.0, 0.0, 5.0}) {
      CHECK(std::abs(value_forward({angle, angle * 2.0}, p)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("backprop matches finite differences") {
  std::mt19937_64 rng(9);
  const ObservationPair obs{0.3, -0.7};
  const double h = 1e-6;
  SUBCASE("classical logits") {
    const ClassicalPolicyParams p = init_classical(rng);
    const Eigen::VectorXd flat = p.to_flat();
    const Eigen::Vector2d dlogits{0.8, -1.3};
    const Eigen::VectorXd grad = classical_logits_backward(obs, p, dlogits);
    for (int j = 0; j < flat.size(); ++j) {
      Eigen::VectorXd probe = flat;
      probe[j] += h;
      const Eigen::Vector2d up = classical_logits(obs, ClassicalPolicyParams::from_flat(probe));
      probe[j] = flat[j] - h;
      const Eigen::Vector2d dn = classical_logits(obs, ClassicalPolicyParams::from_flat(probe));
      const double fd = dlogits.dot((up - dn) / (2 * h));
      CHECK(grad[j] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
  SUBCASE("value net") {
    const ValueNetParams p = init_value(rng);
    const Eigen::VectorXd flat = p.to_flat();
    const Eigen::VectorXd grad = value_backward(obs, p);
    for (int j = 0; j < flat.size(); ++j) {
      Eigen::VectorXd probe = flat;
      probe[j] += h;
      const double up = value_forward(obs, ValueNetParams::from_flat(probe));
      probe[j] = flat[j] - h;
      const double dn = value_forward(obs, ValueNetParams::from_flat(probe));
      CHECK(grad[j] == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("classical and value checkpoints round-trip exactly") {
  std::mt19937_64 rng(13);
  const ClassicalPolicyParams cp = init_classical(rng);
  std::stringstream cs;
  write_checkpoint(cs, cp);
  const Eigen::VectorXd back = read_classical_checkpoint(cs).to_flat();
  const Eigen::VectorXd orig = cp.to_flat();
  for (long i = 0; i < orig.size(); ++i) CHECK(orig[i] == back[i]);

  const ValueNetParams vp = init_value(rng);
  std::stringstream vs;
  write_checkpoint(vs, vp);
  const Eigen::VectorXd vback = read_value_checkpoint(vs).to_flat();
  const Eigen::VectorXd vorig = vp.to_flat();
  for (long i = 0; i < vorig.size(); ++i) CHECK(vorig[i] == vback[i]);

  SUBCASE("wrong parameter count raises") {
    std::stringstream bad("w_in.0.0 = 1.0\n");
    CHECK_THROWS_AS(read_classical_checkpoint(bad), ConfigError);
  }
}
