#include "pppo/env.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "pppo/errors.hpp"
#include "pppo/text_io.hpp"

namespace pppo::env {

namespace {

constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kTotalMass = kCartMass + kPoleMass;
constexpr double kHalfLength = 0.5;
constexpr double kPoleMassLength = kPoleMass * kHalfLength;
constexpr double kForceMag = 10.0;
constexpr double kDt = 0.02;
const double kAngleThreshold = 12.0 * std::numbers::pi / 180.0;
constexpr double kPositionThreshold = 2.4;

}  // namespace

CartPoleState reset_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-0.05, 0.05);
  CartPoleState s;
  s.cart_position = uni(rng);
  s.cart_velocity = uni(rng);
  s.pole_angle = uni(rng);
  s.pole_angular_velocity = uni(rng);
  s.step_count = 0;
  return s;
}

StepResult step(const CartPoleState& state, int action, int horizon) {
  if (action != 0 && action != 1) throw ShapeError("env::step: action must be 0 or 1");
  if (std::abs(state.pole_angle) > kAngleThreshold ||
      std::abs(state.cart_position) > kPositionThreshold || state.step_count >= horizon) {
    throw NumericalError("env::step: episode is already terminal");
  }

  const double force = action == 1 ? kForceMag : -kForceMag;
  const double cos_theta = std::cos(state.pole_angle);
  const double sin_theta = std::sin(state.pole_angle);
  const double omega = state.pole_angular_velocity;

  const double temp = (force + kPoleMassLength * omega * omega * sin_theta) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_theta - cos_theta * temp) /
      (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_theta * cos_theta / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_theta / kTotalMass;

  StepResult res;
  res.state.cart_position = state.cart_position + kDt * state.cart_velocity;
  res.state.cart_velocity = state.cart_velocity + kDt * x_acc;
  res.state.pole_angle = state.pole_angle + kDt * omega;
  res.state.pole_angular_velocity = omega + kDt * theta_acc;
  res.state.step_count = state.step_count + 1;
  res.observation = restrict(res.state);
  res.reward = 1.0;

  if (std::abs(res.state.pole_angle) > kAngleThreshold) {
    res.done = true;
    res.done_reason = DoneReason::Angle;
  } else if (std::abs(res.state.cart_position) > kPositionThreshold) {
    res.done = true;
    res.done_reason = DoneReason::Position;
  } else if (res.state.step_count >= horizon) {
    res.done = true;
    res.done_reason = DoneReason::Horizon;
  }
  return res;
}

ObservationPair restrict(const CartPoleState& state) {
  return {state.pole_angle, state.pole_angular_velocity};
}

const char* done_reason_name(DoneReason reason) {
  switch (reason) {
    case DoneReason::Angle: return "angle";
    case DoneReason::Position: return "position";
    case DoneReason::Horizon: return "horizon";
    case DoneReason::None: break;
  }
  return "none";
}

CartPoleEnv::CartPoleEnv(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw ConfigError("CartPoleEnv: horizon must be >= 1");
}

const CartPoleState& CartPoleEnv::reset(std::mt19937_64& rng) {
  state_ = reset_state(rng);
  done_ = false;
  done_reason_ = DoneReason::None;
  return state_;
}

StepResult CartPoleEnv::step(int action) {
  if (done_) throw NumericalError("CartPoleEnv: episode is already terminal");
  const StepResult res = env::step(state_, action, horizon_);
  state_ = res.state;
  done_ = res.done;
  done_reason_ = res.done_reason;
  if (trace_ != nullptr) {
    *trace_ << state_.step_count << ',' << io::format_csv(state_.cart_position) << ','
            << io::format_csv(state_.cart_velocity) << ',' << io::format_csv(state_.pole_angle)
            << ',' << io::format_csv(state_.pole_angular_velocity) << ',' << action << ','
            << io::format_csv(res.reward) << ',' << (res.done ? 1 : 0) << ','
            << done_reason_name(res.done_reason) << '\n';
  }
  return res;
}

}  // namespace pppo::env
