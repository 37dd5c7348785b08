#pragma once

// CartPole-v1-compatible physics with episodic reset and the restricted
// two-feature observation (pole angle, angular velocity). Constants and the
// explicit-Euler integration scheme match the standard environment:
// gravity 9.8, cart mass 1.0, pole mass 0.1, half-length 0.5, force 10 N,
// dt 0.02 s, thresholds 12 deg / 2.4 m. The horizon is enforced here.

#include <iosfwd>
#include <random>

#include "pppo/observation.hpp"

namespace pppo::env {

struct CartPoleState {
  double cart_position = 0.0;        // m
  double cart_velocity = 0.0;        // m/s
  double pole_angle = 0.0;           // rad
  double pole_angular_velocity = 0.0;  // rad/s
  int step_count = 0;
};

enum class DoneReason { None, Angle, Position, Horizon };

struct StepResult {
  CartPoleState state;
  ObservationPair observation;
  double reward = 1.0;
  bool done = false;
  DoneReason done_reason = DoneReason::None;
};

inline constexpr int kDefaultHorizon = 200;

// All four components uniform on [-0.05, 0.05].
CartPoleState reset_state(std::mt19937_64& rng);

// Pure transition; throws if `state` is already terminal.
StepResult step(const CartPoleState& state, int action, int horizon = kDefaultHorizon);

ObservationPair restrict(const CartPoleState& state);

const char* done_reason_name(DoneReason reason);

// Per-episode stateful wrapper used by the training loop. The optional trace
// stream emits one text row per step for diffing against a reference run.
class CartPoleEnv {
 public:
  explicit CartPoleEnv(int horizon = kDefaultHorizon);

  const CartPoleState& reset(std::mt19937_64& rng);
  StepResult step(int action);

  const CartPoleState& state() const { return state_; }
  bool done() const { return done_; }
  DoneReason done_reason() const { return done_reason_; }
  int horizon() const { return horizon_; }
  void set_trace(std::ostream* os) { trace_ = os; }

 private:
  CartPoleState state_;
  int horizon_;
  bool done_ = true;
  DoneReason done_reason_ = DoneReason::None;
  std::ostream* trace_ = nullptr;
};

}  // namespace pppo::env
