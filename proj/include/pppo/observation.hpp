#pragma once

namespace pppo {

// The restricted CartPole observation: pole angle and its angular velocity.
struct ObservationPair {
  double pole_angle = 0.0;       // rad
  double angular_velocity = 0.0; // rad/s
};

}  // namespace pppo
