// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simpath/error.hpp"

namespace simpath::session {

SimStepResult sim_step(const VehicleState& state, const SimInput& input, double dt,
                       double t_after) {
  if (!(dt > 0.0 && dt <= kMaxSimStep)) throw ArgumentError("sim step dt must lie in (0, 0.1] s");
  if (!std::isfinite(input.throttle_accel) || !std::isfinite(input.steer_rate)) {
    throw ArgumentError("sim input must be finite");
  }
  VehicleState next = state;
  next.heading = state.heading + input.steer_rate * dt;
  next.v = std::max(0.0, state.v + input.throttle_accel * dt);
  const double rad = next.heading * std::numbers::pi / 180.0;
  const double step = next.v * dt;
  next.x = state.x + step * std::sin(rad);
  next.y = state.y + step * std::cos(rad);
  return {next, {t_after, next.v, input.throttle_accel, input.steer_rate}};
}

}  // namespace simpath::session
