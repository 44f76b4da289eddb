// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "simpath/kinematics.hpp"

namespace simpath::session {

inline constexpr double kMaxSimStep = 0.1;

/// Toy vehicle for human-steered sessions. Heading in degrees clockwise from
/// +y, so a positive steer rate turns right.
struct VehicleState {
  double x = 0.0;  // m, east
  double y = 0.0;  // m, north
  double heading = 0.0;
  double v = 0.0;

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

struct SimInput {
  double throttle_accel = 0.0;  // m/s^2
  double steer_rate = 0.0;      // deg/s
};

struct SimStepResult {
  VehicleState state;
  /// Synthetic state fed to the display pipeline: (v, throttle, steer rate).
  kinematics::MotionState motion;
};

/// Integrates one step: heading first, then speed (clamped at 0), then
/// position along the new heading. dt must lie in (0, 0.1].
SimStepResult sim_step(const VehicleState& state, const SimInput& input, double dt,
                       double t_after = 0.0);

}  // namespace simpath::session
