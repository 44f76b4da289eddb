// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "simpath/telemetry.hpp"

namespace simpath::kinematics {

inline constexpr double kMinRateHz = 10.0;
inline constexpr double kDefaultAlpha = 0.3;

/// Fused kinematic state consumed by the display law.
///
/// `a_steer` is the yaw rate from gyro-z in deg/s, positive for a rightward
/// turn. `a_long` is m/s^2 from differentiated GPS speed.
struct MotionState {
  double t = 0.0;
  double v = 0.0;
  double a_long = 0.0;
  double a_steer = 0.0;

  friend bool operator==(const MotionState&, const MotionState&) = default;
};

/// One MotionState per sample. Interior a_long is a centered difference of
/// speed; the endpoints use one-sided differences.
std::vector<MotionState> derive_motion(const telemetry::UniformSeries& series);

/// Exponential moving average of v, a_long and a_steer. The first element is
/// passed through; alpha = 1 is the identity.
std::vector<MotionState> smooth(std::span<const MotionState> states, double alpha = kDefaultAlpha);

/// Linear interpolation between the states bracketing `t`; clamps outside
/// the covered span. `states` must be sorted by t and non-empty.
MotionState sample_at(std::span<const MotionState> states, double t);

}  // namespace simpath::kinematics
