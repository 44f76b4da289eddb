// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "simpath/prompts.hpp"
#include "simpath/telemetry.hpp"

namespace simpath::session {

/// Scripted 60 s ride sampled at 50 Hz: straight at 11.1 m/s, a right turn
/// at 6.3 deg/s over [15, 40) s, straight again, then braking at -2 m/s^2
/// from t = 50 s to a stop. Two single-sample gyro spikes sit on the first
/// straight. Accelerometer channels carry a small deterministic ripple.
std::vector<telemetry::RawSample> synthetic_ride();

/// Turn zone [15, 40] s and deceleration zone [50, 56] s.
prompts::Route synthetic_route();

}  // namespace simpath::session
