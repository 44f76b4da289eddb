// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "simpath/geo.hpp"

namespace simpath::session {

namespace {

constexpr double kRate = 50.0;
constexpr int kSamples = 3001;  // 0 .. 60 s inclusive
constexpr double kCruise = 11.1;
constexpr double kTurnRate = 6.3;
constexpr double kTurnStart = 15.0;
constexpr double kTurnEnd = 40.0;
constexpr double kBrakeStart = 50.0;
constexpr double kBrakeDecel = -2.0;

double round6(double x) { return std::round(x * 1e6) / 1e6; }

double speed_at(double t) {
  if (t <= kBrakeStart) return kCruise;
  return std::max(0.0, kCruise + kBrakeDecel * (t - kBrakeStart));
}

double ripple(double t, double phase) {
  constexpr double kTau = 2.0 * std::numbers::pi;
  return 0.05 * std::sin(kTau * 1.3 * t + phase) + 0.03 * std::sin(kTau * 0.21 * t + 2 * phase);
}

}  // namespace

std::vector<telemetry::RawSample> synthetic_ride() {
  constexpr GeoPoint kOrigin{34.2, 108.9};
  std::vector<telemetry::RawSample> out;
  out.reserve(kSamples);
  double heading = 0.0;  // deg clockwise from north
  double east = 0.0;
  double north = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double t = i / kRate;
    const double v = speed_at(t);
    const bool turning = t >= kTurnStart && t < kTurnEnd;
    double yaw = turning ? kTurnRate : 0.0;
    if (i == 250) yaw = 80.0;   // single-sample IMU spikes
    if (i == 500) yaw = -90.0;
    const double a_long = (t > kBrakeStart && v > 0.0) ? kBrakeDecel : 0.0;

    telemetry::RawSample s;
    s.t = t;
    s.accel = {round6(a_long + ripple(t, 0.0)),
               round6(v * (turning ? kTurnRate : 0.0) * std::numbers::pi / 180.0 + ripple(t, 1.0)),
               round6(9.81 + ripple(t, 2.0))};
    s.gyro = {0.0, 0.0, yaw};
    const GeoPoint p = offset_to_geo(kOrigin, east, north);
    s.lat = round6(p.lat * 1e2) / 1e2;  // 1e-8 deg resolution
    s.lon = round6(p.lon * 1e2) / 1e2;
    s.speed = round6(v);
    out.push_back(s);

    if (turning) heading += kTurnRate / kRate;
    const double rad = heading * std::numbers::pi / 180.0;
    east += v / kRate * std::sin(rad);
    north += v / kRate * std::cos(rad);
  }
  return out;
}

prompts::Route synthetic_route() {
  using prompts::ManeuverZone;
  using prompts::ZoneKind;
  return prompts::Route({ManeuverZone{ZoneKind::turn, kTurnStart, kTurnEnd, std::nullopt},
                         ManeuverZone{ZoneKind::deceleration, kBrakeStart, 56.0, std::nullopt}});
}

}  // namespace simpath::session
