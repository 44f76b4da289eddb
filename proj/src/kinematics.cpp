// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simpath/error.hpp"

namespace simpath::kinematics {

std::vector<MotionState> derive_motion(const telemetry::UniformSeries& series) {
  if (series.empty()) throw InsufficientDataError("derive_motion needs a non-empty series");
  if (!(series.rate_hz >= kMinRateHz)) {
    throw ArgumentError("derive_motion needs a series sampled at >= 10 Hz");
  }
  const auto& s = series.samples;
  for (const auto& r : s) {
    if (!r.speed_valid || !r.gyro_valid) {
      throw InsufficientDataError("speed or gyro channel invalid at t=" + std::to_string(r.t));
    }
    if (r.speed < 0.0) throw ValidationError("negative speed at t=" + std::to_string(r.t));
  }

  const std::size_t n = s.size();
  const double rate = series.rate_hz;
  std::vector<MotionState> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a_long = 0.0;
    if (n > 1) {
      if (i == 0) {
        a_long = (s[1].speed - s[0].speed) * rate;
      } else if (i + 1 == n) {
        a_long = (s[i].speed - s[i - 1].speed) * rate;
      } else {
        a_long = (s[i + 1].speed - s[i - 1].speed) * rate / 2.0;
      }
    }
    out[i] = {s[i].t, s[i].speed, a_long, s[i].gyro.z};
  }
  return out;
}

namespace {

// One EMA step kept inside [min(prev, x), max(prev, x)] despite rounding.
double ema(double prev, double x, double alpha) {
  const double next = prev + alpha * (x - prev);
  return std::clamp(next, std::min(prev, x), std::max(prev, x));
}

}  // namespace

std::vector<MotionState> smooth(std::span<const MotionState> states, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ArgumentError("smoothing alpha must lie in (0, 1]");
  }
  if (states.empty()) throw InsufficientDataError("smooth needs a non-empty sequence");

  std::vector<MotionState> out(states.begin(), states.end());
  if (alpha == 1.0) return out;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const MotionState& prev = out[i - 1];
    out[i].v = ema(prev.v, states[i].v, alpha);
    out[i].a_long = ema(prev.a_long, states[i].a_long, alpha);
    out[i].a_steer = ema(prev.a_steer, states[i].a_steer, alpha);
  }
  return out;
}

MotionState sample_at(std::span<const MotionState> states, double t) {
  if (states.empty()) throw InsufficientDataError("sample_at needs a non-empty sequence");
  if (t <= states.front().t) return states.front();
  if (t >= states.back().t) return states.back();
  auto hi = std::upper_bound(states.begin(), states.end(), t,
                             [](double value, const MotionState& s) { return value < s.t; });
  auto lo = std::prev(hi);
  if (lo->t == t) return *lo;
  const double w = (t - lo->t) / (hi->t - lo->t);
  const auto mix = [w](double a, double b) { return a == b ? a : a + (b - a) * w; };
  return {t, mix(lo->v, hi->v), mix(lo->a_long, hi->a_long), mix(lo->a_steer, hi->a_steer)};
}

}  // namespace simpath::kinematics
