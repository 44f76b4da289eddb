// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/geometry.hpp"

#include <cmath>
#include <string>

#include "simpath/error.hpp"

namespace simpath::geometry {

std::string_view to_string(CameraMode mode) {
  return mode == CameraMode::first_person ? "first_person" : "third_person";
}

CameraMode camera_mode_from_string(std::string_view s) {
  if (s == "first_person") return CameraMode::first_person;
  if (s == "third_person") return CameraMode::third_person;
  throw ConfigError("unknown camera_mode '" + std::string(s) + "'");
}

std::string_view to_string(Normalization n) {
  return n == Normalization::corrected ? "corrected" : "as_printed";
}

Normalization normalization_from_string(std::string_view s) {
  if (s == "corrected") return Normalization::corrected;
  if (s == "as_printed") return Normalization::as_printed;
  throw ConfigError("unknown normalization '" + std::string(s) + "'");
}

void BendParams::validate() const {
  if (!(std::isfinite(k) && k > 0.0)) throw ConfigError("k must be positive");
  if (!(std::isfinite(a_min) && std::isfinite(a_max) && a_min > 0.0 && a_min < a_max)) {
    throw ConfigError("need 0 < a_min < a_max");
  }
  if (!(std::isfinite(brake_threshold) && brake_threshold < 0.0)) {
    throw ConfigError("brake_threshold must be negative");
  }
}

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double z_norm(double a, const BendParams& p) {
  const double mag = std::abs(a);
  if (p.normalization == Normalization::as_printed) {
    return 10.0 * mag - 5.0 * (p.a_max + p.a_min) / (p.a_max - p.a_min);
  }
  return (10.0 * mag - 5.0 * (p.a_max + p.a_min)) / (p.a_max - p.a_min);
}

double bend_coefficient(double a_steer, const BendParams& p) {
  if (a_steer == 0.0) return 0.0;
  const double g = p.k * logistic(z_norm(a_steer, p));
  return a_steer > 0.0 ? g : -g;
}

double lateral_deviation(double a_steer, double y, const BendParams& p) {
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw ArgumentError("control point distance must be finite and >= 0");
  }
  return bend_coefficient(a_steer, p) * y * y;
}

std::vector<RoadControlPoint> bend_road(std::span<const double> base_y, double a_steer,
                                        const BendParams& p) {
  for (std::size_t i = 0; i < base_y.size(); ++i) {
    if (!(base_y[i] >= 0.0) || !std::isfinite(base_y[i])) {
      throw ArgumentError("base points must be finite and >= 0");
    }
    if (i > 0 && !(base_y[i] > base_y[i - 1])) {
      throw ArgumentError("base points must be strictly increasing");
    }
  }
  const double g = bend_coefficient(a_steer, p);
  std::vector<RoadControlPoint> out;
  out.reserve(base_y.size());
  for (double y : base_y) out.push_back({y, g * y * y});
  return out;
}

SceneMotion scene_motion(const kinematics::MotionState& state) {
  return {state.v, state.a_long};
}

FrameGeometry make_frame(const kinematics::MotionState& state, bool prompt_on,
                         std::span<const double> base_y, const BendParams& params) {
  const SceneMotion scene = scene_motion(state);
  FrameGeometry f;
  f.t = state.t;
  f.scene_speed = scene.speed;
  f.scene_accel = scene.accel;
  f.bend_g = bend_coefficient(state.a_steer, params);
  f.control_points = bend_road(base_y, state.a_steer, params);
  f.prompt_on = prompt_on;
  f.brake_light = state.a_long < params.brake_threshold;
  f.camera_mode = params.camera_mode;
  return f;
}

std::vector<double> default_base_points() {
  std::vector<double> ys;
  for (int i = 0; i <= 20; ++i) ys.push_back(5.0 * i);
  return ys;
}

}  // namespace simpath::geometry
