// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "simpath/kinematics.hpp"

namespace simpath::geometry {

enum class CameraMode { first_person, third_person };

/// Which normalization maps |a| onto the logistic input.
///
/// `corrected` is the affine map sending a_min -> -5 and a_max -> +5.
/// `as_printed` is 10|a| - 5 (a_max + a_min) / (a_max - a_min), kept for
/// comparison only; it does not satisfy the (-5, 5) range.
enum class Normalization { corrected, as_printed };

std::string_view to_string(CameraMode mode);
CameraMode camera_mode_from_string(std::string_view s);
std::string_view to_string(Normalization n);
Normalization normalization_from_string(std::string_view s);

/// Road-bending constants. a_min / a_max are yaw rates in deg/s.
struct BendParams {
  double k = 0.3;
  double a_min = 2.6;
  double a_max = 10.0;
  double brake_threshold = -0.5;  // m/s^2
  CameraMode camera_mode = CameraMode::third_person;
  Normalization normalization = Normalization::corrected;

  /// Throws ConfigError unless 0 < a_min < a_max, k > 0, brake_threshold < 0.
  void validate() const;

  friend bool operator==(const BendParams&, const BendParams&) = default;
};

/// A road centerline point: `y` meters ahead of the camera, `x` meters
/// lateral (positive = screen right).
struct RoadControlPoint {
  double y = 0.0;
  double x = 0.0;

  friend bool operator==(const RoadControlPoint&, const RoadControlPoint&) = default;
};

struct FrameGeometry {
  double t = 0.0;
  double scene_speed = 0.0;
  double scene_accel = 0.0;
  double bend_g = 0.0;  // 1/m, signed like a_steer
  std::vector<RoadControlPoint> control_points;
  bool prompt_on = false;
  bool brake_light = false;
  CameraMode camera_mode = CameraMode::third_person;

  friend bool operator==(const FrameGeometry&, const FrameGeometry&) = default;
};

struct SceneMotion {
  double speed = 0.0;
  double accel = 0.0;
};

/// Numerically stable 1 / (1 + e^-z).
double logistic(double z);

/// Maps |a| onto the logistic input; see Normalization.
double z_norm(double a, const BendParams& params);

/// Signed bend coefficient g(a): 0 at a = 0, else sign(a) k logistic(z(|a|)).
double bend_coefficient(double a_steer, const BendParams& params);

/// g(a) y^2. Throws ArgumentError for negative or non-finite y.
double lateral_deviation(double a_steer, double y, const BendParams& params);

/// Displaces every base point laterally by g(a) y^2. `base_y` must be
/// strictly increasing and non-negative.
std::vector<RoadControlPoint> bend_road(std::span<const double> base_y, double a_steer,
                                        const BendParams& params);

/// Reference objects move at the vehicle's own speed and acceleration
/// (1 scene unit = 1 m).
SceneMotion scene_motion(const kinematics::MotionState& state);

FrameGeometry make_frame(const kinematics::MotionState& state, bool prompt_on,
                         std::span<const double> base_y, const BendParams& params);

/// y = 0, 5, ..., 100 m.
std::vector<double> default_base_points();

}  // namespace simpath::geometry
