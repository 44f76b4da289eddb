// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simpath::telemetry {

inline constexpr double kDefaultRateHz = 50.0;
inline constexpr double kMaxRateHz = 1000.0;
/// Input gaps longer than this are rejected instead of interpolated.
inline constexpr double kMaxGapSeconds = 2.0;
inline constexpr int kDefaultDespikeWindow = 5;
inline constexpr double kDefaultDespikeClamp = 200.0;
inline constexpr double kNoClamp = std::numeric_limits<double>::infinity();

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// One timestamped sensor reading.
///
/// Vehicle axes: X forward, Y lateral, Z vertical. accel in m/s^2, gyro in
/// deg/s. Fields of a group whose valid flag is false carry no meaning and
/// are never read downstream.
struct RawSample {
  double t = 0.0;
  Vec3 accel;
  Vec3 gyro;
  double lat = 0.0;
  double lon = 0.0;
  double speed = 0.0;  // GPS speed, m/s

  bool accel_valid = true;
  bool gyro_valid = true;
  bool gps_valid = true;
  bool speed_valid = true;

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

/// Samples on an exact grid t0 + i / rate_hz.
struct UniformSeries {
  double rate_hz = kDefaultRateHz;
  std::vector<RawSample> samples;

  double dt() const { return 1.0 / rate_hz; }
  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Parses one ride-log record. `line_no` is used for error reporting only.
RawSample parse_record(std::string_view line, std::size_t line_no = 1);

/// Parses a JSON Lines ride log. Blank lines are skipped; timestamps must be
/// strictly increasing.
std::vector<RawSample> parse_log(std::istream& in);
std::vector<RawSample> parse_log(std::string_view text);

/// Inverse of parse_record; invalid groups are omitted from the record.
std::string serialize_record(const RawSample& sample);
void write_log(std::ostream& out, std::span<const RawSample> samples);
std::string serialize_log(std::span<const RawSample> samples);

/// Linear interpolation of every channel onto a grid spanning
/// [t_first, t_last] at `rate_hz`.
UniformSeries resample(std::span<const RawSample> samples, double rate_hz = kDefaultRateHz);

/// Centered median filter on accel and gyro channels, then clamp to
/// [-clamp, clamp]. Ends are replicate-padded.
UniformSeries despike(const UniformSeries& series, int window = kDefaultDespikeWindow,
                      double clamp = kDefaultDespikeClamp);

/// Median filter of one channel; exposed for reuse and testing.
std::vector<double> median_filter(std::span<const double> values, int window);

}  // namespace simpath::telemetry
