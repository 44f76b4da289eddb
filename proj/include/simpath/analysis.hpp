// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "simpath/geo.hpp"
#include "simpath/telemetry.hpp"

namespace simpath::analysis {

inline constexpr int kLikertMin = 0;
inline constexpr int kLikertMax = 7;
inline constexpr double kLikertScale = 3.74;
inline constexpr double kDefaultCellSizeM = 25.0;

/// Real-time discomfort self-report: eye, head and stomach Likert items.
struct MSReport {
  double t = 0.0;
  std::optional<GeoPoint> position;
  int eye = 0;
  int head = 0;
  int stomach = 0;
  std::string participant;

  /// Throws ValidationError on out-of-range items or a bad timestamp.
  void validate() const;

  friend bool operator==(const MSReport&, const MSReport&) = default;
};

/// (eye + stomach + head) * 3.74.
double ms_score(const MSReport& report);

MSReport parse_report(std::string_view line, std::size_t line_no = 1);
std::vector<MSReport> parse_reports(std::istream& in);
nlohmann::ordered_json report_to_json(const MSReport& report);

enum class Axis { X, Y, Z };
enum class Weighting { off, on };

std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view s);

struct MSDVResult {
  Axis axis = Axis::X;
  double value = 0.0;     // m/s^1.5
  double duration = 0.0;  // s
};

/// Motion-sickness band-pass: 2nd-order Butterworth high-pass at 0.08 Hz
/// cascaded with a 2nd-order Butterworth low-pass at 0.63 Hz, scaled to unit
/// gain at 0.16 Hz. Approximates the standard's W_f weighting; it is not the
/// tabulated filter.
class MotionSicknessWeighting {
 public:
  static constexpr double kHighPassHz = 0.08;
  static constexpr double kLowPassHz = 0.63;
  static constexpr double kReferenceHz = 0.16;

  explicit MotionSicknessWeighting(double rate_hz);

  /// Filters from rest (zero initial state).
  std::vector<double> apply(std::span<const double> input) const;

  /// Magnitude of the digital response at `freq_hz`.
  double gain(double freq_hz) const;

  double rate_hz() const { return rate_hz_; }

 private:
  struct Biquad {
    double b0, b1, b2, a1, a2;
  };
  double raw_gain(double freq_hz) const;

  double rate_hz_;
  Biquad high_;
  Biquad low_;
  double scale_ = 1.0;
};

/// sqrt(sum(a_i^2) / rate): rectangle-rule dose over N samples of 1/rate s.
MSDVResult msdv(std::span<const double> channel, double rate_hz, Axis axis,
                Weighting weighting = Weighting::off);

/// Dose of one accelerometer axis of a uniform series. Samples with invalid
/// accel are rejected.
MSDVResult msdv(const telemetry::UniformSeries& series, Axis axis,
                Weighting weighting = Weighting::off);

struct AnovaResult {
  double f = 0.0;
  int df_between = 0;
  int df_within = 0;
};

/// One-way ANOVA F = MSB / MSW. Needs >= 2 groups of >= 2 values. Zero
/// within-group variance with nonzero between-group variance yields +inf.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

/// Sample Pearson correlation. Throws UndefinedCorrelationError when either
/// input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Counts of MS modifications per lat/lon cell.
struct HeatmapGrid {
  double cell_size_m = kDefaultCellSizeM;
  double cell_lat_deg = 0.0;
  double cell_lon_deg = 0.0;
  GeoPoint origin;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> cells;
  /// Modification events dropped for lack of a position.
  std::size_t skipped = 0;
};

/// Bins every report whose score differs from the same participant's
/// previous report. Each participant's first report is a baseline.
HeatmapGrid heatmap(std::span<const MSReport> reports, double cell_size_m = kDefaultCellSizeM);

nlohmann::ordered_json heatmap_to_json(const HeatmapGrid& grid);

}  // namespace simpath::analysis
