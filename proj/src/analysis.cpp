// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "simpath/error.hpp"

namespace simpath::analysis {

void MSReport::validate() const {
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("report time must be finite and >= 0");
  for (int item : {eye, head, stomach}) {
    if (item < kLikertMin || item > kLikertMax) {
      throw ValidationError("Likert item " + std::to_string(item) + " outside [0, 7]");
    }
  }
}

double ms_score(const MSReport& report) {
  report.validate();
  return (report.eye + report.stomach + report.head) * kLikertScale;
}

MSReport parse_report(std::string_view line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line_no, "report is not a JSON object");
  MSReport r;
  try {
    r.t = obj.at("t").get<double>();
    for (auto [key, field] : {std::pair{"eye", &r.eye}, {"head", &r.head}, {"stomach", &r.stomach}}) {
      const auto& v = obj.at(key);
      if (!v.is_number_integer()) throw ParseError(line_no, std::string(key) + " must be an integer");
      *field = v.get<int>();
    }
    const bool has_lat = obj.contains("lat") && !obj["lat"].is_null();
    const bool has_lon = obj.contains("lon") && !obj["lon"].is_null();
    if (has_lat && has_lon) r.position = GeoPoint{obj["lat"].get<double>(), obj["lon"].get<double>()};
    if (obj.contains("participant") && !obj["participant"].is_null()) {
      const auto& p = obj["participant"];
      r.participant = p.is_string() ? p.get<std::string>() : p.dump();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line_no, e.what());
  }
  try {
    r.validate();
  } catch (const ValidationError& e) {
    throw ParseError(line_no, e.what());
  }
  return r;
}

std::vector<MSReport> parse_reports(std::istream& in) {
  std::vector<MSReport> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_report(line, line_no));
  }
  return out;
}

nlohmann::ordered_json report_to_json(const MSReport& r) {
  nlohmann::ordered_json obj;
  obj["t"] = r.t;
  if (r.position) {
    obj["lat"] = r.position->lat;
    obj["lon"] = r.position->lon;
  } else {
    obj["lat"] = nullptr;
    obj["lon"] = nullptr;
  }
  obj["eye"] = r.eye;
  obj["head"] = r.head;
  obj["stomach"] = r.stomach;
  obj["participant"] = r.participant;
  return obj;
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::X:
      return "X";
    case Axis::Y:
      return "Y";
    case Axis::Z:
      return "Z";
  }
  return "X";
}

Axis axis_from_string(std::string_view s) {
  if (s == "X" || s == "x") return Axis::X;
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  throw ArgumentError("unknown axis '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Weighting filter

MotionSicknessWeighting::MotionSicknessWeighting(double rate_hz) : rate_hz_(rate_hz) {
  if (!(rate_hz > 2.0 * kLowPassHz) || !std::isfinite(rate_hz)) {
    throw ArgumentError("weighting needs a sample rate above 1.26 Hz");
  }
  // Bilinear-transform Butterworth sections with prewarped corners.
  const auto section = [rate_hz](double corner, bool high) {
    const double w0 = 2.0 * std::numbers::pi * corner / rate_hz;
    const double cw = std::cos(w0);
    const double alpha = std::sin(w0) / std::numbers::sqrt2;  // Q = 1/sqrt(2)
    const double a0 = 1.0 + alpha;
    Biquad q{};
    if (high) {
      q.b0 = (1.0 + cw) / 2.0 / a0;
      q.b1 = -(1.0 + cw) / a0;
    } else {
      q.b0 = (1.0 - cw) / 2.0 / a0;
      q.b1 = (1.0 - cw) / a0;
    }
    q.b2 = q.b0;
    q.a1 = -2.0 * cw / a0;
    q.a2 = (1.0 - alpha) / a0;
    return q;
  };
  high_ = section(kHighPassHz, true);
  low_ = section(kLowPassHz, false);
  scale_ = 1.0 / raw_gain(kReferenceHz);
}

double MotionSicknessWeighting::raw_gain(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / rate_hz_;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const auto response = [&](const Biquad& q) {
    return (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
  };
  return std::abs(response(high_) * response(low_));
}

double MotionSicknessWeighting::gain(double freq_hz) const { return scale_ * raw_gain(freq_hz); }

std::vector<double> MotionSicknessWeighting::apply(std::span<const double> input) const {
  std::vector<double> out(input.begin(), input.end());
  for (const Biquad* q : {&high_, &low_}) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (double& x : out) {
      const double y = q->b0 * x + s1;
      s1 = q->b1 * x - q->a1 * y + s2;
      s2 = q->b2 * x - q->a2 * y;
      x = y;
    }
  }
  for (double& x : out) x *= scale_;
  return out;
}

// ---------------------------------------------------------------------------
// MSDV

MSDVResult msdv(std::span<const double> channel, double rate_hz, Axis axis, Weighting weighting) {
  if (channel.empty()) throw InsufficientDataError("msdv needs a non-empty channel");
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ArgumentError("rate must be positive");

  std::vector<double> weighted;
  std::span<const double> data = channel;
  if (weighting == Weighting::on) {
    weighted = MotionSicknessWeighting(rate_hz).apply(channel);
    data = weighted;
  }
  double sum = 0.0;
  for (double a : data) sum += a * a;
  const auto n = static_cast<double>(data.size());
  return {axis, std::sqrt(sum / rate_hz), n / rate_hz};
}

MSDVResult msdv(const telemetry::UniformSeries& series, Axis axis, Weighting weighting) {
  if (series.empty()) throw InsufficientDataError("msdv needs a non-empty series");
  std::vector<double> channel;
  channel.reserve(series.size());
  for (const auto& s : series.samples) {
    if (!s.accel_valid) {
      throw InsufficientDataError("accelerometer invalid at t=" + std::to_string(s.t));
    }
    channel.push_back(axis == Axis::X ? s.accel.x : axis == Axis::Y ? s.accel.y : s.accel.z);
  }
  return msdv(channel, series.rate_hz, axis, weighting);
}

// ---------------------------------------------------------------------------
// Statistics

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw ArgumentError("ANOVA needs at least 2 groups");
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw ArgumentError("every ANOVA group needs at least 2 values");
    for (double v : g) {
      if (!std::isfinite(v)) throw ArgumentError("ANOVA values must be finite");
      grand_sum += v;
    }
    total += g.size();
  }
  const double grand_mean = grand_sum / static_cast<double>(total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    // Second pass corrects the mean's rounding error.
    double resid = 0.0;
    for (double v : g) resid += v - mean;
    const double m = mean + resid / static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
    for (double v : g) ss_within += (v - m) * (v - m);
  }

  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total - groups.size());
  if (ss_within == 0.0) {
    if (ss_between == 0.0) throw ArgumentError("ANOVA undefined: every value is identical");
    r.f = std::numeric_limits<double>::infinity();
    return r;
  }
  r.f = (ss_between / r.df_between) / (ss_within / r.df_within);
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("pearson inputs differ in length");
  if (x.size() < 3) throw ArgumentError("pearson needs at least 3 pairs");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("zero-variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Heatmap

HeatmapGrid heatmap(std::span<const MSReport> reports, double cell_size_m) {
  if (!(cell_size_m > 0.0) || !std::isfinite(cell_size_m)) {
    throw ArgumentError("cell size must be positive");
  }
  HeatmapGrid grid;
  grid.cell_size_m = cell_size_m;

  std::unordered_map<std::string, double> last_score;
  std::vector<GeoPoint> events;
  for (const auto& r : reports) {
    const double score = ms_score(r);
    auto [it, first] = last_score.try_emplace(r.participant, score);
    if (first) continue;
    const bool modified = it->second != score;
    it->second = score;
    if (!modified) continue;
    if (!r.position) {
      ++grid.skipped;
      continue;
    }
    events.push_back(*r.position);
  }
  if (events.empty()) return grid;

  double lat_sum = 0.0;
  grid.origin = events.front();
  for (const auto& p : events) {
    lat_sum += p.lat;
    grid.origin.lat = std::min(grid.origin.lat, p.lat);
    grid.origin.lon = std::min(grid.origin.lon, p.lon);
  }
  const double mean_lat = lat_sum / static_cast<double>(events.size());
  grid.cell_lat_deg = cell_size_m / meters_per_degree_lat();
  grid.cell_lon_deg = cell_size_m / meters_per_degree_lon(mean_lat);

  for (const auto& p : events) {
    const auto row = static_cast<std::int64_t>(std::floor((p.lat - grid.origin.lat) / grid.cell_lat_deg));
    const auto col = static_cast<std::int64_t>(std::floor((p.lon - grid.origin.lon) / grid.cell_lon_deg));
    ++grid.cells[{row, col}];
  }
  return grid;
}

nlohmann::ordered_json heatmap_to_json(const HeatmapGrid& grid) {
  nlohmann::ordered_json doc;
  doc["cell_size"] = grid.cell_size_m;
  doc["cell_deg"] = {{"lat", grid.cell_lat_deg}, {"lon", grid.cell_lon_deg}};
  doc["origin"] = {{"lat", grid.origin.lat}, {"lon", grid.origin.lon}};
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& [key, count] : grid.cells) {
    cells.push_back({{"row", key.first}, {"col", key.second}, {"count", count}});
  }
  doc["cells"] = std::move(cells);
  doc["skipped"] = grid.skipped;
  return doc;
}

}  // namespace simpath::analysis
