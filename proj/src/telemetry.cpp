// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "simpath/error.hpp"

namespace simpath::telemetry {

namespace {

using nlohmann::json;

// Returns false when the key is absent or null.
bool read_number(const json& obj, const char* key, double& out, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_number()) {
    throw ParseError(line_no, std::string("field '") + key + "' is not a number");
  }
  out = it->get<double>();
  if (!std::isfinite(out)) {
    throw ParseError(line_no, std::string("field '") + key + "' is not finite");
  }
  return true;
}

bool read_group(const json& obj, std::initializer_list<const char*> keys, std::span<double> out,
                std::size_t line_no) {
  bool all = true;
  std::size_t i = 0;
  for (const char* key : keys) all = read_number(obj, key, out[i++], line_no) && all;
  return all;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

RawSample parse_record(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line_no, "record is not a JSON object");

  RawSample s;
  if (!read_number(obj, "t", s.t, line_no)) throw ParseError(line_no, "missing required field 't'");
  if (s.t < 0.0) throw ParseError(line_no, "negative timestamp");

  double a[3] = {};
  s.accel_valid = read_group(obj, {"ax", "ay", "az"}, a, line_no);
  double g[3] = {};
  s.gyro_valid = read_group(obj, {"gx", "gy", "gz"}, g, line_no);
  double pos[2] = {};
  s.gps_valid = read_group(obj, {"lat", "lon"}, pos, line_no);
  s.speed_valid = read_number(obj, "v", s.speed, line_no);

  if (s.accel_valid) s.accel = {a[0], a[1], a[2]};
  if (s.gyro_valid) s.gyro = {g[0], g[1], g[2]};
  if (s.gps_valid) {
    s.lat = pos[0];
    s.lon = pos[1];
  }
  if (!s.speed_valid) s.speed = 0.0;
  return s;
}

std::vector<RawSample> parse_log(std::istream& in) {
  std::vector<RawSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    RawSample s = parse_record(line, line_no);
    if (!out.empty() && !(s.t > out.back().t)) {
      throw OrderingError(line_no, "timestamp " + std::to_string(s.t) +
                                       " does not follow " + std::to_string(out.back().t));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<RawSample> parse_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_log(in);
}

std::string serialize_record(const RawSample& s) {
  nlohmann::ordered_json obj;
  obj["t"] = s.t;
  if (s.accel_valid) {
    obj["ax"] = s.accel.x;
    obj["ay"] = s.accel.y;
    obj["az"] = s.accel.z;
  }
  if (s.gyro_valid) {
    obj["gx"] = s.gyro.x;
    obj["gy"] = s.gyro.y;
    obj["gz"] = s.gyro.z;
  }
  if (s.gps_valid) {
    obj["lat"] = s.lat;
    obj["lon"] = s.lon;
  }
  if (s.speed_valid) obj["v"] = s.speed;
  return obj.dump();
}

void write_log(std::ostream& out, std::span<const RawSample> samples) {
  for (const auto& s : samples) out << serialize_record(s) << '\n';
}

std::string serialize_log(std::span<const RawSample> samples) {
  std::ostringstream out;
  write_log(out, samples);
  return out.str();
}

namespace {

// Interpolates one sensor group onto the grid using only samples where the
// group is valid. Grid points outside the valid span are flagged invalid.
template <typename Valid, typename Write>
void interpolate_group(std::span<const RawSample> in, std::vector<RawSample>& grid, Valid valid,
                       Write write) {
  std::vector<std::size_t> idx;
  idx.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (valid(in[i])) idx.push_back(i);
  }
  std::size_t seg = 0;
  for (auto& g : grid) {
    if (idx.empty() || g.t < in[idx.front()].t || g.t > in[idx.back()].t) {
      write(g, nullptr, nullptr, 0.0, false);
      continue;
    }
    while (seg + 1 < idx.size() && in[idx[seg + 1]].t <= g.t) ++seg;
    const RawSample& lo = in[idx[seg]];
    if (seg + 1 == idx.size() || lo.t == g.t) {
      write(g, &lo, &lo, 0.0, true);
      continue;
    }
    const RawSample& hi = in[idx[seg + 1]];
    const double w = (g.t - lo.t) / (hi.t - lo.t);
    write(g, &lo, &hi, w, true);
  }
}

double lerp(double a, double b, double w) { return w == 0.0 ? a : a + (b - a) * w; }

Vec3 lerp(const Vec3& a, const Vec3& b, double w) {
  return {lerp(a.x, b.x, w), lerp(a.y, b.y, w), lerp(a.z, b.z, w)};
}

}  // namespace

UniformSeries resample(std::span<const RawSample> samples, double rate_hz) {
  if (!(rate_hz > 0.0) || rate_hz > kMaxRateHz || !std::isfinite(rate_hz)) {
    throw ArgumentError("resample rate must be in (0, 1000] Hz");
  }
  if (samples.size() < 2) throw InsufficientDataError("resample needs at least 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double gap = samples[i].t - samples[i - 1].t;
    if (!(gap > 0.0)) {
      throw OrderingError(i + 1, "timestamps must be strictly increasing");
    }
    if (gap > kMaxGapSeconds) {
      throw GapError("gap of " + std::to_string(gap) + " s after t=" +
                     std::to_string(samples[i - 1].t));
    }
  }

  const double t0 = samples.front().t;
  const double t1 = samples.back().t;
  const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) * rate_hz + 1e-9));

  UniformSeries out;
  out.rate_hz = rate_hz;
  out.samples.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    out.samples[i].t = t0 + static_cast<double>(i) / rate_hz;
  }
  // Guard against the last grid point landing a rounding error past t_last.
  out.samples.back().t = std::min(out.samples.back().t, t1);

  interpolate_group(
      samples, out.samples, [](const RawSample& s) { return s.accel_valid; },
      [](RawSample& g, const RawSample* lo, const RawSample* hi, double w, bool ok) {
        g.accel_valid = ok;
        if (ok) g.accel = lerp(lo->accel, hi->accel, w);
      });
  interpolate_group(
      samples, out.samples, [](const RawSample& s) { return s.gyro_valid; },
      [](RawSample& g, const RawSample* lo, const RawSample* hi, double w, bool ok) {
        g.gyro_valid = ok;
        if (ok) g.gyro = lerp(lo->gyro, hi->gyro, w);
      });
  interpolate_group(
      samples, out.samples, [](const RawSample& s) { return s.gps_valid; },
      [](RawSample& g, const RawSample* lo, const RawSample* hi, double w, bool ok) {
        g.gps_valid = ok;
        if (ok) {
          g.lat = lerp(lo->lat, hi->lat, w);
          g.lon = lerp(lo->lon, hi->lon, w);
        }
      });
  interpolate_group(
      samples, out.samples, [](const RawSample& s) { return s.speed_valid; },
      [](RawSample& g, const RawSample* lo, const RawSample* hi, double w, bool ok) {
        g.speed_valid = ok;
        g.speed = ok ? lerp(lo->speed, hi->speed, w) : 0.0;
      });
  return out;
}

std::vector<double> median_filter(std::span<const double> values, int window) {
  if (window < 1 || window % 2 == 0) {
    throw ArgumentError("median window must be a positive odd integer, got " +
                        std::to_string(window));
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> out(values.size());
  std::vector<double> buf(static_cast<std::size_t>(window));
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      const std::ptrdiff_t k = std::clamp<std::ptrdiff_t>(i + j, 0, n - 1);
      buf[static_cast<std::size_t>(j + half)] = values[static_cast<std::size_t>(k)];
    }
    auto mid = buf.begin() + half;
    std::nth_element(buf.begin(), mid, buf.end());
    out[static_cast<std::size_t>(i)] = *mid;
  }
  return out;
}

UniformSeries despike(const UniformSeries& series, int window, double clamp) {
  if (window < 1 || window % 2 == 0) {
    throw ArgumentError("despike window must be a positive odd integer, got " +
                        std::to_string(window));
  }
  if (!(clamp > 0.0)) throw ArgumentError("despike clamp must be positive");

  UniformSeries out = series;
  auto& s = out.samples;

  const auto filter = [&](auto valid, auto member) {
    // Only contiguous runs of valid samples are filtered together.
    std::size_t i = 0;
    while (i < s.size()) {
      if (!valid(s[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && valid(s[j])) ++j;
      std::vector<double> run;
      run.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) run.push_back(member(s[k]));
      auto med = median_filter(run, window);
      for (std::size_t k = i; k < j; ++k) member(s[k]) = std::clamp(med[k - i], -clamp, clamp);
      i = j;
    }
  };

  const auto accel_ok = [](const RawSample& r) { return r.accel_valid; };
  const auto gyro_ok = [](const RawSample& r) { return r.gyro_valid; };
  filter(accel_ok, [](RawSample& r) -> double& { return r.accel.x; });
  filter(accel_ok, [](RawSample& r) -> double& { return r.accel.y; });
  filter(accel_ok, [](RawSample& r) -> double& { return r.accel.z; });
  filter(gyro_ok, [](RawSample& r) -> double& { return r.gyro.x; });
  filter(gyro_ok, [](RawSample& r) -> double& { return r.gyro.y; });
  filter(gyro_ok, [](RawSample& r) -> double& { return r.gyro.z; });
  return out;
}

}  // namespace simpath::telemetry
