// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/session.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include <openssl/evp.h>

namespace simpath::session {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename T>
void read_if(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

void PipelineConfig::validate() const {
  bend.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(resample_rate_hz > 0.0 && resample_rate_hz <= telemetry::kMaxRateHz)) {
    throw ConfigError("resample_rate_hz must lie in (0, 1000]");
  }
  if (!(resample_rate_hz >= kinematics::kMinRateHz)) {
    throw ConfigError("resample_rate_hz must be at least 10 Hz");
  }
  if (!(frame_rate_hz > 0.0 && frame_rate_hz <= resample_rate_hz)) {
    throw ConfigError("frame_rate_hz must lie in (0, resample_rate_hz]");
  }
  if (despike_window < 1 || despike_window % 2 == 0) {
    throw ConfigError("despike_window must be a positive odd integer");
  }
  if (!(despike_clamp > 0.0)) throw ConfigError("despike_clamp must be positive");
  for (std::size_t i = 0; i < base_points.size(); ++i) {
    if (!(base_points[i] >= 0.0) || (i > 0 && !(base_points[i] > base_points[i - 1]))) {
      throw ConfigError("base_points must be non-negative and strictly increasing");
    }
  }
}

PipelineConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const char* kKnown[] = {"k",
                                 "a_min",
                                 "a_max",
                                 "brake_threshold",
                                 "camera_mode",
                                 "normalization",
                                 "alpha",
                                 "frame_rate_hz",
                                 "resample_rate_hz",
                                 "despike_window",
                                 "despike_clamp",
                                 "base_points"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return key == k; }) == std::end(kKnown)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  PipelineConfig c;
  try {
    read_if(doc, "k", c.bend.k);
    read_if(doc, "a_min", c.bend.a_min);
    read_if(doc, "a_max", c.bend.a_max);
    read_if(doc, "brake_threshold", c.bend.brake_threshold);
    if (doc.contains("camera_mode")) {
      c.bend.camera_mode = geometry::camera_mode_from_string(doc["camera_mode"].get<std::string>());
    }
    if (doc.contains("normalization")) {
      c.bend.normalization =
          geometry::normalization_from_string(doc["normalization"].get<std::string>());
    }
    read_if(doc, "alpha", c.alpha);
    read_if(doc, "frame_rate_hz", c.frame_rate_hz);
    read_if(doc, "resample_rate_hz", c.resample_rate_hz);
    read_if(doc, "despike_window", c.despike_window);
    if (doc.contains("despike_clamp")) {
      // JSON has no infinity; null means "no clamp".
      c.despike_clamp = doc["despike_clamp"].is_null() ? telemetry::kNoClamp
                                                       : doc["despike_clamp"].get<double>();
    }
    read_if(doc, "base_points", c.base_points);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

ordered_json config_to_json(const PipelineConfig& c) {
  ordered_json doc;
  doc["k"] = c.bend.k;
  doc["a_min"] = c.bend.a_min;
  doc["a_max"] = c.bend.a_max;
  doc["brake_threshold"] = c.bend.brake_threshold;
  doc["camera_mode"] = geometry::to_string(c.bend.camera_mode);
  doc["normalization"] = geometry::to_string(c.bend.normalization);
  doc["alpha"] = c.alpha;
  doc["frame_rate_hz"] = c.frame_rate_hz;
  doc["resample_rate_hz"] = c.resample_rate_hz;
  doc["despike_window"] = c.despike_window;
  if (std::isinf(c.despike_clamp)) {
    doc["despike_clamp"] = nullptr;
  } else {
    doc["despike_clamp"] = c.despike_clamp;
  }
  doc["base_points"] = c.base_points;
  return doc;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

// ---------------------------------------------------------------------------
// Records

ordered_json frame_to_json(const FramePacket& p) {
  const auto& f = p.frame;
  ordered_json obj;
  obj["type"] = "frame";
  obj["seq"] = p.seq;
  obj["t"] = f.t;
  obj["scene_speed"] = f.scene_speed;
  obj["scene_accel"] = f.scene_accel;
  obj["bend_g"] = f.bend_g;
  ordered_json points = ordered_json::array();
  for (const auto& cp : f.control_points) points.push_back({{"y", cp.y}, {"x", cp.x}});
  obj["control_points"] = std::move(points);
  obj["prompt_on"] = f.prompt_on;
  obj["brake_light"] = f.brake_light;
  obj["camera_mode"] = geometry::to_string(f.camera_mode);
  return obj;
}

FramePacket frame_from_json(const json& obj) {
  FramePacket p;
  p.seq = obj.at("seq").get<std::uint64_t>();
  auto& f = p.frame;
  f.t = obj.at("t").get<double>();
  f.scene_speed = obj.at("scene_speed").get<double>();
  f.scene_accel = obj.at("scene_accel").get<double>();
  f.bend_g = obj.at("bend_g").get<double>();
  for (const auto& cp : obj.at("control_points")) {
    f.control_points.push_back({cp.at("y").get<double>(), cp.at("x").get<double>()});
  }
  f.prompt_on = obj.at("prompt_on").get<bool>();
  f.brake_light = obj.at("brake_light").get<bool>();
  f.camera_mode = geometry::camera_mode_from_string(obj.at("camera_mode").get<std::string>());
  return p;
}

std::string header_line(const SessionHeader& h) {
  ordered_json obj;
  obj["type"] = "header";
  obj["params"] = config_to_json(h.config);
  obj["route_hash"] = h.route_hash;
  obj["start_time"] = h.start_time;
  obj["started_at"] = h.started_at;
  return obj.dump() + '\n';
}

std::string frame_line(const FramePacket& packet) { return frame_to_json(packet).dump() + '\n'; }

std::string report_line(const SessionReport& r) {
  ordered_json obj;
  obj["type"] = "ms";
  const ordered_json body = analysis::report_to_json(r.report);
  for (const auto& [key, value] : body.items()) obj[key] = value;
  obj["gap_flag"] = r.gap_flag;
  return obj.dump() + '\n';
}

std::string control_line(const ControlInput& c) {
  ordered_json obj;
  obj["type"] = "control";
  obj["t"] = c.t;
  obj["throttle"] = c.throttle;
  obj["steer"] = c.steer;
  return obj.dump() + '\n';
}

std::vector<SessionReport> flag_report_gaps(std::span<const analysis::MSReport> reports,
                                            double session_start) {
  std::unordered_map<std::string, double> last;
  std::vector<SessionReport> out;
  out.reserve(reports.size());
  for (const auto& r : reports) {
    r.validate();
    auto [it, first] = last.try_emplace(r.participant, session_start);
    const bool gap = r.t - it->second > kReportGapSeconds;
    it->second = r.t;
    out.push_back({r, gap});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

GeoPoint position_at(const telemetry::UniformSeries& series, double t) {
  const auto& s = series.samples;
  const double x = (t - s.front().t) * series.rate_hz;
  const auto i = static_cast<std::size_t>(std::clamp(std::floor(x), 0.0, double(s.size() - 1)));
  const std::size_t j = std::min(i + 1, s.size() - 1);
  if (!s[i].gps_valid || !s[j].gps_valid) {
    throw InsufficientDataError("GPS position invalid near t=" + std::to_string(t));
  }
  const double w = std::clamp(x - double(i), 0.0, 1.0);
  return {s[i].lat + (s[j].lat - s[i].lat) * w, s[i].lon + (s[j].lon - s[i].lon) * w};
}

}  // namespace

SessionLog replay(std::span<const telemetry::RawSample> ride, const prompts::Route& route,
                  const PipelineConfig& config, std::span<const analysis::MSReport> reports) {
  config.validate();
  const double first_t = ride.empty() ? 0.0 : ride.front().t;

  telemetry::UniformSeries series;
  std::vector<kinematics::MotionState> states;
  try {
    series = telemetry::resample(ride, config.resample_rate_hz);
    const auto clean =
        telemetry::despike(series, config.despike_window, config.despike_clamp);
    states = kinematics::smooth(kinematics::derive_motion(clean), config.alpha);
  } catch (const ReplayError&) {
    throw;
  } catch (const Error& e) {
    throw ReplayError(first_t, e.what());
  }

  SessionLog log;
  log.header.config = config;
  log.header.route_hash = route_hash(route);
  log.header.start_time = states.front().t;

  const double t0 = states.front().t;
  const double t1 = states.back().t;
  const auto frames =
      static_cast<std::uint64_t>(std::floor((t1 - t0) * config.frame_rate_hz + 1e-9)) + 1;
  log.frames.reserve(frames);

  prompts::PromptState prompt;
  prompts::GeofenceLocator locator;
  for (std::uint64_t n = 0; n < frames; ++n) {
    const double t = t0 + static_cast<double>(n) / config.frame_rate_hz;
    try {
      const auto state = kinematics::sample_at(states, t);
      const auto fix = route.geofenced() ? locator.update(position_at(series, t), state.v, route)
                                         : prompts::locate_zone(t, route);
      prompt = prompts::step_scheduler(prompt, t, fix);
      log.frames.push_back(
          {n, geometry::make_frame(state, prompt.symbol_visible, config.base_points, config.bend)});
    } catch (const Error& e) {
      throw ReplayError(t, e.what());
    }
  }

  try {
    log.reports = flag_report_gaps(reports, t0);
  } catch (const Error& e) {
    throw ReplayError(t0, e.what());
  }
  return log;
}

// ---------------------------------------------------------------------------
// Hashing and persistence

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

std::string route_hash(const prompts::Route& route) {
  return sha256_hex(prompts::route_to_json(route).dump());
}

namespace {

std::string footer_line(std::string_view body, std::size_t frames, std::size_t reports,
                        std::size_t controls) {
  ordered_json obj;
  obj["type"] = "footer";
  obj["frames"] = frames;
  obj["reports"] = reports;
  obj["controls"] = controls;
  obj["sha256"] = sha256_hex(body);
  return obj.dump() + '\n';
}

}  // namespace

SessionWriter::SessionWriter(const std::filesystem::path& path, const SessionHeader& header)
    : path_(path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  write(header_line(header));
}

SessionWriter::~SessionWriter() {
  try {
    close();
  } catch (...) {
  }
}

void SessionWriter::write(const std::string& line) {
  if (closed_) throw IoError(path_.string() + ": session already closed");
  out_ << line;
  out_.flush();
  if (!out_) throw IoError("write failed on " + path_.string());
  hashed_ += line;
}

void SessionWriter::append(const FramePacket& packet) {
  write(frame_line(packet));
  ++frames_;
}

void SessionWriter::append(const SessionReport& report) {
  write(report_line(report));
  ++reports_;
}

void SessionWriter::append(const ControlInput& control) {
  write(control_line(control));
  ++controls_;
}

void SessionWriter::close() {
  if (closed_) return;
  const std::string footer = footer_line(hashed_, frames_, reports_, controls_);
  out_ << footer;
  out_.flush();
  closed_ = true;
  if (!out_) throw IoError("write failed on " + path_.string());
  out_.close();
}

std::string serialize_session(const SessionLog& log) {
  std::string body = header_line(log.header);
  for (const auto& f : log.frames) body += frame_line(f);
  for (const auto& r : log.reports) body += report_line(r);
  for (const auto& c : log.controls) body += control_line(c);
  return body + footer_line(body, log.frames.size(), log.reports.size(), log.controls.size());
}

SessionLog parse_session(std::string_view bytes) {
  SessionLog log;
  bool have_header = false;
  bool have_footer = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t end = bytes.find('\n', pos);
    const std::size_t stop = end == std::string_view::npos ? bytes.size() : end;
    const std::string_view line = bytes.substr(pos, stop - pos);
    const std::size_t body_len = pos;
    pos = end == std::string_view::npos ? bytes.size() : end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (have_footer) throw IntegrityError("line " + std::to_string(line_no) + ": data after footer");

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    const std::string type = obj.value("type", "");
    if (!have_header && type != "header") {
      throw IntegrityError("line " + std::to_string(line_no) + ": session must start with a header");
    }
    try {
      if (type == "header") {
        if (have_header) throw IntegrityError("duplicate header at line " + std::to_string(line_no));
        log.header.config = config_from_json(obj.at("params"));
        log.header.route_hash = obj.at("route_hash").get<std::string>();
        log.header.start_time = obj.at("start_time").get<double>();
        log.header.started_at = obj.value("started_at", "");
        have_header = true;
      } else if (type == "frame") {
        FramePacket p = frame_from_json(obj);
        const std::uint64_t expected = log.frames.size();
        if (p.seq != expected) {
          throw IntegrityError("frame seq gap at line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expected) + ", found " + std::to_string(p.seq));
        }
        log.frames.push_back(std::move(p));
      } else if (type == "ms") {
        SessionReport r;
        r.report = analysis::parse_report(line, line_no);
        r.gap_flag = obj.value("gap_flag", false);
        if (!log.reports.empty() && r.report.t < log.reports.back().report.t) {
          throw IntegrityError("MS reports out of time order at line " + std::to_string(line_no));
        }
        log.reports.push_back(std::move(r));
      } else if (type == "control") {
        ControlInput c{obj.at("t").get<double>(), obj.at("throttle").get<double>(),
                       obj.at("steer").get<double>()};
        if (!log.controls.empty() && c.t < log.controls.back().t) {
          throw IntegrityError("controls out of time order at line " + std::to_string(line_no));
        }
        log.controls.push_back(c);
      } else if (type == "footer") {
        const auto frames = obj.at("frames").get<std::size_t>();
        const auto reports = obj.at("reports").get<std::size_t>();
        const auto controls = obj.at("controls").get<std::size_t>();
        if (frames != log.frames.size() || reports != log.reports.size() ||
            controls != log.controls.size()) {
          throw IntegrityError("footer record counts do not match the session body");
        }
        if (obj.at("sha256").get<std::string>() != sha256_hex(bytes.substr(0, body_len))) {
          throw IntegrityError("footer hash does not match the session body");
        }
        have_footer = true;
      } else {
        throw ParseError(line_no, "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw IntegrityError("empty session file");
  if (!have_footer) throw IntegrityError("session has no footer (truncated?)");
  for (std::size_t i = 1; i < log.frames.size(); ++i) {
    if (log.frames[i].frame.t < log.frames[i - 1].frame.t) {
      throw IntegrityError("frames out of time order at seq " + std::to_string(i));
    }
  }
  return log;
}

std::string session_hash(const SessionLog& log) { return sha256_hex(serialize_session(log)); }

void export_session(const SessionLog& log, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto path = dir / kSessionFile;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_session(log);
  if (!out) throw IoError("write failed on " + path.string());
}

SessionLog import_session(const std::filesystem::path& dir) {
  const auto path = dir / kSessionFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_session(buf.str());
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

}  // namespace simpath::session
