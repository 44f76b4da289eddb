// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "simpath/analysis.hpp"
#include "simpath/error.hpp"
#include "simpath/geometry.hpp"
#include "simpath/kinematics.hpp"
#include "simpath/prompts.hpp"
#include "simpath/telemetry.hpp"

namespace simpath::session {

inline constexpr double kDefaultFrameRateHz = 30.0;
/// Participants are expected to report at least this often.
inline constexpr double kReportGapSeconds = 30.0;
inline constexpr const char* kSessionFile = "session.jsonl";
inline constexpr const char* kTelemetryFile = "telemetry.jsonl";

/// Everything that shapes a frame. Serialized into every session header.
struct PipelineConfig {
  geometry::BendParams bend;
  double alpha = kinematics::kDefaultAlpha;
  double frame_rate_hz = kDefaultFrameRateHz;
  double resample_rate_hz = telemetry::kDefaultRateHz;
  int despike_window = telemetry::kDefaultDespikeWindow;
  double despike_clamp = telemetry::kDefaultDespikeClamp;
  std::vector<double> base_points = geometry::default_base_points();

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

struct FramePacket {
  std::uint64_t seq = 0;
  geometry::FrameGeometry frame;

  friend bool operator==(const FramePacket&, const FramePacket&) = default;
};

/// Wire/persistence form, tagged "type":"frame".
nlohmann::ordered_json frame_to_json(const FramePacket& packet);
FramePacket frame_from_json(const nlohmann::json& obj);

struct ControlInput {
  double t = 0.0;
  double throttle = 0.0;  // m/s^2
  double steer = 0.0;     // deg/s

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct SessionReport {
  analysis::MSReport report;
  /// More than 30 s since this participant's previous report (or session
  /// start, for the first one).
  bool gap_flag = false;

  friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

struct SessionHeader {
  PipelineConfig config;
  std::string route_hash;
  double start_time = 0.0;  // session clock origin, s
  std::string started_at;   // wall clock (live sessions only)

  friend bool operator==(const SessionHeader&, const SessionHeader&) = default;
};

struct SessionLog {
  SessionHeader header;
  std::vector<FramePacket> frames;
  std::vector<SessionReport> reports;
  std::vector<ControlInput> controls;

  friend bool operator==(const SessionLog&, const SessionLog&) = default;
};

/// Raised when replay fails; carries the session time of the failure.
class ReplayError : public Error {
 public:
  ReplayError(double t, const std::string& what)
      : Error("replay aborted at t=" + std::to_string(t) + ": " + what), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Stamps gap flags on reports in order, relative to `session_start`.
std::vector<SessionReport> flag_report_gaps(std::span<const analysis::MSReport> reports,
                                            double session_start);

/// Full batch pipeline: resample, despike, derive motion, smooth, then one
/// frame per 1/frame_rate tick with the prompt scheduler. Deterministic.
SessionLog replay(std::span<const telemetry::RawSample> ride, const prompts::Route& route,
                  const PipelineConfig& config,
                  std::span<const analysis::MSReport> reports = {});

/// SHA-256 of the canonical route document.
std::string route_hash(const prompts::Route& route);

std::string sha256_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// Persistence: append-only JSON Lines closed by a footer carrying the record
// counts and the SHA-256 of every preceding byte.

std::string header_line(const SessionHeader& header);
std::string frame_line(const FramePacket& packet);
std::string report_line(const SessionReport& report);
std::string control_line(const ControlInput& control);

/// Appends records as they happen; close() writes the footer.
class SessionWriter {
 public:
  SessionWriter(const std::filesystem::path& path, const SessionHeader& header);
  ~SessionWriter();
  SessionWriter(const SessionWriter&) = delete;
  SessionWriter& operator=(const SessionWriter&) = delete;

  void append(const FramePacket& packet);
  void append(const SessionReport& report);
  void append(const ControlInput& control);
  void close();

 private:
  void write(const std::string& line);

  std::filesystem::path path_;
  std::ofstream out_;
  std::string hashed_;
  std::size_t frames_ = 0;
  std::size_t reports_ = 0;
  std::size_t controls_ = 0;
  bool closed_ = false;
};

/// The whole file, footer included.
std::string serialize_session(const SessionLog& log);

/// Throws IntegrityError on seq gaps, count or hash mismatch, or a missing
/// footer; ParseError on malformed lines.
SessionLog parse_session(std::string_view bytes);

/// SHA-256 of serialize_session(log).
std::string session_hash(const SessionLog& log);

/// Writes `dir`/session.jsonl, creating `dir` if needed.
void export_session(const SessionLog& log, const std::filesystem::path& dir);
SessionLog import_session(const std::filesystem::path& dir);

}  // namespace simpath::session
