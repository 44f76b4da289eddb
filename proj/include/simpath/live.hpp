// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "simpath/session.hpp"
#include "simpath/sim.hpp"

namespace simpath::session {

/// Pipeline owner for a human-steered session. Advances the vehicle one
/// frame per tick() using the last control received (inputs are held, not
/// zeroed, when no new message arrives).
class LiveSession {
 public:
  LiveSession(PipelineConfig config, prompts::Route route,
              GeoPoint origin = {34.2, 108.9}, std::string started_at = {});

  /// Records a control input at the current session time; it drives every
  /// step until replaced.
  ControlInput set_control(double throttle, double steer);

  /// Stamps a report with the session time and vehicle position.
  SessionReport add_report(int eye, int head, int stomach, std::string participant);

  /// Emits the next frame. The first call emits seq 0 at t = 0 without
  /// moving the vehicle.
  FramePacket tick();

  double now() const { return now_; }
  double dt() const { return 1.0 / log_.header.config.frame_rate_hz; }
  const VehicleState& vehicle() const { return vehicle_; }
  GeoPoint position() const;
  const SessionLog& log() const { return log_; }

  /// Synthetic ride-log samples (one per tick) so analysis can run on live
  /// sessions: ax = throttle, ay = centripetal, az = 9.81, gz = steer rate.
  const std::vector<telemetry::RawSample>& telemetry() const { return telemetry_; }

 private:
  prompts::Route route_;
  GeoPoint origin_;
  SessionLog log_;
  VehicleState vehicle_;
  SimInput input_;
  kinematics::MotionState smoothed_;
  prompts::PromptState prompt_;
  prompts::GeofenceLocator locator_;
  std::map<std::string, double> last_report_;
  std::vector<telemetry::RawSample> telemetry_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
};

struct ServerOptions {
  std::uint16_t port = 0;  // 0 picks an ephemeral port
  std::string bind_address = "127.0.0.1";
  std::filesystem::path out_dir = "session";
  /// Viewers whose unsent backlog exceeds this are disconnected.
  std::size_t max_backlog_bytes = 1 << 20;
  std::size_t max_line_bytes = 64 * 1024;
};

/// Newline-delimited JSON over TCP. Server -> client: "frame" packets plus
/// "ack"/"error" replies. Client -> server: "hello" {role}, "control"
/// {throttle, steer} (driver only), "ms" {eye, head, stomach[, participant]}.
///
/// Single-threaded: run() owns the clock, the sockets and the session file.
class Server {
 public:
  /// Binds and listens immediately; throws IoError if the port is busy.
  Server(LiveSession session, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const { return port_; }

  /// Ticks at the frame rate until stop is requested or `max_ticks` frames
  /// have been broadcast, then persists the session and closes all sockets.
  void run(std::stop_token stop, std::optional<std::uint64_t> max_ticks = std::nullopt);

  /// Session state after run() returns.
  const LiveSession& session() const { return session_; }

  /// Handles one client line; returns the reply to send back, if any.
  /// Exposed for tests; `conn` identifies the sender.
  std::optional<std::string> handle_message(int conn, std::string_view line);

 private:
  struct Connection {
    int fd = -1;
    std::string in;
    std::string out;
    bool driver = false;
    bool closing = false;
  };

  void accept_clients();
  void read_client(Connection& c);
  void flush_client(Connection& c);
  void queue(Connection& c, const std::string& line);
  void broadcast(const std::string& line);
  void drop_closed();
  void persist();

  LiveSession session_;
  ServerOptions options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::map<int, Connection> clients_;
  int driver_ = -1;
  std::unique_ptr<SessionWriter> writer_;
};

}  // namespace simpath::session
