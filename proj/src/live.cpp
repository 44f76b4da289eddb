// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/live.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>

namespace simpath::session {

// ---------------------------------------------------------------------------
// LiveSession

LiveSession::LiveSession(PipelineConfig config, prompts::Route route, GeoPoint origin,
                         std::string started_at)
    : route_(std::move(route)), origin_(origin) {
  config.validate();
  if (1.0 / config.frame_rate_hz > kMaxSimStep) {
    throw ConfigError("live sessions need frame_rate_hz >= 10");
  }
  log_.header.config = std::move(config);
  log_.header.route_hash = route_hash(route_);
  log_.header.start_time = 0.0;
  log_.header.started_at = std::move(started_at);
}

GeoPoint LiveSession::position() const { return offset_to_geo(origin_, vehicle_.x, vehicle_.y); }

ControlInput LiveSession::set_control(double throttle, double steer) {
  if (!std::isfinite(throttle) || !std::isfinite(steer)) {
    throw ValidationError("control values must be finite");
  }
  input_ = {throttle, steer};
  ControlInput c{now_, throttle, steer};
  log_.controls.push_back(c);
  return c;
}

SessionReport LiveSession::add_report(int eye, int head, int stomach, std::string participant) {
  analysis::MSReport r{now_, position(), eye, head, stomach, std::move(participant)};
  r.validate();
  auto [it, first] = last_report_.try_emplace(r.participant, log_.header.start_time);
  const bool gap = r.t - it->second > kReportGapSeconds;
  it->second = r.t;
  SessionReport out{std::move(r), gap};
  log_.reports.push_back(out);
  return out;
}

FramePacket LiveSession::tick() {
  const auto& config = log_.header.config;
  kinematics::MotionState motion{0.0, vehicle_.v, input_.throttle_accel, input_.steer_rate};
  if (seq_ > 0) {
    now_ = static_cast<double>(seq_) / config.frame_rate_hz;
    const auto step = sim_step(vehicle_, input_, dt(), now_);
    vehicle_ = step.state;
    motion = step.motion;
  }
  if (seq_ == 0) {
    smoothed_ = motion;
  } else {
    const kinematics::MotionState pair[] = {smoothed_, motion};
    smoothed_ = kinematics::smooth(pair, config.alpha)[1];
  }
  smoothed_.t = now_;

  const GeoPoint here = position();
  const auto fix = route_.geofenced() ? locator_.update(here, smoothed_.v, route_)
                                      : prompts::locate_zone(now_, route_);
  prompt_ = prompts::step_scheduler(prompt_, now_, fix);

  FramePacket packet{seq_++, geometry::make_frame(smoothed_, prompt_.symbol_visible,
                                                  config.base_points, config.bend)};
  log_.frames.push_back(packet);

  telemetry::RawSample sample;
  sample.t = now_;
  const double yaw_rate = input_.steer_rate * std::numbers::pi / 180.0;
  sample.accel = {input_.throttle_accel, vehicle_.v * yaw_rate, 9.81};
  sample.gyro = {0.0, 0.0, input_.steer_rate};
  sample.lat = here.lat;
  sample.lon = here.lon;
  sample.speed = vehicle_.v;
  telemetry_.push_back(sample);
  return packet;
}

// ---------------------------------------------------------------------------
// Server

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string error_reply(std::string_view reason) {
  ordered_json obj;
  obj["type"] = "error";
  obj["reason"] = reason;
  return obj.dump() + '\n';
}

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

Server::Server(LiveSession session, ServerOptions options)
    : session_(std::move(session)), options_(std::move(options)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(options_.port);
  if (::inet_pton(AF_INET, options_.bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw ConfigError("bad bind address '" + options_.bind_address + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(listen_fd_);
    throw IoError("cannot listen on " + options_.bind_address + ":" +
                  std::to_string(options_.port) + ": " + reason);
  }
  set_nonblocking(listen_fd_);

  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

Server::~Server() {
  for (auto& [fd, c] : clients_) ::close(fd);
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::run(std::stop_token stop, std::optional<std::uint64_t> max_ticks) {
  using clock = std::chrono::steady_clock;
  writer_ = std::make_unique<SessionWriter>(options_.out_dir / kSessionFile, session_.log().header);

  const auto period = std::chrono::duration_cast<clock::duration>(
      std::chrono::duration<double>(session_.dt()));
  auto next_tick = clock::now();
  std::uint64_t ticks = 0;

  while (!stop.stop_requested() && (!max_ticks || ticks < *max_ticks)) {
    if (clock::now() >= next_tick) {
      const FramePacket packet = session_.tick();
      writer_->append(packet);
      broadcast(frame_line(packet));
      ++ticks;
      next_tick += period;
      drop_closed();
      continue;
    }

    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    for (auto& [fd, c] : clients_) {
      fds.push_back({fd, static_cast<short>(POLLIN | (c.out.empty() ? 0 : POLLOUT)), 0});
    }
    const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(next_tick - clock::now());
    const int timeout = static_cast<int>(std::clamp<long long>(wait.count() + 1, 0, 50));
    if (::poll(fds.data(), fds.size(), timeout) < 0 && errno != EINTR) {
      throw IoError(std::string("poll: ") + std::strerror(errno));
    }
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == listen_fd_) {
        accept_clients();
        continue;
      }
      auto it = clients_.find(p.fd);
      if (it == clients_.end()) continue;
      if (p.revents & POLLIN) read_client(it->second);
      if (p.revents & POLLOUT) flush_client(it->second);
      if (p.revents & (POLLERR | POLLNVAL)) it->second.closing = true;
      if ((p.revents & POLLHUP) && !(p.revents & POLLIN)) it->second.closing = true;
    }
    drop_closed();
  }
  persist();
}

void Server::accept_clients() {
  while (true) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) return;
    set_nonblocking(fd);
    clients_[fd].fd = fd;
  }
}

void Server::read_client(Connection& c) {
  char buf[4096];
  while (true) {
    const ssize_t n = ::recv(c.fd, buf, sizeof(buf), 0);
    if (n > 0) {
      c.in.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n == 0) c.closing = true;
    if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) c.closing = true;
    break;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = c.in.find('\n', start);
    if (nl == std::string::npos) break;
    std::string_view line(c.in.data() + start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      if (auto reply = handle_message(c.fd, line)) queue(c, *reply);
    }
    start = nl + 1;
  }
  c.in.erase(0, start);
  if (c.in.size() > options_.max_line_bytes) {
    c.in.clear();
    queue(c, error_reply("message exceeds maximum line length"));
  }
  flush_client(c);
}

void Server::flush_client(Connection& c) {
  while (!c.out.empty()) {
    const ssize_t n = ::send(c.fd, c.out.data(), c.out.size(), MSG_NOSIGNAL);
    if (n > 0) {
      c.out.erase(0, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR)) return;
    c.closing = true;
    return;
  }
}

void Server::queue(Connection& c, const std::string& line) {
  c.out += line;
  if (c.out.size() > options_.max_backlog_bytes) c.closing = true;
}

void Server::broadcast(const std::string& line) {
  for (auto& [fd, c] : clients_) {
    if (c.closing) continue;
    queue(c, line);
    flush_client(c);
  }
}

void Server::drop_closed() {
  for (auto it = clients_.begin(); it != clients_.end();) {
    if (it->second.closing) {
      if (it->first == driver_) driver_ = -1;
      ::close(it->first);
      it = clients_.erase(it);
    } else {
      ++it;
    }
  }
}

std::optional<std::string> Server::handle_message(int conn, std::string_view line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error&) {
    return error_reply("malformed JSON");
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return error_reply("message needs a string 'type'");
  }
  const std::string type = msg["type"].get<std::string>();
  ordered_json ack;
  ack["type"] = "ack";
  ack["for"] = type;

  if (type == "hello") {
    const std::string role = msg.value("role", "viewer");
    if (role == "driver") {
      if (driver_ != -1 && driver_ != conn) return error_reply("a driver is already connected");
      driver_ = conn;
      if (auto it = clients_.find(conn); it != clients_.end()) it->second.driver = true;
    } else if (role != "viewer") {
      return error_reply("unknown role '" + role + "'");
    }
    ack["role"] = role;
    return ack.dump() + '\n';
  }

  if (type == "control") {
    if (conn != driver_) return error_reply("only the driver may send control messages");
    const auto throttle = msg.find("throttle");
    const auto steer = msg.find("steer");
    if (throttle == msg.end() || steer == msg.end() || !throttle->is_number() ||
        !steer->is_number()) {
      return error_reply("control needs numeric 'throttle' and 'steer'");
    }
    try {
      const ControlInput c = session_.set_control(throttle->get<double>(), steer->get<double>());
      if (writer_) writer_->append(c);
      ack["t"] = c.t;
    } catch (const Error& e) {
      return error_reply(e.what());
    }
    return ack.dump() + '\n';
  }

  if (type == "ms") {
    int items[3] = {};
    const char* keys[3] = {"eye", "head", "stomach"};
    for (int i = 0; i < 3; ++i) {
      const auto it = msg.find(keys[i]);
      if (it == msg.end() || !it->is_number_integer()) {
        return error_reply(std::string("ms needs integer '") + keys[i] + "'");
      }
      items[i] = it->get<int>();
    }
    std::string participant = "client-" + std::to_string(conn);
    if (msg.contains("participant") && msg["participant"].is_string()) {
      participant = msg["participant"].get<std::string>();
    }
    try {
      const SessionReport r = session_.add_report(items[0], items[1], items[2], participant);
      if (writer_) writer_->append(r);
      ack["t"] = r.report.t;
      ack["score"] = analysis::ms_score(r.report);
      ack["gap_flag"] = r.gap_flag;
    } catch (const Error& e) {
      return error_reply(e.what());
    }
    return ack.dump() + '\n';
  }

  return error_reply("unknown message type '" + type + "'");
}

void Server::persist() {
  for (auto& [fd, c] : clients_) flush_client(c);
  if (writer_) writer_->close();
  const auto path = options_.out_dir / kTelemetryFile;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  telemetry::write_log(out, session_.telemetry());
}

}  // namespace simpath::session
