// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

// simpath: replay ride logs, analyze sessions, and serve live sessions.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "simpath/analysis.hpp"
#include "simpath/live.hpp"
#include "simpath/session.hpp"
#include "simpath/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace simpath;

namespace {

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

std::vector<telemetry::RawSample> read_ride(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ride log " + path.string());
  return telemetry::parse_log(in);
}

std::vector<analysis::MSReport> read_reports(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file " + path.string());
  return analysis::parse_reports(in);
}

session::PipelineConfig read_config(const std::string& path) {
  return path.empty() ? session::PipelineConfig{} : session::load_config(path);
}

telemetry::UniformSeries read_telemetry(const fs::path& dir, double rate_hz) {
  const auto path = dir / session::kTelemetryFile;
  std::ifstream in(path);
  if (!in) throw IoError("session has no telemetry: " + path.string());
  auto samples = telemetry::parse_log(in);
  return telemetry::resample(samples, rate_hz);
}

int cmd_replay(const std::string& ride, const std::string& route, const std::string& params,
               const std::string& reports, const fs::path& out) {
  const auto config = read_config(params);
  const auto samples = read_ride(ride);
  const auto zones = route.empty() ? prompts::Route{} : prompts::load_route(route);
  std::vector<analysis::MSReport> ms;
  if (!reports.empty()) ms = read_reports(reports);

  const auto log = session::replay(samples, zones, config, ms);
  session::export_session(log, out);

  // Measured (not despiked) acceleration on the resample grid, for MSDV.
  const auto series = telemetry::resample(samples, config.resample_rate_hz);
  std::ofstream tel(out / session::kTelemetryFile, std::ios::binary | std::ios::trunc);
  if (!tel) throw IoError("cannot write " + (out / session::kTelemetryFile).string());
  telemetry::write_log(tel, series.samples);

  ordered_json summary;
  summary["frames"] = log.frames.size();
  summary["reports"] = log.reports.size();
  summary["session_sha256"] = session::session_hash(log);
  summary["out"] = out.string();
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_msdv(const fs::path& dir, const std::string& weighting) {
  const auto log = session::import_session(dir);
  const auto series = read_telemetry(dir, log.header.config.resample_rate_hz);
  const auto w = weighting == "on" ? analysis::Weighting::on : analysis::Weighting::off;
  ordered_json doc;
  doc["weighting"] = weighting;
  doc["axes"] = ordered_json::array();
  for (auto axis : {analysis::Axis::X, analysis::Axis::Y, analysis::Axis::Z}) {
    const auto r = analysis::msdv(series, axis, w);
    doc["axes"].push_back({{"axis", analysis::to_string(axis)},
                           {"value", r.value},
                           {"duration", r.duration}});
  }
  std::cout << doc.dump(2) << '\n';
  return 0;
}

std::vector<analysis::MSReport> plain_reports(const session::SessionLog& log) {
  std::vector<analysis::MSReport> out;
  for (const auto& r : log.reports) out.push_back(r.report);
  return out;
}

int cmd_heatmap(const fs::path& dir, double cell_size, const std::string& out_path) {
  const auto log = session::import_session(dir);
  const auto grid = analysis::heatmap(plain_reports(log), cell_size);
  const std::string text = analysis::heatmap_to_json(grid).dump(2);
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << text << '\n';
  }
  if (grid.skipped > 0) {
    std::cerr << "warning: " << grid.skipped << " modification(s) without position skipped\n";
  }
  return 0;
}

double nearest_bend(const session::SessionLog& log, double t) {
  const auto& f = log.frames;
  auto it = std::lower_bound(f.begin(), f.end(), t,
                             [](const session::FramePacket& p, double v) { return p.frame.t < v; });
  if (it == f.end()) return std::abs(f.back().frame.bend_g);
  if (it != f.begin() && t - std::prev(it)->frame.t < it->frame.t - t) --it;
  return std::abs(it->frame.bend_g);
}

int cmd_stats(const std::vector<std::string>& sessions, const std::string& groups_path) {
  ordered_json doc;
  std::vector<std::vector<double>> groups;
  std::vector<double> xs;
  std::vector<double> ys;

  if (!groups_path.empty()) {
    std::ifstream in(groups_path);
    if (!in) throw IoError("cannot open " + groups_path);
    const auto g = nlohmann::json::parse(in);
    if (g.contains("groups")) groups = g["groups"].get<std::vector<std::vector<double>>>();
    if (g.contains("x")) xs = g["x"].get<std::vector<double>>();
    if (g.contains("y")) ys = g["y"].get<std::vector<double>>();
  }
  for (const auto& dir : sessions) {
    const auto log = session::import_session(dir);
    std::vector<double> scores;
    for (const auto& r : log.reports) {
      scores.push_back(analysis::ms_score(r.report));
      if (!log.frames.empty()) {
        xs.push_back(analysis::ms_score(r.report));
        ys.push_back(nearest_bend(log, r.report.t));
      }
    }
    groups.push_back(std::move(scores));
  }

  try {
    const auto a = analysis::anova_oneway(groups);
    doc["anova"] = {{"F", std::isinf(a.f) ? ordered_json("inf") : ordered_json(a.f)},
                    {"df_between", a.df_between},
                    {"df_within", a.df_within}};
  } catch (const Error& e) {
    doc["anova"] = nullptr;
    doc["anova_error"] = e.what();
  }
  try {
    doc["pearson"] = {{"r", analysis::pearson(xs, ys)}, {"n", xs.size()}};
  } catch (const Error& e) {
    doc["pearson"] = nullptr;
    doc["pearson_error"] = e.what();
  }
  std::cout << doc.dump(2) << '\n';
  return 0;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int cmd_serve(int port, const std::string& route, const std::string& params,
              const std::string& bind, const fs::path& out, double duration) {
  const auto config = read_config(params);
  const auto zones = route.empty() ? prompts::Route{} : prompts::load_route(route);
  session::ServerOptions options;
  options.port = static_cast<std::uint16_t>(port);
  options.bind_address = bind;
  options.out_dir = out;
  session::Server server(session::LiveSession(config, zones, {34.2, 108.9}, utc_now()), options);
  std::cerr << "simpath: serving on " << bind << ":" << server.port() << '\n';

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::optional<std::uint64_t> max_ticks;
  if (duration > 0) {
    max_ticks = static_cast<std::uint64_t>(std::llround(duration * config.frame_rate_hz));
  }
  std::jthread worker([&](std::stop_token st) { server.run(st, max_ticks); });
  while (!g_interrupted) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    if (max_ticks && server.session().log().frames.size() >= *max_ticks) break;
  }
  worker.request_stop();
  worker.join();
  std::cerr << "simpath: session written to " << (out / session::kSessionFile).string() << '\n';
  return 0;
}

int cmd_synth(const std::string& ride, const std::string& route) {
  {
    std::ofstream out(ride, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + ride);
    telemetry::write_log(out, session::synthetic_ride());
  }
  if (!route.empty()) {
    std::ofstream out(route, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + route);
    out << prompts::route_to_json(session::synthetic_route()).dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simpath: motion-synchronized road display engine"};
  app.require_subcommand(1);

  std::string ride, route, params, reports, out = "session_out";
  auto* replay = app.add_subcommand("replay", "Replay a ride log through the display pipeline");
  replay->add_option("--ride", ride, "Ride log (JSON Lines)")->required();
  replay->add_option("--route", route, "Route file with maneuver zones");
  replay->add_option("--params", params, "Pipeline config (JSON)");
  replay->add_option("--reports", reports, "MS reports to attach (JSON Lines)");
  replay->add_option("--out", out, "Output session directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Offline metrics on recorded sessions");
  analyze->require_subcommand(1);
  std::vector<std::string> sessions;
  std::string weighting = "off", heat_out, groups;
  double cell_size = analysis::kDefaultCellSizeM;
  auto* msdv = analyze->add_subcommand("msdv", "Per-axis motion sickness dose value");
  msdv->add_option("--session", sessions, "Session directory")->required()->expected(1);
  msdv->add_option("--weighting", weighting, "Frequency weighting")
      ->check(CLI::IsMember({"on", "off"}));
  auto* heat = analyze->add_subcommand("heatmap", "MS-modification heatmap grid");
  heat->add_option("--session", sessions, "Session directory")->required()->expected(1);
  heat->add_option("--cell-size", cell_size, "Cell size in meters");
  heat->add_option("--out", heat_out, "Write the grid here instead of stdout");
  auto* stats = analyze->add_subcommand("stats", "One-way ANOVA and Pearson correlation");
  stats->add_option("--session", sessions, "Session directory; one ANOVA group each");
  stats->add_option("--groups", groups, "JSON {groups:[[...]], x:[...], y:[...]}");
  stats->add_option("--weighting", weighting, "Accepted for symmetry; unused")
      ->check(CLI::IsMember({"on", "off"}));

  int port = 7400;
  std::string bind = "127.0.0.1";
  double duration = 0.0;
  std::string serve_out = "live_session";
  auto* serve = app.add_subcommand("serve", "Run a live session endpoint");
  serve->add_option("--port", port, "TCP port (0 = ephemeral)");
  serve->add_option("--route", route, "Route file with maneuver zones");
  serve->add_option("--params", params, "Pipeline config (JSON)");
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--out", serve_out, "Directory for the persisted session");
  serve->add_option("--duration", duration, "Stop after this many seconds (0 = until SIGINT)");

  std::string synth_ride, synth_route;
  auto* synth = app.add_subcommand("synth", "Write the scripted 60 s test ride");
  synth->add_option("--ride", synth_ride, "Ride log output")->required();
  synth->add_option("--route", synth_route, "Route file output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*replay) return cmd_replay(ride, route, params, reports, out);
    if (*msdv) return cmd_msdv(sessions.front(), weighting);
    if (*heat) return cmd_heatmap(sessions.front(), cell_size, heat_out);
    if (*stats) {
      if (sessions.empty() && groups.empty()) throw ArgumentError("stats needs --session or --groups");
      return cmd_stats(sessions, groups);
    }
    if (*serve) return cmd_serve(port, route, params, bind, serve_out, duration);
    if (*synth) return cmd_synth(synth_ride, synth_route);
  } catch (const std::exception& e) {
    std::cerr << "simpath: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
