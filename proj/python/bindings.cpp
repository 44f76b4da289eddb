// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "simpath/analysis.hpp"
#include "simpath/geometry.hpp"
#include "simpath/kinematics.hpp"
#include "simpath/prompts.hpp"
#include "simpath/session.hpp"
#include "simpath/sim.hpp"
#include "simpath/synthetic.hpp"
#include "simpath/telemetry.hpp"

namespace py = pybind11;
using namespace simpath;

namespace {

py::dict sample_to_dict(const telemetry::RawSample& s) {
  py::dict d;
  d["t"] = s.t;
  d["ax"] = s.accel.x;
  d["ay"] = s.accel.y;
  d["az"] = s.accel.z;
  d["gx"] = s.gyro.x;
  d["gy"] = s.gyro.y;
  d["gz"] = s.gyro.z;
  d["lat"] = s.lat;
  d["lon"] = s.lon;
  d["v"] = s.speed;
  return d;
}

py::dict summarize(const session::SessionLog& log) {
  py::list frames;
  for (const auto& p : log.frames) {
    py::dict f;
    f["seq"] = p.seq;
    f["t"] = p.frame.t;
    f["scene_speed"] = p.frame.scene_speed;
    f["scene_accel"] = p.frame.scene_accel;
    f["bend_g"] = p.frame.bend_g;
    f["prompt_on"] = p.frame.prompt_on;
    f["brake_light"] = p.frame.brake_light;
    frames.append(f);
  }
  py::dict d;
  d["frames"] = frames;
  d["sha256"] = session::session_hash(log);
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

PYBIND11_MODULE(_simpath, m) {
  m.doc() = "simpath display engine bindings";

  py::register_exception<Error>(m, "SimPathError");

  py::class_<geometry::BendParams>(m, "BendParams")
      .def(py::init<>())
      .def_readwrite("k", &geometry::BendParams::k)
      .def_readwrite("a_min", &geometry::BendParams::a_min)
      .def_readwrite("a_max", &geometry::BendParams::a_max)
      .def_readwrite("brake_threshold", &geometry::BendParams::brake_threshold)
      .def("validate", &geometry::BendParams::validate);

  const geometry::BendParams defaults;
  m.def("z_norm", &geometry::z_norm, py::arg("a"), py::arg("params") = defaults);
  m.def("bend_coefficient", &geometry::bend_coefficient, py::arg("a_steer"),
        py::arg("params") = defaults);
  m.def("lateral_deviation", &geometry::lateral_deviation, py::arg("a_steer"), py::arg("y"),
        py::arg("params") = defaults);
  m.def(
      "bend_road",
      [](const std::vector<double>& ys, double a_steer, const geometry::BendParams& p) {
        std::vector<std::pair<double, double>> out;
        for (const auto& cp : geometry::bend_road(ys, a_steer, p)) out.emplace_back(cp.y, cp.x);
        return out;
      },
      py::arg("base_y"), py::arg("a_steer"), py::arg("params") = defaults,
      "Returns (y, x) pairs of the displaced control points.");

  m.def(
      "ms_score",
      [](int eye, int head, int stomach) {
        analysis::MSReport r;
        r.eye = eye;
        r.head = head;
        r.stomach = stomach;
        return analysis::ms_score(r);
      },
      py::arg("eye"), py::arg("head"), py::arg("stomach"));

  m.def(
      "msdv",
      [](const std::vector<double>& channel, double rate_hz, bool weighting) {
        return analysis::msdv(channel, rate_hz, analysis::Axis::X,
                              weighting ? analysis::Weighting::on : analysis::Weighting::off)
            .value;
      },
      py::arg("channel"), py::arg("rate_hz"), py::arg("weighting") = false);
  m.def(
      "weighting_gain",
      [](double freq_hz, double rate_hz) {
        return analysis::MotionSicknessWeighting(rate_hz).gain(freq_hz);
      },
      py::arg("freq_hz"), py::arg("rate_hz") = 50.0);
  m.def(
      "anova_oneway",
      [](const std::vector<std::vector<double>>& groups) {
        const auto r = analysis::anova_oneway(groups);
        return py::make_tuple(r.f, r.df_between, r.df_within);
      },
      py::arg("groups"), "Returns (F, df_between, df_within).");
  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return analysis::pearson(x, y);
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "parse_log",
      [](const std::string& text) {
        py::list out;
        for (const auto& s : telemetry::parse_log(text)) out.append(sample_to_dict(s));
        return out;
      },
      py::arg("text"), "Parses a JSON Lines ride log into a list of dicts.");
  m.def(
      "resample",
      [](const std::string& text, double rate_hz) {
        py::list out;
        for (const auto& s : telemetry::resample(telemetry::parse_log(text), rate_hz).samples) {
          out.append(sample_to_dict(s));
        }
        return out;
      },
      py::arg("text"), py::arg("rate_hz") = telemetry::kDefaultRateHz);
  m.def(
      "despike",
      [](const std::vector<double>& values, int window, double clamp) {
        auto out = telemetry::median_filter(values, window);
        for (double& v : out) v = std::clamp(v, -clamp, clamp);
        return out;
      },
      py::arg("values"), py::arg("window") = telemetry::kDefaultDespikeWindow,
      py::arg("clamp") = telemetry::kDefaultDespikeClamp,
      "Median filter plus clamp on a single channel.");

  m.def(
      "scheduler_trace",
      [](const std::vector<std::pair<double, double>>& zones, const std::vector<double>& times) {
        std::vector<prompts::ManeuverZone> z;
        for (auto [entry, end] : zones) {
          z.push_back({prompts::ZoneKind::turn, entry, end, std::nullopt});
        }
        const prompts::Route route(std::move(z));
        prompts::PromptState state;
        std::vector<std::pair<std::string, bool>> out;
        for (double t : times) {
          state = prompts::step_scheduler(state, t, prompts::locate_zone(t, route));
          out.emplace_back(std::string(prompts::to_string(state.phase)), state.symbol_visible);
        }
        return out;
      },
      py::arg("zones"), py::arg("times"),
      "Runs the prompt scheduler over (entry_t, end_t) zones; returns (phase, visible) per time.");

  m.def(
      "sim_step",
      [](double x, double y, double heading, double v, double throttle, double steer, double dt) {
        const auto r = session::sim_step({x, y, heading, v}, {throttle, steer}, dt);
        return py::make_tuple(r.state.x, r.state.y, r.state.heading, r.state.v);
      },
      py::arg("x"), py::arg("y"), py::arg("heading"), py::arg("v"), py::arg("throttle"),
      py::arg("steer"), py::arg("dt"), "Returns (x, y, heading, v).");

  m.def(
      "replay",
      [](const std::string& ride_path, const std::string& route_path,
         const std::string& params_path) {
        const auto ride = telemetry::parse_log(read_file(ride_path));
        const auto route = route_path.empty() ? prompts::Route{} : prompts::load_route(route_path);
        const auto config =
            params_path.empty() ? session::PipelineConfig{} : session::load_config(params_path);
        return summarize(session::replay(ride, route, config));
      },
      py::arg("ride"), py::arg("route") = "", py::arg("params") = "");
  m.def("replay_synthetic", []() {
    return summarize(session::replay(session::synthetic_ride(), session::synthetic_route(),
                                     session::PipelineConfig{}));
  });
}
