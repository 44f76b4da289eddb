// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "simpath/error.hpp"

namespace simpath::prompts {

std::string_view to_string(ZoneKind kind) {
  return kind == ZoneKind::turn ? "turn" : "deceleration";
}

ZoneKind zone_kind_from_string(std::string_view s) {
  if (s == "turn") return ZoneKind::turn;
  if (s == "deceleration") return ZoneKind::deceleration;
  throw ConfigError("unknown zone kind '" + std::string(s) + "'");
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::idle:
      return "idle";
    case Phase::flashing:
      return "flashing";
    case Phase::cooldown:
      return "cooldown";
  }
  return "idle";
}

Route::Route(std::vector<ManeuverZone> zones) {
  if (zones.empty()) return;
  const bool any_timed = std::any_of(zones.begin(), zones.end(), [](auto& z) { return z.timed(); });
  const bool any_fenced =
      std::any_of(zones.begin(), zones.end(), [](auto& z) { return z.geofence.has_value(); });
  if (any_timed && any_fenced) throw ConfigError("route mixes timed and geofenced zones");

  for (std::size_t i = 0; i < zones.size(); ++i) {
    const auto& z = zones[i];
    const std::string where = "zone " + std::to_string(i) + ": ";
    if (z.timed()) {
      if (!z.end_t) throw ConfigError(where + "timed zone needs end_t");
      if (!std::isfinite(*z.entry_t) || !std::isfinite(*z.end_t) || !(*z.end_t > *z.entry_t)) {
        throw ConfigError(where + "need finite entry_t < end_t");
      }
    } else if (z.geofence) {
      if (z.end_t) throw ConfigError(where + "geofenced zones end on exit; end_t not allowed");
      if (!(z.geofence->radius_m > 0.0)) throw ConfigError(where + "radius_m must be positive");
    } else {
      throw ConfigError(where + "needs entry_t or a geofence");
    }
  }

  geofenced_ = any_fenced;
  if (geofenced_) {
    zones_ = std::move(zones);
    return;
  }

  std::sort(zones.begin(), zones.end(),
            [](const ManeuverZone& a, const ManeuverZone& b) { return *a.entry_t < *b.entry_t; });
  for (auto& z : zones) {
    if (zones_.empty()) {
      zones_.push_back(z);
      continue;
    }
    ManeuverZone& prev = zones_.back();
    if (*z.entry_t < *prev.end_t) {
      throw ConfigError("zones overlap at t=" + std::to_string(*z.entry_t));
    }
    if (*z.entry_t - *prev.end_t < kMergeGapSeconds) {
      prev.end_t = std::max(*prev.end_t, *z.end_t);
    } else {
      zones_.push_back(z);
    }
  }
}

Route route_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("zones") || !doc["zones"].is_array()) {
    throw ConfigError("route document needs a 'zones' array");
  }
  std::vector<ManeuverZone> zones;
  try {
    for (const auto& item : doc["zones"]) {
      ManeuverZone z;
      z.kind = zone_kind_from_string(item.at("kind").get<std::string>());
      if (item.contains("entry_t")) z.entry_t = item["entry_t"].get<double>();
      if (item.contains("end_t")) z.end_t = item["end_t"].get<double>();
      if (item.contains("lat") || item.contains("lon") || item.contains("radius_m")) {
        z.geofence = Geofence{{item.at("lat").get<double>(), item.at("lon").get<double>()},
                              item.at("radius_m").get<double>()};
      }
      if (z.entry_t && z.geofence) throw ConfigError("zone has both entry_t and a geofence");
      zones.push_back(z);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad route zone: ") + e.what());
  }
  return Route(std::move(zones));
}

nlohmann::ordered_json route_to_json(const Route& route) {
  nlohmann::ordered_json zones = nlohmann::ordered_json::array();
  for (const auto& z : route.zones()) {
    nlohmann::ordered_json item;
    item["kind"] = to_string(z.kind);
    if (z.timed()) {
      item["entry_t"] = *z.entry_t;
      item["end_t"] = *z.end_t;
    } else {
      item["lat"] = z.geofence->center.lat;
      item["lon"] = z.geofence->center.lon;
      item["radius_m"] = z.geofence->radius_m;
    }
    zones.push_back(item);
  }
  return {{"zones", zones}};
}

Route load_route(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open route file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return route_from_json(doc);
}

std::optional<ZoneFix> locate_zone(double t, const Route& route) {
  if (route.geofenced()) throw ConfigError("time lookup on a geofenced route");
  const auto& zones = route.zones();
  for (std::size_t i = 0; i < zones.size(); ++i) {
    if (t < *zones[i].end_t) return ZoneFix{i, *zones[i].entry_t - t, zones[i].end_t};
  }
  return std::nullopt;
}

std::optional<ZoneFix> GeofenceLocator::update(const GeoPoint& position, double speed,
                                               const Route& route) {
  if (!route.geofenced() && !route.empty()) {
    throw ConfigError("geofence lookup on a timed route");
  }
  const auto& zones = route.zones();
  while (next_ < zones.size()) {
    const Geofence& fence = *zones[next_].geofence;
    const double edge = distance_m(position, fence.center) - fence.radius_m;
    if (edge <= 0.0) {
      inside_ = true;
      const double eta = speed > 0.0 ? edge / speed : 0.0;
      return ZoneFix{next_, eta, std::nullopt};
    }
    if (inside_) {
      inside_ = false;
      ++next_;
      continue;
    }
    const double eta = speed > 0.0 ? edge / speed : std::numeric_limits<double>::infinity();
    return ZoneFix{next_, eta, std::nullopt};
  }
  return std::nullopt;
}

PromptState step_scheduler(const PromptState& state, double t, const std::optional<ZoneFix>& fix) {
  if (std::isnan(t) || t < state.last_t) {
    throw MonotonicityError("scheduler time went backwards: " + std::to_string(t) + " < " +
                            std::to_string(state.last_t));
  }
  PromptState s = state;
  s.last_t = t;

  // Each pass either settles or moves one phase forward, so three passes
  // cover cooldown -> idle -> flashing within a single tick.
  for (int pass = 0; pass < 3; ++pass) {
    switch (s.phase) {
      case Phase::idle: {
        const bool armed = fix && fix->time_to_entry <= kLeadSeconds &&
                           !(fix->end_t && t >= *fix->end_t);
        if (!armed) {
          s.symbol_visible = false;
          return s;
        }
        s.phase = Phase::flashing;
        s.zone = fix->index;
        s.activated_at = t;
        s.zone_end = fix->end_t;
        break;
      }
      case Phase::flashing: {
        const bool ended = s.zone_end ? t >= *s.zone_end : (!fix || fix->index != s.zone);
        if (ended) {
          s.phase = Phase::cooldown;
          s.cooldown_until = (s.zone_end ? *s.zone_end : t) + kTailSeconds;
          break;
        }
        const auto half_periods =
            static_cast<long long>(std::floor((t - s.activated_at) / kFlashPeriodSeconds));
        s.symbol_visible = half_periods % 2 == 0;
        return s;
      }
      case Phase::cooldown: {
        if (t >= s.cooldown_until) {
          s.phase = Phase::idle;
          s.symbol_visible = false;
          s.zone_end.reset();
          break;
        }
        s.symbol_visible = true;
        return s;
      }
    }
  }
  return s;
}

}  // namespace simpath::prompts
