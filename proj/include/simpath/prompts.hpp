// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "simpath/geo.hpp"

namespace simpath::prompts {

/// Symbol lead time before zone entry, flash half-period, and hold after the
/// maneuver ends.
inline constexpr double kLeadSeconds = 3.0;
inline constexpr double kFlashPeriodSeconds = 1.0;
inline constexpr double kTailSeconds = 1.0;
/// Timed zones separated by less than this merge at load time.
inline constexpr double kMergeGapSeconds = 4.0;

enum class ZoneKind { turn, deceleration };

std::string_view to_string(ZoneKind kind);
ZoneKind zone_kind_from_string(std::string_view s);

struct Geofence {
  GeoPoint center;
  double radius_m = 0.0;
};

/// A route annotation that arms the anticipatory symbol.
///
/// Replay zones carry entry_t/end_t on the session clock. Live zones carry a
/// geofence instead; they are active while the vehicle is inside the disk.
struct ManeuverZone {
  ZoneKind kind = ZoneKind::turn;
  std::optional<double> entry_t;
  std::optional<double> end_t;
  std::optional<Geofence> geofence;

  bool timed() const { return entry_t.has_value(); }
};

/// Validated zones: timed zones sorted, non-overlapping and merged when
/// closer than kMergeGapSeconds; geofenced zones kept in route order.
class Route {
 public:
  Route() = default;
  /// Throws ConfigError on invalid, overlapping, or mixed zone kinds.
  explicit Route(std::vector<ManeuverZone> zones);

  const std::vector<ManeuverZone>& zones() const { return zones_; }
  bool geofenced() const { return geofenced_; }
  bool empty() const { return zones_.empty(); }

 private:
  std::vector<ManeuverZone> zones_;
  bool geofenced_ = false;
};

Route route_from_json(const nlohmann::json& doc);
nlohmann::ordered_json route_to_json(const Route& route);
Route load_route(const std::filesystem::path& path);

/// Result of locating the vehicle against a route.
struct ZoneFix {
  std::size_t index = 0;
  /// Signed seconds until entry; negative once inside the zone.
  double time_to_entry = 0.0;
  /// Absolute end time for timed zones; unset for geofenced zones.
  std::optional<double> end_t;

  friend bool operator==(const ZoneFix&, const ZoneFix&) = default;
};

/// Nearest upcoming or active timed zone at session time `t`, or nullopt once
/// every zone has ended.
std::optional<ZoneFix> locate_zone(double t, const Route& route);

/// Tracks progress along a geofenced route. A zone is passed once the
/// vehicle has been inside its disk and left it; ETA is distance to the disk
/// edge over current speed, re-evaluated every call.
class GeofenceLocator {
 public:
  std::optional<ZoneFix> update(const GeoPoint& position, double speed, const Route& route);

 private:
  std::size_t next_ = 0;
  bool inside_ = false;
};

enum class Phase { idle, flashing, cooldown };
std::string_view to_string(Phase phase);

/// Scheduler snapshot. Pure value; step_scheduler returns the next one.
struct PromptState {
  Phase phase = Phase::idle;
  bool symbol_visible = false;

  std::size_t zone = 0;
  double activated_at = 0.0;
  std::optional<double> zone_end;
  double cooldown_until = 0.0;
  double last_t = -std::numeric_limits<double>::infinity();

  friend bool operator==(const PromptState&, const PromptState&) = default;
};

/// Advances the symbol state machine to time `t`.
///
/// idle -> flashing once time_to_entry <= 3 s (visible on activation, then a
/// 1 s on / 1 s off square wave); flashing -> cooldown at the zone end with
/// the symbol held on; cooldown -> idle 1 s later. Throws MonotonicityError if
/// `t` precedes the previous call.
PromptState step_scheduler(const PromptState& state, double t, const std::optional<ZoneFix>& fix);

}  // namespace simpath::prompts
