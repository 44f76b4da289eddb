// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#include "simpath/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace simpath {

namespace {
constexpr double kRad = std::numbers::pi / 180.0;
}

double distance_m(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double meters_per_degree_lat() { return kEarthRadiusM * kRad; }

double meters_per_degree_lon(double lat_deg) {
  return kEarthRadiusM * kRad * std::cos(lat_deg * kRad);
}

GeoPoint offset_to_geo(const GeoPoint& origin, double east_m, double north_m) {
  return {origin.lat + north_m / meters_per_degree_lat(),
          origin.lon + east_m / meters_per_degree_lon(origin.lat)};
}

}  // namespace simpath
