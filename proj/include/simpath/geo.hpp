// Copyright 2026 The SimPath Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace simpath {

inline constexpr double kEarthRadiusM = 6371008.8;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Great-circle (haversine) distance in meters.
double distance_m(const GeoPoint& a, const GeoPoint& b);

/// Meters spanned by one degree of latitude.
double meters_per_degree_lat();

/// Meters spanned by one degree of longitude at `lat_deg`.
double meters_per_degree_lon(double lat_deg);

/// Equirectangular offset (east, north meters) -> lat/lon around `origin`.
GeoPoint offset_to_geo(const GeoPoint& origin, double east_m, double north_m);

}  // namespace simpath
