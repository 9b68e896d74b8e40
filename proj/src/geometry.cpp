// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/geometry.hpp"

namespace busnav {

namespace {
constexpr double kWgs84A = 6378137.0;
constexpr double kWgs84F = 1.0 / 298.257223563;
constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);
}  // namespace

Geodetic ecef_to_geodetic(const Vec3& ecef) {
  const double p = std::hypot(ecef.x, ecef.y);
  Geodetic g;
  g.lon_rad = std::atan2(ecef.y, ecef.x);
  // Iterative latitude (converges in a handful of steps).
  double lat = std::atan2(ecef.z, p * (1.0 - kWgs84E2));
  double h = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double s = std::sin(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
    h = (p > 1.0) ? p / std::cos(lat) - n : std::fabs(ecef.z) - n * (1.0 - kWgs84E2);
    lat = std::atan2(ecef.z, p * (1.0 - kWgs84E2 * n / (n + h)));
  }
  g.lat_rad = lat;
  g.height_m = h;
  return g;
}

Vec3 geodetic_to_ecef(const Geodetic& g) {
  const double s = std::sin(g.lat_rad);
  const double c = std::cos(g.lat_rad);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * s * s);
  return {(n + g.height_m) * c * std::cos(g.lon_rad),
          (n + g.height_m) * c * std::sin(g.lon_rad),
          (n * (1.0 - kWgs84E2) + g.height_m) * s};
}

EnuBasis enu_basis(const Vec3& ecef) {
  const Geodetic g = ecef_to_geodetic(ecef);
  const double sl = std::sin(g.lat_rad), cl = std::cos(g.lat_rad);
  const double so = std::sin(g.lon_rad), co = std::cos(g.lon_rad);
  EnuBasis b;
  b.east = {-so, co, 0.0};
  b.north = {-sl * co, -sl * so, cl};
  b.up = {cl * co, cl * so, sl};
  return b;
}

}  // namespace busnav
