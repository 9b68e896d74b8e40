// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace busnav {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Sensor-frame point: x forward/east, y left/north, z up (meters).
using Point3 = Vec3;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, const Vec3& a) { return a * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wrap an angle into [0, 360).
inline double wrap360(double a) {
  a = std::fmod(a, 360.0);
  if (a < 0.0) a += 360.0;
  return a;
}

// Minimal absolute separation between two azimuths, in [0, 180].
inline double az_separation_deg(double a, double b) {
  double d = std::fabs(wrap360(a) - wrap360(b));
  return d > 180.0 ? 360.0 - d : d;
}

// WGS-84 helpers for the ECEF side of the solver.
struct Geodetic {
  double lat_rad = 0.0;
  double lon_rad = 0.0;
  double height_m = 0.0;
};

Geodetic ecef_to_geodetic(const Vec3& ecef);
Vec3 geodetic_to_ecef(const Geodetic& g);

struct EnuBasis {
  Vec3 east, north, up;
};

// Local east/north/up unit vectors at an ECEF position.
EnuBasis enu_basis(const Vec3& ecef);

}  // namespace busnav
