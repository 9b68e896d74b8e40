// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "busnav/geometry.hpp"
#include "doctest.h"

using namespace busnav;

TEST_CASE("angle wrapping") {
  CHECK(wrap360(0.0) == doctest::Approx(0.0));
  CHECK(wrap360(-10.0) == doctest::Approx(350.0));
  CHECK(wrap360(725.0) == doctest::Approx(5.0));
  CHECK(az_separation_deg(352.0, 8.0) == doctest::Approx(16.0));
  CHECK(az_separation_deg(10.0, 350.0) == doctest::Approx(20.0));
  CHECK(az_separation_deg(0.0, 180.0) == doctest::Approx(180.0));
}

TEST_CASE("ecef/geodetic round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-1.4, 1.4), lon(-kPi, kPi), h(-100.0, 9000.0);
  for (int i = 0; i < 200; ++i) {
    Geodetic g{lat(rng), lon(rng), h(rng)};
    const Geodetic back = ecef_to_geodetic(geodetic_to_ecef(g));
    CHECK(back.lat_rad == doctest::Approx(g.lat_rad).epsilon(1e-10));
    CHECK(back.lon_rad == doctest::Approx(g.lon_rad).epsilon(1e-10));
    CHECK(back.height_m == doctest::Approx(g.height_m).epsilon(1e-6));
  }
}

TEST_CASE("enu basis is orthonormal and right-handed") {
  const Vec3 p = geodetic_to_ecef({deg2rad(22.3), deg2rad(114.17), 50.0});
  const EnuBasis b = enu_basis(p);
  CHECK(norm(b.east) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm(b.north) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm(b.up) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(dot(b.east, b.north)) < 1e-12);
  CHECK(std::fabs(dot(b.east, b.up)) < 1e-12);
  CHECK(norm(cross(b.east, b.north) - b.up) < 1e-12);
  // up points away from the geocenter
  CHECK(dot(b.up, normalized(p)) > 0.99);
}
