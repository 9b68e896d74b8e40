// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "busnav/detection.hpp"
#include "busnav/error.hpp"
#include "busnav/simkit.hpp"
#include "doctest.h"

using namespace busnav;
using detect::BusClassifierConfig;
using detect::ObbDescriptor;
using pointcloud::Cluster;
using pointcloud::PointCloud;

namespace {

Cluster whole(const PointCloud& c) {
  Cluster cl;
  cl.point_ids.resize(c.size());
  std::iota(cl.point_ids.begin(), cl.point_ids.end(), 0);
  return cl;
}

// Surface points of an axis-aligned box [len, wid, alt] centered at (0,0,alt/2),
// optionally yawed about z.
PointCloud box_surface(double len, double wid, double alt, double yaw_deg, double step = 0.25) {
  PointCloud c;
  const double cy = std::cos(deg2rad(yaw_deg)), sy = std::sin(deg2rad(yaw_deg));
  auto push = [&](double x, double y, double z) {
    c.points.push_back({cy * x - sy * y, sy * x + cy * y, z});
  };
  for (double x = -len / 2; x <= len / 2 + 1e-9; x += step)
    for (double z = 0.0; z <= alt + 1e-9; z += step) {
      push(x, -wid / 2, z);
      push(x, wid / 2, z);
    }
  for (double y = -wid / 2; y <= wid / 2 + 1e-9; y += step)
    for (double z = 0.0; z <= alt + 1e-9; z += step) {
      push(-len / 2, y, z);
      push(len / 2, y, z);
    }
  return c;
}

// Corners of an obb, world frame.
std::vector<Point3> corners(const ObbDescriptor& b) {
  const double c = std::cos(deg2rad(b.yaw_deg)), s = std::sin(deg2rad(b.yaw_deg));
  std::vector<Point3> out;
  for (int i : {-1, 1})
    for (int j : {-1, 1})
      for (int k : {-1, 1}) {
        const double lx = i * b.d_len / 2, ly = j * b.d_wid / 2, lz = k * b.d_alt / 2;
        out.push_back({b.xc + c * lx - s * ly, b.yc + s * lx + c * ly, b.zc + lz});
      }
  return out;
}

bool contains(const ObbDescriptor& b, const Point3& p, double tol) {
  const double c = std::cos(deg2rad(b.yaw_deg)), s = std::sin(deg2rad(b.yaw_deg));
  const double dx = p.x - b.xc, dy = p.y - b.yc, dz = p.z - b.zc;
  const double u = c * dx + s * dy, v = -s * dx + c * dy;
  return std::fabs(u) <= b.d_len / 2 + tol && std::fabs(v) <= b.d_wid / 2 + tol &&
         std::fabs(dz) <= b.d_alt / 2 + tol;
}

// Minimal bounding-rectangle area over a fixed rotation grid (independent of
// the golden-section search in the implementation).
double grid_min_area(const PointCloud& c, const Cluster& cl, double step_deg) {
  double best = 1e300;
  for (double ang = 0.0; ang < 180.0; ang += step_deg) {
    const double ca = std::cos(deg2rad(ang)), sa = std::sin(deg2rad(ang));
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (int id : cl.point_ids) {
      const auto& p = c.points[id];
      const double u = ca * p.x + sa * p.y, v = -sa * p.x + ca * p.y;
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    best = std::min(best, (umax - umin) * (vmax - vmin));
  }
  return best;
}

}  // namespace

TEST_CASE("obb fit on axis-aligned box surface") {
  const PointCloud c = box_surface(12.0, 2.5, 3.0, 0.0);
  const ObbDescriptor b = detect::fit_bounding_box(c, whole(c));
  CHECK(b.xc == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(b.yc == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(b.zc == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(std::fabs(b.yaw_deg) < 1e-6);
  // the yaw search stops at ~1e-6 deg, leaking up to len*sin(1e-6 deg) ~ 2e-7
  // into the width
  CHECK(b.d_len == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(b.d_wid == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(b.d_alt == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(b.roll == 0.0);
  CHECK(b.pitch == 0.0);
}

TEST_CASE("obb fit is rotation-equivariant") {
  const PointCloud c = box_surface(12.0, 2.5, 3.0, 30.0);
  const ObbDescriptor b = detect::fit_bounding_box(c, whole(c));
  CHECK(b.yaw_deg == doctest::Approx(30.0).epsilon(1e-6));
  CHECK(b.d_len == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(b.d_wid == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(b.d_alt == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("obb yaw normalization stays in [-90, 90)") {
  for (double yaw : {-170.0, -95.0, -90.0, -45.0, 0.0, 45.0, 89.0, 90.0, 135.0}) {
    const PointCloud c = box_surface(8.0, 2.0, 3.0, yaw);
    const ObbDescriptor b = detect::fit_bounding_box(c, whole(c));
    CHECK(b.yaw_deg >= -90.0);
    CHECK(b.yaw_deg < 90.0);
    CHECK(b.d_len >= b.d_wid);
  }
}

TEST_CASE("obb fit beats the rotating-grid oracle and contains its points") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double yaw = u01(rng) * 180.0 - 90.0;
    const double c0 = std::cos(deg2rad(yaw)), s0 = std::sin(deg2rad(yaw));
    PointCloud c;
    for (int i = 0; i < 500; ++i) {
      const double lx = (u01(rng) - 0.5) * 10.0, ly = (u01(rng) - 0.5) * 2.0,
                   lz = u01(rng) * 3.0;
      c.points.push_back({c0 * lx - s0 * ly + 3.0, s0 * lx + c0 * ly - 1.0, lz});
    }
    const Cluster cl = whole(c);
    const ObbDescriptor b = detect::fit_bounding_box(c, cl);
    CHECK(b.d_len * b.d_wid <= grid_min_area(c, cl, 0.5) + 1e-9);
    for (int id : cl.point_ids) CHECK(contains(b, c.points[id], 1e-9));
  }
}

TEST_CASE("obb fit rejects degenerate clusters") {
  PointCloud line;
  for (int i = 0; i < 10; ++i) line.points.push_back({i * 1.0, 0.0, 0.0});
  CHECK_THROWS_AS(detect::fit_bounding_box(line, whole(line)), Error);

  PointCloud two;
  two.points = {{0, 0, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(detect::fit_bounding_box(two, whole(two)), Error);
}

TEST_CASE("bus classification intervals") {
  const BusClassifierConfig cfg;
  auto mk = [](double l, double w, double a) {
    ObbDescriptor b;
    b.d_len = l;
    b.d_wid = w;
    b.d_alt = a;
    return b;
  };
  CHECK(detect::classify_bus(mk(12.8, 2.5, 4.4), cfg));
  CHECK_FALSE(detect::classify_bus(mk(4.5, 1.8, 1.5), cfg));  // car: below alt_min
  CHECK_FALSE(detect::classify_bus(mk(13.5, 2.5, 4.4), cfg)); // open interval at len_max
  CHECK_FALSE(detect::classify_bus(mk(4.0, 2.5, 4.4), cfg));  // open interval at len_min

  // monotone: widening intervals never flips true -> false
  BusClassifierConfig wide = cfg;
  wide.len_min -= 1;
  wide.len_max += 1;
  wide.wid_min -= 0.5;
  wide.wid_max += 0.5;
  wide.alt_min -= 0.5;
  wide.alt_max += 0.5;
  const auto b = mk(12.8, 2.5, 4.4);
  CHECK(detect::classify_bus(b, wide));
}

TEST_CASE("extension to full bus dimensions") {
  const BusClassifierConfig cfg;
  SUBCASE("already full size is unchanged") {
    ObbDescriptor b;
    b.yc = 6.0;
    b.zc = 2.2;
    b.d_len = 12.8;
    b.d_wid = 2.5;
    b.d_alt = 4.4;
    const ObbDescriptor e = detect::extend_to_full_bus(b, {0, 0, 0}, cfg);
    CHECK(e.xc == doctest::Approx(b.xc).epsilon(1e-12));
    CHECK(e.yc == doctest::Approx(b.yc).epsilon(1e-12));
    CHECK(e.zc == doctest::Approx(b.zc).epsilon(1e-12));
    CHECK(e.d_wid == doctest::Approx(2.5));
  }
  SUBCASE("width grows away from the sensor, near face fixed") {
    ObbDescriptor b;
    b.yc = 5.5;  // near face at y = +5 from a sensor at the origin
    b.zc = 2.2;
    b.d_len = 12.8;
    b.d_wid = 1.0;
    b.d_alt = 4.4;
    const ObbDescriptor e = detect::extend_to_full_bus(b, {0, 0, 0}, cfg);
    CHECK(e.d_wid == doctest::Approx(2.5));
    // near-face plane y = 5 preserved; growth entirely toward +y
    CHECK(e.yc - e.d_wid / 2 == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("height grows upward from z_min") {
    ObbDescriptor b;
    b.yc = 8.0;
    b.zc = 1.5;  // z_min = 0, scanned height 3.0
    b.d_len = 12.8;
    b.d_wid = 2.5;
    b.d_alt = 3.0;
    const ObbDescriptor e = detect::extend_to_full_bus(b, {0, 0, 0}, cfg);
    CHECK(e.d_alt == doctest::Approx(4.4));
    CHECK(e.zc - e.d_alt / 2 == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("extended box contains the scanned box") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      ObbDescriptor b;
      b.xc = (u01(rng) - 0.5) * 20.0;
      b.yc = 4.0 + u01(rng) * 20.0;
      b.yaw_deg = u01(rng) * 180.0 - 90.0;
      b.d_len = 5.0 + u01(rng) * 7.0;
      b.d_wid = 1.7 + u01(rng) * 0.8;
      b.d_alt = 2.5 + u01(rng) * 1.8;
      b.zc = b.d_alt / 2;
      const ObbDescriptor e = detect::extend_to_full_bus(b, {0, 0, 0}, cfg);
      for (const auto& p : corners(b)) CHECK(contains(e, p, 1e-9));
      // never lowers z_min
      CHECK(e.zc - e.d_alt / 2 <= b.zc - b.d_alt / 2 + 1e-9);
    }
  }
}

TEST_CASE("boundary extraction") {
  SUBCASE("published-dimension bus at y=6") {
    ObbDescriptor b;
    b.yc = 6.0;
    b.zc = 2.2;
    b.d_len = 12.8;
    b.d_wid = 2.5;
    b.d_alt = 4.4;
    const detect::BusBoundary3D e = detect::extract_boundary(b, {0, 0, 0});
    CHECK(e.E.x == doctest::Approx(-6.4).epsilon(1e-12));
    CHECK(e.E.y == doctest::Approx(4.75).epsilon(1e-12));
    CHECK(e.E.z == doctest::Approx(4.4).epsilon(1e-12));
    CHECK(e.F.x == doctest::Approx(6.4).epsilon(1e-12));
    CHECK(e.F.y == doctest::Approx(4.75).epsilon(1e-12));
    CHECK(e.F.z == doctest::Approx(4.4).epsilon(1e-12));
  }
  SUBCASE("yaw-90 boundary is the rotated image") {
    ObbDescriptor b;
    b.xc = 6.0;  // rotate the whole scene by 90 deg about z
    b.yc = 0.0;
    b.zc = 2.2;
    b.yaw_deg = -90.0;  // [-90, 90) normalization of a 90-deg yaw
    b.d_len = 12.8;
    b.d_wid = 2.5;
    b.d_alt = 4.4;
    const detect::BusBoundary3D e = detect::extract_boundary(b, {0, 0, 0});
    // near long face now at x = 4.75; endpoints at y = +-6.4
    CHECK(std::min(e.E.y, e.F.y) == doctest::Approx(-6.4).epsilon(1e-9));
    CHECK(std::max(e.E.y, e.F.y) == doctest::Approx(6.4).epsilon(1e-9));
    CHECK(e.E.x == doctest::Approx(4.75).epsilon(1e-9));
    CHECK(e.F.x == doctest::Approx(4.75).epsilon(1e-9));
  }
  SUBCASE("near edge subtends higher elevation than the far edge") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      ObbDescriptor b;
      b.xc = (u01(rng) - 0.5) * 10.0;
      b.yc = 6.0 + u01(rng) * 20.0;
      b.yaw_deg = u01(rng) * 180.0 - 90.0;
      b.d_len = 12.8;
      b.d_wid = 2.5;
      b.d_alt = 4.4;
      b.zc = 2.2;
      const detect::BusBoundary3D near = detect::extract_boundary(b, {0, 0, 0});
      // mirror the near face through the center to get the far edge
      const Point3 center{b.xc, b.yc, near.E.z};
      auto mirror = [&](const Point3& p) {
        return Point3{2 * b.xc - p.x, 2 * b.yc - p.y, p.z};
      };
      const Point3 farE = mirror(near.F), farF = mirror(near.E);
      for (double t = 0.0; t <= 1.0 + 1e-9; t += 0.1) {
        const Point3 pn = near.E + (near.F - near.E) * t;
        const Point3 pf = farE + (farF - farE) * t;
        const double eln = std::atan2(pn.z, std::hypot(pn.x, pn.y));
        const double elf = std::atan2(pf.z, std::hypot(pf.x, pf.y));
        CHECK(eln >= elf - 1e-12);
      }
    }
  }
}

TEST_CASE("detect_buses end to end on synthetic scans") {
  // Bus offset so two faces are visible (corner view) and the fitted box
  // recovers plausible width.
  simkit::BoxPose bus;
  bus.center = {6.0, 9.0, 2.2};
  bus.yaw_deg = 25.0;
  const Point3 sensor{0, 0, 0};
  const BusClassifierConfig cfg;

  SUBCASE("one bus yields one boundary") {
    const auto cloud = simkit::synth_bus_cloud(bus, sensor, -30.0, 10.0, 0.2);
    REQUIRE(cloud.size() > 100);
    const auto found = detect::detect_buses(cloud, cfg, 0.5, 30, 500000, sensor);
    CHECK(found.size() == 1);
  }
  SUBCASE("a car next to the bus is rejected") {
    simkit::BoxPose car;
    car.center = {-6.0, 7.0, 0.75};
    car.len = 4.5;
    car.wid = 1.8;
    car.alt = 1.5;
    auto cloud = simkit::synth_bus_cloud(bus, sensor, -30.0, 10.0, 0.2);
    const auto car_cloud = simkit::synth_bus_cloud(car, sensor, -30.0, 10.0, 0.2);
    cloud.points.insert(cloud.points.end(), car_cloud.points.begin(), car_cloud.points.end());
    const auto found = detect::detect_buses(cloud, cfg, 0.5, 30, 500000, sensor);
    CHECK(found.size() == 1);
  }
  SUBCASE("empty cloud yields no boundary") {
    CHECK(detect::detect_buses({}, cfg, 0.5, 30, 500000, sensor).empty());
  }
}

TEST_CASE("boundary json round trip") {
  std::vector<detect::BusBoundary3D> bs = {{{-6.4, 4.75, 4.4}, {6.4, 4.75, 4.4}}};
  const std::string j = detect::boundaries_to_json(bs);
  CHECK(j.find("\"boundaries\"") != std::string::npos);
  const auto back = detect::boundaries_from_json(j);
  REQUIRE(back.size() == 1);
  CHECK(back[0].E.x == doctest::Approx(-6.4));
  CHECK(back[0].F.z == doctest::Approx(4.4));
}
