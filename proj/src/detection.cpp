// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "busnav/error.hpp"
#include "json.hpp"

namespace busnav::detect {

namespace {

struct Extent {
  double lo1, hi1, lo2, hi2;  // along (cos yaw, sin yaw) and its normal
};

Extent extents_at(const std::vector<double>& xs, const std::vector<double>& ys,
                  double yaw_rad) {
  const double c = std::cos(yaw_rad), s = std::sin(yaw_rad);
  Extent e{1e300, -1e300, 1e300, -1e300};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = c * xs[i] + s * ys[i];
    const double v = -s * xs[i] + c * ys[i];
    e.lo1 = std::min(e.lo1, u);
    e.hi1 = std::max(e.hi1, u);
    e.lo2 = std::min(e.lo2, v);
    e.hi2 = std::max(e.hi2, v);
  }
  return e;
}

double area_at(const std::vector<double>& xs, const std::vector<double>& ys,
               double yaw_rad) {
  const Extent e = extents_at(xs, ys, yaw_rad);
  return (e.hi1 - e.lo1) * (e.hi2 - e.lo2);
}

// Long/width axes of a box. yaw from +x about z.
struct Axes {
  Vec3 u_len, u_wid;
};

Axes axes_of(const ObbDescriptor& obb) {
  const double c = std::cos(deg2rad(obb.yaw_deg)), s = std::sin(deg2rad(obb.yaw_deg));
  return {{c, s, 0.0}, {-s, c, 0.0}};
}

}  // namespace

ObbDescriptor fit_bounding_box(const pointcloud::PointCloud& cloud,
                               const pointcloud::Cluster& cluster) {
  if (cluster.size() < 3)
    throw Error(ErrorCode::DegenerateCluster, "fit_bounding_box: fewer than 3 points");
  std::vector<double> xs, ys;
  xs.reserve(cluster.size());
  ys.reserve(cluster.size());
  double zmin = 1e300, zmax = -1e300;
  for (int id : cluster.point_ids) {
    const Point3& p = cloud.points.at(static_cast<std::size_t>(id));
    xs.push_back(p.x);
    ys.push_back(p.y);
    zmin = std::min(zmin, p.z);
    zmax = std::max(zmax, p.z);
  }

  // Rectangle area has period 90 degrees; coarse grid then golden-section.
  double best_yaw = 0.0, best_area = std::numeric_limits<double>::infinity();
  for (double yaw = 0.0; yaw < 90.0; yaw += 0.5) {
    const double a = area_at(xs, ys, deg2rad(yaw));
    if (a < best_area) {
      best_area = a;
      best_yaw = yaw;
    }
  }
  {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_yaw - 0.5, hi = best_yaw + 0.5;
    double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
    double f1 = area_at(xs, ys, deg2rad(m1)), f2 = area_at(xs, ys, deg2rad(m2));
    while (hi - lo > 1e-6) {
      if (f1 <= f2) {
        hi = m2; m2 = m1; f2 = f1;
        m1 = hi - gr * (hi - lo);
        f1 = area_at(xs, ys, deg2rad(m1));
      } else {
        lo = m1; m1 = m2; f1 = f2;
        m2 = lo + gr * (hi - lo);
        f2 = area_at(xs, ys, deg2rad(m2));
      }
    }
    best_yaw = 0.5 * (lo + hi);
  }

  const double yaw_rad = deg2rad(best_yaw);
  const Extent e = extents_at(xs, ys, yaw_rad);
  const double w1 = e.hi1 - e.lo1, w2 = e.hi2 - e.lo2;
  const double cu = 0.5 * (e.lo1 + e.hi1), cv = 0.5 * (e.lo2 + e.hi2);
  const double c = std::cos(yaw_rad), s = std::sin(yaw_rad);

  ObbDescriptor obb;
  obb.xc = c * cu - s * cv;
  obb.yc = s * cu + c * cv;
  obb.zc = 0.5 * (zmin + zmax);
  if (w1 >= w2) {
    obb.yaw_deg = best_yaw;
    obb.d_len = w1;
    obb.d_wid = w2;
  } else {
    obb.yaw_deg = best_yaw + 90.0;
    obb.d_len = w2;
    obb.d_wid = w1;
  }
  // Normalize yaw to [-90, 90).
  while (obb.yaw_deg >= 90.0) obb.yaw_deg -= 180.0;
  while (obb.yaw_deg < -90.0) obb.yaw_deg += 180.0;
  obb.d_alt = zmax - zmin;
  // The yaw search converges to ~1e-6 deg, so a perfectly collinear cluster
  // can report a width up to len * sin(1e-6 deg) ~ 2e-7 m.
  if (obb.d_wid < 1e-6 || obb.d_len < 1e-6)
    throw Error(ErrorCode::DegenerateCluster,
                "fit_bounding_box: collinear or coincident cluster");
  return obb;
}

bool classify_bus(const ObbDescriptor& obb, const BusClassifierConfig& cfg) {
  return obb.d_len > cfg.len_min && obb.d_len < cfg.len_max &&
         obb.d_wid > cfg.wid_min && obb.d_wid < cfg.wid_max &&
         obb.d_alt > cfg.alt_min && obb.d_alt < cfg.alt_max;
}

ObbDescriptor extend_to_full_bus(const ObbDescriptor& obb, const Point3& sensor_origin,
                                 const BusClassifierConfig& cfg) {
  const Axes ax = axes_of(obb);
  ObbDescriptor out = obb;
  const Vec3 rel = sensor_origin - Vec3{obb.xc, obb.yc, obb.zc};

  // Length: keep the end plane nearer the sensor, grow away from it.
  {
    const double target = std::max(obb.d_len, cfg.full_len);
    const double sign = dot(rel, ax.u_len) >= 0.0 ? 1.0 : -1.0;
    const double shift = sign * (obb.d_len - target) * 0.5;
    out.xc += ax.u_len.x * shift;
    out.yc += ax.u_len.y * shift;
    out.d_len = target;
  }
  // Width: keep the sensor-side long-face plane, grow away from the sensor.
  {
    const double target = std::max(obb.d_wid, cfg.full_wid);
    const double sign = dot(rel, ax.u_wid) >= 0.0 ? 1.0 : -1.0;
    const double shift = sign * (obb.d_wid - target) * 0.5;
    out.xc += ax.u_wid.x * shift;
    out.yc += ax.u_wid.y * shift;
    out.d_wid = target;
  }
  // Height: preserve z_min, grow upward.
  {
    const double zmin = obb.zc - obb.d_alt * 0.5;
    const double target = std::max(obb.d_alt, cfg.full_alt);
    out.zc = zmin + target * 0.5;
    out.d_alt = target;
  }
  return out;
}

BusBoundary3D extract_boundary(const ObbDescriptor& extended, const Point3& sensor_origin) {
  const Axes ax = axes_of(extended);
  const Vec3 center{extended.xc, extended.yc, extended.zc};
  const double sign = dot(sensor_origin - center, ax.u_wid) >= 0.0 ? 1.0 : -1.0;
  const Vec3 face = center + ax.u_wid * (sign * extended.d_wid * 0.5);
  const double ztop = extended.zc + extended.d_alt * 0.5;
  BusBoundary3D b;
  b.E = face - ax.u_len * (extended.d_len * 0.5);
  b.F = face + ax.u_len * (extended.d_len * 0.5);
  b.E.z = ztop;
  b.F.z = ztop;
  return b;
}

std::vector<BusBoundary3D> detect_buses(const pointcloud::PointCloud& cloud,
                                        const BusClassifierConfig& cfg, double r_search,
                                        std::size_t min_size, std::size_t max_size,
                                        const Point3& sensor_origin,
                                        std::vector<std::string>* diagnostics) {
  std::vector<BusBoundary3D> boundaries;
  if (cloud.empty()) return boundaries;

  auto clusters = pointcloud::euclidean_cluster(cloud, r_search, min_size, max_size);
  std::sort(clusters.begin(), clusters.end(),
            [](const pointcloud::Cluster& a, const pointcloud::Cluster& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.point_ids.front() < b.point_ids.front();
            });

  for (const auto& cluster : clusters) {
    try {
      const ObbDescriptor obb = fit_bounding_box(cloud, cluster);
      if (!classify_bus(obb, cfg)) continue;
      const ObbDescriptor full = extend_to_full_bus(obb, sensor_origin, cfg);
      boundaries.push_back(extract_boundary(full, sensor_origin));
    } catch (const Error& e) {
      if (diagnostics)
        diagnostics->push_back("cluster of " + std::to_string(cluster.size()) +
                               " points skipped: " + e.what());
    }
  }
  return boundaries;
}

std::string boundaries_to_json(const std::vector<BusBoundary3D>& boundaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : boundaries) {
    arr.push_back({{"E", {b.E.x, b.E.y, b.E.z}}, {"F", {b.F.x, b.F.y, b.F.z}}});
  }
  return nlohmann::json{{"boundaries", arr}}.dump(2) + "\n";
}

std::vector<BusBoundary3D> boundaries_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("boundaries json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("boundaries") || !j["boundaries"].is_array())
    throw Error(ErrorCode::SchemaError, "boundaries json: expected {\"boundaries\": [...]}");
  std::vector<BusBoundary3D> out;
  for (const auto& e : j["boundaries"]) {
    if (!e.is_object() || !e.contains("E") || !e.contains("F") ||
        !e["E"].is_array() || e["E"].size() != 3 || !e["F"].is_array() || e["F"].size() != 3)
      throw Error(ErrorCode::SchemaError, "boundaries json: each entry needs E and F 3-vectors");
    BusBoundary3D b;
    b.E = {e["E"][0].get<double>(), e["E"][1].get<double>(), e["E"][2].get<double>()};
    b.F = {e["F"][0].get<double>(), e["F"][1].get<double>(), e["F"][2].get<double>()};
    out.push_back(b);
  }
  return out;
}

}  // namespace busnav::detect
