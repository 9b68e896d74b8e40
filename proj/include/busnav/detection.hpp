// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "busnav/geometry.hpp"
#include "busnav/pointcloud.hpp"

namespace busnav::detect {

// Yaw-only oriented bounding box (roll = pitch = 0). Yaw is the heading of
// the long axis measured from +x about z, normalized to [-90, 90) degrees,
// and d_len >= d_wid by construction.
struct ObbDescriptor {
  double xc = 0, yc = 0, zc = 0;
  double roll = 0, pitch = 0, yaw_deg = 0;
  double d_len = 0, d_wid = 0, d_alt = 0;
};

struct BusClassifierConfig {
  double len_min = 4.0, len_max = 13.5;
  double wid_min = 1.6, wid_max = 3.0;
  double alt_min = 2.2, alt_max = 4.8;
  // Real Hong Kong double-decker dimensions.
  double full_len = 12.8, full_wid = 2.5, full_alt = 4.4;
};

// Endpoints of the occluding top edge, sensor frame. E is the -long-axis
// end, F the +long-axis end; both lie at the extended box top height.
struct BusBoundary3D {
  Point3 E, F;
};

// Minimum-area yaw-only box over the cluster's xy projection; z extent is
// axis-aligned [z_min, z_max]. Throws DegenerateCluster for collinear or
// coincident clusters.
ObbDescriptor fit_bounding_box(const pointcloud::PointCloud& cloud,
                               const pointcloud::Cluster& cluster);

// criter1 && criter2 && criter3, all open intervals.
bool classify_bus(const ObbDescriptor& obb, const BusClassifierConfig& cfg);

// Grow each deficient dimension to the full bus size, away from the sensor:
// the sensor-side long face and near end planes stay fixed, height grows
// upward from z_min. Dimensions never shrink.
ObbDescriptor extend_to_full_bus(const ObbDescriptor& obb, const Point3& sensor_origin,
                                 const BusClassifierConfig& cfg);

// Top edge of the long face nearest the sensor (the conservative occluding
// silhouette edge).
BusBoundary3D extract_boundary(const ObbDescriptor& extended, const Point3& sensor_origin);

// cluster -> fit -> classify -> extend -> extract, in descending cluster
// size (ties by smallest member id). A failing cluster is skipped with a
// diagnostic, never aborts the scan.
std::vector<BusBoundary3D> detect_buses(const pointcloud::PointCloud& cloud,
                                        const BusClassifierConfig& cfg, double r_search,
                                        std::size_t min_size, std::size_t max_size,
                                        const Point3& sensor_origin,
                                        std::vector<std::string>* diagnostics = nullptr);

std::string boundaries_to_json(const std::vector<BusBoundary3D>& boundaries);
std::vector<BusBoundary3D> boundaries_from_json(std::string_view text);

}  // namespace busnav::detect
