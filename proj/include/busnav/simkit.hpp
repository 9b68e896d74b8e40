// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "busnav/geometry.hpp"
#include "busnav/pointcloud.hpp"
#include "busnav/skygeom.hpp"
#include "busnav/solver.hpp"

namespace busnav::simkit {

// Full occluder box in the sensor frame; yaw about z from +x.
struct BoxPose {
  Point3 center;
  double yaw_deg = 0.0;
  double len = 12.8, wid = 2.5, alt = 4.4;
};

struct ScenarioSatellite {
  std::string prn;
  solver::System system = solver::System::GPS;
  std::optional<sky::AzEl> azel;  // true-north azimuth at the receiver
  std::optional<Vec3> ecef;       // overrides azel placement when given
  double snr_dbhz = 48.0;
  double reflector_distance_m = 0.0;  // NLOS delay source when blocked
  double extra_bias_m = 0.0;          // fixed measurement bias, always applied
};

struct Scenario {
  Vec3 truth_ecef;
  double heading_deg = 0.0;
  Vec3 antenna_offset_m;  // antenna in the sensor frame
  std::vector<BoxPose> boxes;
  std::vector<ScenarioSatellite> satellites;
  double noise_sigma_m = 2.0;
  double nlos_gain = 1.0;  // delay = gain * reflector ground distance
  double gps_clock_bias_m = 0.0;
  double bds_clock_bias_m = 0.0;
  std::uint64_t seed = 0;
};

// Ray-cast a spherical grid from the sensor; rays hitting the box
// contribute their first intersection point.
pointcloud::PointCloud synth_bus_cloud(const BoxPose& box, const Point3& sensor,
                                       double min_el_deg, double max_el_deg,
                                       double angular_res_deg);

// Ground truth for blockage: slab-method ray/box intersection from the
// antenna toward (azimuth, elevation), sensor frame.
bool occlusion_oracle(const sky::AzEl& sat, const BoxPose& box, const Point3& antenna);

// One epoch of synthetic observations. Deterministic under
// (scenario.seed + epoch_index). Satellites without ECEF are placed at
// nominal MEO range along their az/el from the receiver truth.
solver::Epoch synth_epoch(const Scenario& s, std::uint64_t epoch_index);

Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& s);

}  // namespace busnav::simkit
