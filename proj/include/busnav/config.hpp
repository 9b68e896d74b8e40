// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>

#include "busnav/detection.hpp"
#include "busnav/exclusion.hpp"
#include "busnav/geometry.hpp"
#include "busnav/solver.hpp"

namespace busnav::config {

// Pipeline parameters. Defaults are the published table values where one
// exists; the rest are artifact defaults.
struct RunConfig {
  // NLOS exclusion
  double s_threshold = 10.0;
  double snr_threshold = 45.0;  // T, shared with the weighting function
  double theta_thres_deg = 5.0;
  double sector_tolerance_deg = 0.5;
  // elevation/SNR pre-filter
  double ele_thres_deg = 20.0;
  double snr_floor_dbhz = 28.0;
  // weighting
  double weight_a = 30.0;
  double weight_A = 32.0;
  double weight_F = 10.0;
  // clustering
  double r_search_m = 0.5;
  std::size_t min_cluster_size = 30;
  std::size_t max_cluster_size = 50000;
  std::optional<double> ground_z_min_m;  // optional pre-filter, disabled by default
  // classification / bus dimensions
  detect::BusClassifierConfig classifier;
  // frame alignment
  Vec3 lever_arm_m;       // antenna position in the sensor frame
  double heading_deg = 0.0;  // rotates sensor azimuths to true north
  std::optional<Vec3> initial_position_ecef;
  // report buckets
  std::array<double, 3> bucket_edges_m = {15.0, 30.0, 40.0};

  exclusion::ExclusionConfig exclusion_config() const {
    return {s_threshold, snr_threshold, theta_thres_deg, sector_tolerance_deg};
  }
  solver::WeightParams weight_params() const {
    return {snr_threshold, weight_a, weight_A, weight_F};
  }
};

// Merge a user JSON document over the defaults. Unknown keys and type
// mismatches are rejected (SchemaError). Null/empty input yields defaults.
RunConfig config_from_json(std::string_view text);
std::string config_to_json(const RunConfig& cfg);

}  // namespace busnav::config
