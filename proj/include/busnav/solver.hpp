// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "busnav/geometry.hpp"
#include "busnav/skygeom.hpp"

namespace busnav::solver {

enum class System { GPS, BDS };

const char* system_name(System s);
System system_from_name(const std::string& name);

struct SatelliteObservation {
  std::string prn;
  System system = System::GPS;
  Vec3 sat_pos;            // ECEF meters
  double pseudorange_m = 0.0;
  double snr_dbhz = 0.0;
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
};

struct Epoch {
  double time = 0.0;
  std::vector<SatelliteObservation> observations;
  std::optional<Vec3> truth_ecef;
};

// Eq.-8 style SNR/elevation weighting parameters.
struct WeightParams {
  double T = 45.0;  // SNR threshold, dB-Hz
  double a = 30.0;
  double A = 32.0;
  double F = 10.0;
};

struct PositionSolution {
  Vec3 position;  // ECEF meters
  std::map<System, double> clock_bias;
  double hdop = 0.0;
  std::vector<std::string> used_prns, filtered_prns, excluded_prns;
  int iterations = 0;
  bool converged = true;
  std::optional<double> error_3d;
};

struct ErrorStats {
  double mean_error = 0.0;
  double stddev = 0.0;  // population std
  double pct_lt_a = 0.0, pct_lt_b = 0.0, pct_gt_c = 0.0;
  double availability = 0.0;  // percent of epochs solved
};

// kept = {elevation >= ele_thres and snr >= snr_floor}; filtered = rest.
std::pair<std::vector<SatelliteObservation>, std::vector<SatelliteObservation>>
elevation_snr_filter(const std::vector<SatelliteObservation>& obs, double ele_thres,
                     double snr_floor);

// Variance-style factor: 1 for snr >= T, grows as snr drops below T and as
// elevation falls. The WLS weight is the reciprocal of this factor.
double snr_elevation_weight(double elevation_deg, double snr, const WeightParams& p);

// Earth-rotation (Sagnac) corrected satellite position for the signal
// travel time from `sat` to a receiver at `rx`.
Vec3 sagnac_corrected(const Vec3& sat, const Vec3& rx);

// Pseudorange as the solver models it (Sagnac-corrected geometric range,
// excluding clock terms). Shared with the simulator so zero-noise data is
// exactly consistent.
double modeled_range(const Vec3& sat, const Vec3& rx);

sky::AzEl az_el_from_ecef(const Vec3& sat, const Vec3& rx);

// Iterated Gauss-Newton pseudorange solution with one clock column per
// constellation present. Stops at step norm < 1e-4 m or 10 iterations
// (non-convergence is flagged, not thrown).
PositionSolution solve_ls(const std::vector<SatelliteObservation>& obs, const Vec3& initial);
PositionSolution solve_wls(const std::vector<SatelliteObservation>& obs,
                           const std::vector<double>& weights, const Vec3& initial);

// Unweighted HDOP in local ENU at x.
double hdop(const std::vector<SatelliteObservation>& used, const Vec3& x);

// 3D-error statistics over solved epochs; `total_epochs` feeds availability.
// Bucket edges default to the <15 / <30 / >40 m report buckets.
ErrorStats error_stats(const std::vector<PositionSolution>& solutions, const Vec3& truth,
                       std::size_t total_epochs,
                       const std::array<double, 3>& edges = {15.0, 30.0, 40.0});

// Same aggregation over precomputed per-epoch 3D errors.
ErrorStats stats_from_errors(const std::vector<double>& errors, std::size_t total_epochs,
                             const std::array<double, 3>& edges = {15.0, 30.0, 40.0});

// JSON ingestion/serialization for epoch streams and solutions.
std::vector<Epoch> epochs_from_json(std::string_view text);
std::string epochs_to_json(const std::vector<Epoch>& epochs);

}  // namespace busnav::solver
