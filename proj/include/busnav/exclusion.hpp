// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "busnav/skygeom.hpp"

namespace busnav::exclusion {

struct ExclusionConfig {
  double s_threshold = 10.0;         // sky-units^2
  double snr_threshold = 45.0;       // dB-Hz
  double theta_thres_deg = 5.0;      // edge-beam guard
  double sector_tolerance_deg = 0.5; // azimuth sector slack
};

enum class Reason {
  HighSnrGuard,
  EdgeBeamGuard,
  OutsideSector,
  InsideTriangleVisible,
  Blocked,
};

const char* reason_name(Reason r);

struct ExclusionDecision {
  std::string prn;
  bool excluded = false;  // excluded <=> reason == Blocked
  Reason reason = Reason::OutsideSector;
  double delta_s = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

struct SatSky {
  std::string prn;
  sky::AzEl azel;
  double snr = 0.0;
};

// Excluded iff the SNR is at or below the threshold, both edge-beam angles
// clear theta_thres, the azimuth lies within the (minor-arc) bus sector,
// and dS exceeds s_threshold. Otherwise kept with the first failing guard
// as the reason.
ExclusionDecision is_blocked(const SatSky& sat, const sky::SkyBoundary& b,
                             const ExclusionConfig& cfg);

// A satellite survives iff kept against every boundary; the recorded
// decision is the first excluding boundary's, or the first boundary's when
// kept. With zero boundaries all satellites survive.
std::pair<std::vector<SatSky>, std::vector<ExclusionDecision>> exclude_nlos(
    const std::vector<SatSky>& sats, const std::vector<sky::SkyBoundary>& boundaries,
    const ExclusionConfig& cfg);

std::string decisions_to_json(const std::vector<ExclusionDecision>& decisions);

}  // namespace busnav::exclusion
