// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/exclusion.hpp"

#include "json.hpp"

namespace busnav::exclusion {

const char* reason_name(Reason r) {
  switch (r) {
    case Reason::HighSnrGuard: return "high_snr_guard";
    case Reason::EdgeBeamGuard: return "edge_beam_guard";
    case Reason::OutsideSector: return "outside_sector";
    case Reason::InsideTriangleVisible: return "inside_triangle_visible";
    case Reason::Blocked: return "blocked";
  }
  return "unknown";
}

ExclusionDecision is_blocked(const SatSky& sat, const sky::SkyBoundary& b,
                             const ExclusionConfig& cfg) {
  ExclusionDecision d;
  d.prn = sat.prn;
  const sky::SectorAngles ang = sky::sector_angles(sat.azel, b);
  d.theta1 = ang.theta1;
  d.theta2 = ang.theta2;
  d.delta_s = sky::delta_area(sky::to_sky_point(sat.azel), b);

  if (sat.snr > cfg.snr_threshold) {
    d.reason = Reason::HighSnrGuard;  // strong signals are trusted as LOS
    return d;
  }
  if (ang.theta1 < cfg.theta_thres_deg || ang.theta2 < cfg.theta_thres_deg) {
    d.reason = Reason::EdgeBeamGuard;
    return d;
  }
  if (ang.theta1 + ang.theta2 > ang.angle_eof + cfg.sector_tolerance_deg ||
      ang.angle_eof >= 180.0) {
    d.reason = Reason::OutsideSector;
    return d;
  }
  if (d.delta_s <= cfg.s_threshold) {
    d.reason = Reason::InsideTriangleVisible;
    return d;
  }
  d.excluded = true;
  d.reason = Reason::Blocked;
  return d;
}

std::pair<std::vector<SatSky>, std::vector<ExclusionDecision>> exclude_nlos(
    const std::vector<SatSky>& sats, const std::vector<sky::SkyBoundary>& boundaries,
    const ExclusionConfig& cfg) {
  std::vector<SatSky> survivors;
  std::vector<ExclusionDecision> decisions;
  for (const auto& sat : sats) {
    if (boundaries.empty()) {
      ExclusionDecision d;
      d.prn = sat.prn;
      d.reason = Reason::OutsideSector;
      decisions.push_back(d);
      survivors.push_back(sat);
      continue;
    }
    bool excluded = false;
    ExclusionDecision recorded;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      const ExclusionDecision d = is_blocked(sat, boundaries[i], cfg);
      if (i == 0) recorded = d;
      if (d.excluded) {
        recorded = d;
        excluded = true;
        break;
      }
    }
    decisions.push_back(recorded);
    if (!excluded) survivors.push_back(sat);
  }
  return {std::move(survivors), std::move(decisions)};
}

std::string decisions_to_json(const std::vector<ExclusionDecision>& decisions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : decisions) {
    arr.push_back({{"prn", d.prn},
                   {"verdict", d.excluded ? "excluded" : "kept"},
                   {"reason", reason_name(d.reason)},
                   {"dS", d.delta_s},
                   {"theta1", d.theta1},
                   {"theta2", d.theta2}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace busnav::exclusion
