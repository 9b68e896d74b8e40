// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "busnav/detection.hpp"
#include "busnav/geometry.hpp"

namespace busnav::sky {

// Azimuth clockwise from north in [0, 360); elevation in [0, 90]. The
// sensor frame's +y axis is north and +x east.
struct AzEl {
  double az_deg = 0.0;
  double el_deg = 0.0;
};

// Skyplot coordinates: zenith at the origin, radius = 90 - elevation.
struct SkyPoint {
  double x = 0.0;
  double y = 0.0;
};

struct SkyBoundary {
  SkyPoint E, F;
  double azE = 0, azF = 0, elE = 0, elF = 0;
};

// Direction of p as seen from the antenna. Elevation below the horizon is
// clamped to 0 (optionally reported via `clamped`). Throws
// DegenerateDirection when p coincides with the antenna.
AzEl az_el_of_point(const Point3& p, const Point3& antenna, bool* clamped = nullptr);

// x = (90 - el) sin az, y = (90 - el) cos az.
SkyPoint to_sky_point(const AzEl& a);

// Project the 3D boundary into the skyplot. `heading_deg` rotates
// sensor-frame azimuths into true-north azimuths. Throws
// BelowHorizonBoundary unless both endpoints are above the antenna.
SkyBoundary project_boundary(const detect::BusBoundary3D& b, const Point3& antenna,
                             double heading_deg = 0.0);

// theta1/theta2: minimal azimuth separation of the satellite from E and F;
// angle_eof: same between E and F. All in [0, 180].
struct SectorAngles {
  double theta1 = 0, theta2 = 0, angle_eof = 0;
};
SectorAngles sector_angles(const AzEl& sat, const SkyBoundary& b);

// dS = area(S,E,O) + area(S,F,O) + area(S,E,F) - area(E,O,F), O = zenith.
// Zero (within fp slack) iff S lies inside or on triangle EOF.
double delta_area(const SkyPoint& sat, const SkyBoundary& b);

struct SkySat {
  std::string prn;
  AzEl azel;
  double snr = 0.0;
  std::string decision;  // "kept" | "excluded" | "filtered"
};

// Deterministic SVG skyplot, 800x800 px. Green = kept, red = excluded,
// gray = filtered, yellow boundary with dashed edge beams O->E, O->F.
std::string render_skyplot(const std::vector<SkySat>& sats,
                           const std::vector<SkyBoundary>& boundaries);

}  // namespace busnav::sky
