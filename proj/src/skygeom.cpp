// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/skygeom.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "busnav/error.hpp"

namespace busnav::sky {

AzEl az_el_of_point(const Point3& p, const Point3& antenna, bool* clamped) {
  const Vec3 d = p - antenna;
  const double horiz = std::hypot(d.x, d.y);
  if (horiz < 1e-12 && std::fabs(d.z) < 1e-12)
    throw Error(ErrorCode::DegenerateDirection, "az_el_of_point: point coincides with antenna");
  AzEl out;
  out.az_deg = wrap360(rad2deg(std::atan2(d.x, d.y)));  // east over north
  double el = rad2deg(std::atan2(d.z, horiz));
  if (clamped) *clamped = el < 0.0;
  out.el_deg = std::max(el, 0.0);
  return out;
}

SkyPoint to_sky_point(const AzEl& a) {
  const double r = 90.0 - a.el_deg;
  return {r * std::sin(deg2rad(a.az_deg)), r * std::cos(deg2rad(a.az_deg))};
}

SkyBoundary project_boundary(const detect::BusBoundary3D& b, const Point3& antenna,
                             double heading_deg) {
  if (b.E.z <= antenna.z || b.F.z <= antenna.z)
    throw Error(ErrorCode::BelowHorizonBoundary,
                "project_boundary: boundary endpoint at or below antenna height");
  AzEl ae = az_el_of_point(b.E, antenna);
  AzEl af = az_el_of_point(b.F, antenna);
  ae.az_deg = wrap360(ae.az_deg + heading_deg);
  af.az_deg = wrap360(af.az_deg + heading_deg);
  SkyBoundary out;
  out.azE = ae.az_deg;
  out.azF = af.az_deg;
  out.elE = ae.el_deg;
  out.elF = af.el_deg;
  out.E = to_sky_point(ae);
  out.F = to_sky_point(af);
  return out;
}

SectorAngles sector_angles(const AzEl& sat, const SkyBoundary& b) {
  SectorAngles s;
  s.theta1 = az_separation_deg(sat.az_deg, b.azE);
  s.theta2 = az_separation_deg(sat.az_deg, b.azF);
  s.angle_eof = az_separation_deg(b.azE, b.azF);
  return s;
}

namespace {
double tri_area(const SkyPoint& a, const SkyPoint& b, const SkyPoint& c) {
  return 0.5 * std::fabs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}
}  // namespace

double delta_area(const SkyPoint& sat, const SkyBoundary& b) {
  const SkyPoint o{0.0, 0.0};
  return tri_area(sat, b.E, o) + tri_area(sat, b.F, o) + tri_area(sat, b.E, b.F) -
         tri_area(b.E, o, b.F);
}

namespace {

// Fixed-precision formatting keeps SVG output byte-stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v + 0.0);  // normalize -0
  return buf;
}

constexpr double kCx = 400.0, kCy = 400.0, kR0 = 350.0;  // elevation-0 ring

// Skyplot coordinates -> pixels (north up).
std::pair<double, double> to_px(const SkyPoint& p) {
  return {kCx + p.x / 90.0 * kR0, kCy - p.y / 90.0 * kR0};
}

}  // namespace

std::string render_skyplot(const std::vector<SkySat>& sats,
                           const std::vector<SkyBoundary>& boundaries) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
      << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

  // Elevation rings at 0/30/60 degrees and azimuth spokes.
  for (double el : {0.0, 30.0, 60.0}) {
    const double r = (90.0 - el) / 90.0 * kR0;
    svg << "<circle cx=\"" << num(kCx) << "\" cy=\"" << num(kCy) << "\" r=\"" << num(r)
        << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(kCx + 4.0) << "\" y=\"" << num(kCy - r - 4.0)
        << "\" font-size=\"12\" fill=\"#666\">" << static_cast<int>(el) << "&#176;</text>\n";
  }
  for (int az = 0; az < 360; az += 30) {
    const double a = deg2rad(static_cast<double>(az));
    const double x = kCx + kR0 * std::sin(a), y = kCy - kR0 * std::cos(a);
    svg << "<line x1=\"" << num(kCx) << "\" y1=\"" << num(kCy) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(y) << "\" stroke=\"#eee\" stroke-width=\"1\"/>\n";
  }
  const char* labels[4] = {"N", "E", "S", "W"};
  for (int i = 0; i < 4; ++i) {
    const double a = deg2rad(90.0 * i);
    const double x = kCx + (kR0 + 18.0) * std::sin(a), y = kCy - (kR0 + 18.0) * std::cos(a);
    svg << "<text x=\"" << num(x - 5.0) << "\" y=\"" << num(y + 5.0)
        << "\" font-size=\"16\" fill=\"#333\">" << labels[i] << "</text>\n";
  }

  for (const auto& b : boundaries) {
    const auto [ex, ey] = to_px(b.E);
    const auto [fx, fy] = to_px(b.F);
    // Dashed extended edge beams O->E and O->F out to the horizon ring.
    for (const SkyPoint* p : {&b.E, &b.F}) {
      const double len = std::hypot(p->x, p->y);
      if (len < 1e-9) continue;
      const SkyPoint tip{p->x / len * 90.0, p->y / len * 90.0};
      const auto [tx, ty] = to_px(tip);
      svg << "<line x1=\"" << num(kCx) << "\" y1=\"" << num(kCy) << "\" x2=\"" << num(tx)
          << "\" y2=\"" << num(ty)
          << "\" stroke=\"#e0c000\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    }
    svg << "<line x1=\"" << num(ex) << "\" y1=\"" << num(ey) << "\" x2=\"" << num(fx)
        << "\" y2=\"" << num(fy) << "\" stroke=\"#e0c000\" stroke-width=\"3\"/>\n";
  }

  for (const auto& s : sats) {
    const auto [x, y] = to_px(to_sky_point(s.azel));
    const char* color = s.decision == "excluded" ? "#d03030"
                        : s.decision == "filtered" ? "#909090"
                                                   : "#30a030";
    svg << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
        << "\" r=\"8\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << num(x + 10.0) << "\" y=\"" << num(y + 4.0)
        << "\" font-size=\"13\" fill=\"#222\">" << s.prn << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace busnav::sky
