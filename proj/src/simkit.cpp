// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/simkit.hpp"

#include <cmath>
#include <random>
#include <set>

#include "busnav/error.hpp"
#include "json.hpp"

namespace busnav::simkit {

namespace {

constexpr double kGpsRange = 20200e3;
constexpr double kBdsRange = 21500e3;

// Sensor-frame unit direction for an azimuth (clockwise from north = +y)
// and elevation.
Vec3 direction_of(const sky::AzEl& a) {
  const double az = deg2rad(a.az_deg), el = deg2rad(a.el_deg);
  return {std::sin(az) * std::cos(el), std::cos(az) * std::cos(el), std::sin(el)};
}

struct BoxFrame {
  Vec3 u_len, u_wid;
  Vec3 half;
};

BoxFrame frame_of(const BoxPose& box) {
  const double c = std::cos(deg2rad(box.yaw_deg)), s = std::sin(deg2rad(box.yaw_deg));
  return {{c, s, 0.0}, {-s, c, 0.0}, {box.len * 0.5, box.wid * 0.5, box.alt * 0.5}};
}

// Slab-method ray/box intersection. Returns entry parameter (>= 0) or
// nullopt when the ray misses.
std::optional<double> ray_box_entry(const Point3& origin, const Vec3& dir, const BoxPose& box) {
  const BoxFrame f = frame_of(box);
  const Vec3 rel = origin - box.center;
  const double p[3] = {dot(rel, f.u_len), dot(rel, f.u_wid), rel.z};
  const double d[3] = {dot(dir, f.u_len), dot(dir, f.u_wid), dir.z};
  const double h[3] = {f.half.x, f.half.y, f.half.z};

  double tmin = 0.0, tmax = 1e300;
  for (int a = 0; a < 3; ++a) {
    if (std::fabs(d[a]) < 1e-15) {
      if (p[a] < -h[a] - 1e-12 || p[a] > h[a] + 1e-12) return std::nullopt;
      continue;
    }
    double t1 = (-h[a] - p[a]) / d[a];
    double t2 = (h[a] - p[a]) / d[a];
    if (t1 > t2) std::swap(t1, t2);
    tmin = std::max(tmin, t1);
    tmax = std::min(tmax, t2);
    if (tmin > tmax + 1e-12) return std::nullopt;
  }
  return tmin;
}

}  // namespace

pointcloud::PointCloud synth_bus_cloud(const BoxPose& box, const Point3& sensor,
                                       double min_el_deg, double max_el_deg,
                                       double angular_res_deg) {
  if (angular_res_deg <= 0.0)
    throw Error(ErrorCode::InvalidParameter, "synth_bus_cloud: angular resolution must be > 0");
  pointcloud::PointCloud cloud;
  for (double el = min_el_deg; el <= max_el_deg + 1e-9; el += angular_res_deg) {
    for (double az = 0.0; az < 360.0 - 1e-9; az += angular_res_deg) {
      const Vec3 dir = direction_of({az, el});
      const auto t = ray_box_entry(sensor, dir, box);
      if (t && *t > 1e-9) cloud.points.push_back(sensor + dir * *t);
    }
  }
  return cloud;
}

bool occlusion_oracle(const sky::AzEl& sat, const BoxPose& box, const Point3& antenna) {
  return ray_box_entry(antenna, direction_of(sat), box).has_value();
}

solver::Epoch synth_epoch(const Scenario& s, std::uint64_t epoch_index) {
  if (s.satellites.size() < 4)
    throw Error(ErrorCode::InvalidParameter, "scenario: at least 4 satellites required");
  std::mt19937_64 rng(s.seed + epoch_index);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const EnuBasis basis = enu_basis(s.truth_ecef);
  solver::Epoch epoch;
  epoch.time = static_cast<double>(epoch_index);
  epoch.truth_ecef = s.truth_ecef;

  for (const auto& sat : s.satellites) {
    solver::SatelliteObservation o;
    o.prn = sat.prn;
    o.system = sat.system;
    o.snr_dbhz = sat.snr_dbhz;

    sky::AzEl azel;
    if (sat.ecef) {
      o.sat_pos = *sat.ecef;
      azel = solver::az_el_from_ecef(o.sat_pos, s.truth_ecef);
    } else {
      if (!sat.azel)
        throw Error(ErrorCode::SchemaError, "scenario satellite " + sat.prn +
                                                ": needs azel or ecef");
      azel = *sat.azel;
      const Vec3 d = direction_of(azel);  // east/north/up components
      const double range = sat.system == solver::System::GPS ? kGpsRange : kBdsRange;
      o.sat_pos = s.truth_ecef + (basis.east * d.x + basis.north * d.y + basis.up * d.z) * range;
    }
    o.azimuth_deg = azel.az_deg;
    o.elevation_deg = azel.el_deg;

    // Blockage is evaluated in the sensor frame.
    const sky::AzEl sensor_azel{wrap360(azel.az_deg - s.heading_deg), azel.el_deg};
    bool blocked = false;
    for (const auto& box : s.boxes)
      if (occlusion_oracle(sensor_azel, box, s.antenna_offset_m)) {
        blocked = true;
        break;
      }

    const double clock =
        sat.system == solver::System::GPS ? s.gps_clock_bias_m : s.bds_clock_bias_m;
    double rho = solver::modeled_range(o.sat_pos, s.truth_ecef) + clock + sat.extra_bias_m;
    if (blocked) rho += s.nlos_gain * sat.reflector_distance_m;
    if (s.noise_sigma_m > 0.0) rho += s.noise_sigma_m * gauss(rng);
    o.pseudorange_m = rho;
    epoch.observations.push_back(std::move(o));
  }
  return epoch;
}

namespace {

using nlohmann::json;

Vec3 vec3_of(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::SchemaError, "scenario: '" + key + "' must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void check_keys(const json& obj, const std::set<std::string>& known, const std::string& scope) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw Error(ErrorCode::SchemaError, "scenario: unknown key '" + scope + it.key() + "'");
}

}  // namespace

Scenario scenario_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scenario json: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "scenario: expected a JSON object");
  static const std::set<std::string> known = {
      "truth_ecef", "heading_deg", "antenna_offset_m", "boxes", "satellites",
      "noise_sigma_m", "nlos_gain", "gps_clock_bias_m", "bds_clock_bias_m", "seed"};
  check_keys(j, known, "");

  Scenario s;
  if (!j.contains("truth_ecef"))
    throw Error(ErrorCode::SchemaError, "scenario: missing truth_ecef");
  s.truth_ecef = vec3_of(j["truth_ecef"], "truth_ecef");
  s.heading_deg = j.value("heading_deg", 0.0);
  if (j.contains("antenna_offset_m"))
    s.antenna_offset_m = vec3_of(j["antenna_offset_m"], "antenna_offset_m");
  s.noise_sigma_m = j.value("noise_sigma_m", 2.0);
  s.nlos_gain = j.value("nlos_gain", 1.0);
  s.gps_clock_bias_m = j.value("gps_clock_bias_m", 0.0);
  s.bds_clock_bias_m = j.value("bds_clock_bias_m", 0.0);
  s.seed = j.value("seed", 0ull);
  if (s.noise_sigma_m < 0.0 || s.nlos_gain < 0.0)
    throw Error(ErrorCode::SchemaError, "scenario: noise_sigma_m and nlos_gain must be >= 0");

  if (j.contains("boxes")) {
    if (!j["boxes"].is_array()) throw Error(ErrorCode::SchemaError, "scenario: boxes must be an array");
    for (const auto& b : j["boxes"]) {
      static const std::set<std::string> bknown = {"center", "yaw_deg", "dims"};
      check_keys(b, bknown, "boxes.");
      BoxPose box;
      box.center = vec3_of(b.at("center"), "boxes.center");
      box.yaw_deg = b.value("yaw_deg", 0.0);
      if (b.contains("dims")) {
        const Vec3 d = vec3_of(b["dims"], "boxes.dims");
        box.len = d.x;
        box.wid = d.y;
        box.alt = d.z;
      }
      if (box.len <= 0 || box.wid <= 0 || box.alt <= 0)
        throw Error(ErrorCode::SchemaError, "scenario: box dims must be positive");
      s.boxes.push_back(box);
    }
  }

  if (!j.contains("satellites") || !j["satellites"].is_array())
    throw Error(ErrorCode::SchemaError, "scenario: missing satellites array");
  for (const auto& sat : j["satellites"]) {
    static const std::set<std::string> sknown = {"prn", "system", "azimuth_deg", "elevation_deg",
                                                 "sat_pos_ecef", "snr_dbhz",
                                                 "reflector_distance_m", "extra_bias_m"};
    check_keys(sat, sknown, "satellites.");
    ScenarioSatellite sc;
    sc.prn = sat.at("prn").get<std::string>();
    sc.system = solver::system_from_name(sat.value("system", "GPS"));
    if (sat.contains("sat_pos_ecef")) {
      sc.ecef = vec3_of(sat["sat_pos_ecef"], "satellites.sat_pos_ecef");
    } else {
      if (!sat.contains("azimuth_deg") || !sat.contains("elevation_deg"))
        throw Error(ErrorCode::SchemaError,
                    "scenario satellite " + sc.prn + ": needs azimuth_deg/elevation_deg or sat_pos_ecef");
      sc.azel = sky::AzEl{sat["azimuth_deg"].get<double>(), sat["elevation_deg"].get<double>()};
    }
    sc.snr_dbhz = sat.value("snr_dbhz", 48.0);
    sc.reflector_distance_m = sat.value("reflector_distance_m", 0.0);
    sc.extra_bias_m = sat.value("extra_bias_m", 0.0);
    s.satellites.push_back(std::move(sc));
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json boxes = json::array();
  for (const auto& b : s.boxes)
    boxes.push_back({{"center", {b.center.x, b.center.y, b.center.z}},
                     {"yaw_deg", b.yaw_deg},
                     {"dims", {b.len, b.wid, b.alt}}});
  json sats = json::array();
  for (const auto& sat : s.satellites) {
    json o = {{"prn", sat.prn},
              {"system", solver::system_name(sat.system)},
              {"snr_dbhz", sat.snr_dbhz},
              {"reflector_distance_m", sat.reflector_distance_m},
              {"extra_bias_m", sat.extra_bias_m}};
    if (sat.ecef) o["sat_pos_ecef"] = {sat.ecef->x, sat.ecef->y, sat.ecef->z};
    if (sat.azel) {
      o["azimuth_deg"] = sat.azel->az_deg;
      o["elevation_deg"] = sat.azel->el_deg;
    }
    sats.push_back(std::move(o));
  }
  json j = {{"truth_ecef", {s.truth_ecef.x, s.truth_ecef.y, s.truth_ecef.z}},
            {"heading_deg", s.heading_deg},
            {"antenna_offset_m", {s.antenna_offset_m.x, s.antenna_offset_m.y, s.antenna_offset_m.z}},
            {"boxes", std::move(boxes)},
            {"satellites", std::move(sats)},
            {"noise_sigma_m", s.noise_sigma_m},
            {"nlos_gain", s.nlos_gain},
            {"gps_clock_bias_m", s.gps_clock_bias_m},
            {"bds_clock_bias_m", s.bds_clock_bias_m},
            {"seed", s.seed}};
  return j.dump(2) + "\n";
}

}  // namespace busnav::simkit
