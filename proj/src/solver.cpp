// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "busnav/error.hpp"
#include "json.hpp"

namespace busnav::solver {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kEarthRotRate = 7.2921151467e-5;  // rad/s
constexpr double kStepTol = 1e-4;
constexpr int kMaxIter = 10;
}  // namespace

const char* system_name(System s) { return s == System::GPS ? "GPS" : "BDS"; }

System system_from_name(const std::string& name) {
  if (name == "GPS") return System::GPS;
  if (name == "BDS") return System::BDS;
  throw Error(ErrorCode::SchemaError, "unknown system '" + name + "' (expected GPS or BDS)");
}

std::pair<std::vector<SatelliteObservation>, std::vector<SatelliteObservation>>
elevation_snr_filter(const std::vector<SatelliteObservation>& obs, double ele_thres,
                     double snr_floor) {
  std::vector<SatelliteObservation> kept, filtered;
  for (const auto& o : obs) {
    if (!o.elevation_deg)
      throw Error(ErrorCode::InvalidParameter, "elevation_snr_filter: elevation missing for " + o.prn);
    if (*o.elevation_deg >= ele_thres && o.snr_dbhz >= snr_floor)
      kept.push_back(o);
    else
      filtered.push_back(o);
  }
  return {std::move(kept), std::move(filtered)};
}

double snr_elevation_weight(double elevation_deg, double snr, const WeightParams& p) {
  if (elevation_deg <= 0.0)
    throw Error(ErrorCode::InvalidElevation, "snr_elevation_weight: elevation must be > 0");
  if (snr >= p.T) return 1.0;
  const double s = std::sin(deg2rad(elevation_deg));
  const double pow_term = std::pow(10.0, -(snr - p.T) / p.a);
  const double denom = std::pow(10.0, -(p.F - p.T) / p.a);
  const double bracket = (p.A / denom - 1.0) * (snr - p.T) / (p.F - p.T) + 1.0;
  return (1.0 / (s * s)) * pow_term * bracket;
}

Vec3 sagnac_corrected(const Vec3& sat, const Vec3& rx) {
  const double tau = norm(sat - rx) / kSpeedOfLight;
  const double theta = kEarthRotRate * tau;
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * sat.x + s * sat.y, -s * sat.x + c * sat.y, sat.z};
}

double modeled_range(const Vec3& sat, const Vec3& rx) {
  return norm(sagnac_corrected(sat, rx) - rx);
}

sky::AzEl az_el_from_ecef(const Vec3& sat, const Vec3& rx) {
  const EnuBasis b = enu_basis(rx);
  const Vec3 d = sat - rx;
  const double e = dot(d, b.east), n = dot(d, b.north), u = dot(d, b.up);
  sky::AzEl out;
  out.az_deg = wrap360(rad2deg(std::atan2(e, n)));
  out.el_deg = std::max(rad2deg(std::atan2(u, std::hypot(e, n))), 0.0);
  return out;
}

namespace {

std::vector<System> systems_present(const std::vector<SatelliteObservation>& obs) {
  std::set<System> s;
  for (const auto& o : obs) s.insert(o.system);
  return {s.begin(), s.end()};  // GPS sorts before BDS
}

PositionSolution gauss_newton(const std::vector<SatelliteObservation>& obs,
                              const std::vector<double>& weights, const Vec3& initial) {
  const auto systems = systems_present(obs);
  const int nsys = static_cast<int>(systems.size());
  const int dim = 3 + nsys;
  const int m = static_cast<int>(obs.size());
  if (m < dim)
    throw Error(ErrorCode::SingularGeometry,
                "solve: " + std::to_string(m) + " observations for " + std::to_string(dim) +
                    " unknowns");
  for (double w : weights)
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidWeight, "solve: weights must be positive");

  auto clock_col = [&](System s) {
    for (int i = 0; i < nsys; ++i)
      if (systems[i] == s) return 3 + i;
    return -1;
  };

  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  state(0) = initial.x;
  state(1) = initial.y;
  state(2) = initial.z;

  // Cold start: bootstrap the first iteration on the highest-elevation
  // subset when elevations are known, to tame the linearization.
  std::vector<int> boot;
  if (norm(initial) < 1.0) {
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    if (std::all_of(obs.begin(), obs.end(),
                    [](const SatelliteObservation& o) { return o.elevation_deg.has_value(); })) {
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return *obs[a].elevation_deg > *obs[b].elevation_deg;
      });
    }
    boot.assign(order.begin(), order.begin() + dim);
  }

  PositionSolution sol;
  Eigen::MatrixXd G(m, dim);
  Eigen::VectorXd r(m);
  bool converged = false;
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    const Vec3 x{state(0), state(1), state(2)};
    const bool bootstrap = iter == 0 && !boot.empty();
    const std::vector<int>* rows_sel = bootstrap ? &boot : nullptr;
    const int rows = bootstrap ? dim : m;
    G.resize(rows, dim);
    r.resize(rows);
    Eigen::VectorXd w(rows);
    for (int k = 0; k < rows; ++k) {
      const int i = rows_sel ? (*rows_sel)[k] : k;
      const auto& o = obs[i];
      const Vec3 sat = sagnac_corrected(o.sat_pos, x);
      const Vec3 d = sat - x;
      const double rho_geo = norm(d);
      if (rho_geo < 1.0)
        throw Error(ErrorCode::SingularGeometry, "solve: receiver coincides with satellite");
      const Vec3 u = d * (1.0 / rho_geo);
      G(k, 0) = -u.x;
      G(k, 1) = -u.y;
      G(k, 2) = -u.z;
      for (int c = 3; c < dim; ++c) G(k, c) = 0.0;
      G(k, clock_col(o.system)) = 1.0;
      r(k) = o.pseudorange_m - rho_geo - state(clock_col(o.system));
      w(k) = weights.empty() ? 1.0 : weights[i];
    }
    const Eigen::MatrixXd gtw = G.transpose() * w.asDiagonal();
    const Eigen::MatrixXd ntm = gtw * G;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ntm);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible())
      throw Error(ErrorCode::SingularGeometry, "solve: rank-deficient geometry");
    const Eigen::VectorXd step = lu.solve(gtw * r);
    state += step;
    if (step.norm() < kStepTol && !bootstrap) {
      converged = true;
      ++iter;
      break;
    }
  }

  sol.position = {state(0), state(1), state(2)};
  for (int i = 0; i < nsys; ++i) sol.clock_bias[systems[i]] = state(3 + i);
  sol.iterations = iter;
  sol.converged = converged;
  for (const auto& o : obs) sol.used_prns.push_back(o.prn);
  sol.hdop = hdop(obs, sol.position);
  return sol;
}

}  // namespace

PositionSolution solve_ls(const std::vector<SatelliteObservation>& obs, const Vec3& initial) {
  return gauss_newton(obs, {}, initial);
}

PositionSolution solve_wls(const std::vector<SatelliteObservation>& obs,
                           const std::vector<double>& weights, const Vec3& initial) {
  if (weights.size() != obs.size())
    throw Error(ErrorCode::InvalidParameter, "solve_wls: weights/observations size mismatch");
  return gauss_newton(obs, weights, initial);
}

double hdop(const std::vector<SatelliteObservation>& used, const Vec3& x) {
  const auto systems = systems_present(used);
  const int nsys = static_cast<int>(systems.size());
  const int dim = 3 + nsys;
  const int m = static_cast<int>(used.size());
  if (m < dim) throw Error(ErrorCode::SingularGeometry, "hdop: not enough satellites");

  Eigen::MatrixXd G(m, dim);
  for (int i = 0; i < m; ++i) {
    const Vec3 d = sagnac_corrected(used[i].sat_pos, x) - x;
    const Vec3 u = d * (1.0 / norm(d));
    G(i, 0) = -u.x;
    G(i, 1) = -u.y;
    G(i, 2) = -u.z;
    for (int c = 3; c < dim; ++c) G(i, c) = 0.0;
    for (int s = 0; s < nsys; ++s)
      if (systems[s] == used[i].system) G(i, 3 + s) = 1.0;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G.transpose() * G);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularGeometry, "hdop: singular geometry");
  const Eigen::MatrixXd q = lu.inverse();

  const EnuBasis b = enu_basis(x);
  Eigen::Matrix3d rot;
  rot << b.east.x, b.east.y, b.east.z, b.north.x, b.north.y, b.north.z, b.up.x, b.up.y, b.up.z;
  const Eigen::Matrix3d q_enu = rot * q.topLeftCorner<3, 3>() * rot.transpose();
  return std::sqrt(q_enu(0, 0) + q_enu(1, 1));
}

ErrorStats error_stats(const std::vector<PositionSolution>& solutions, const Vec3& truth,
                       std::size_t total_epochs, const std::array<double, 3>& edges) {
  std::vector<double> errors;
  errors.reserve(solutions.size());
  for (const auto& s : solutions) errors.push_back(norm(s.position - truth));
  return stats_from_errors(errors, total_epochs, edges);
}

ErrorStats stats_from_errors(const std::vector<double>& errors, std::size_t total_epochs,
                             const std::array<double, 3>& edges) {
  if (total_epochs == 0) throw Error(ErrorCode::EmptyInput, "error_stats: no epochs");
  ErrorStats st;
  if (errors.empty()) return st;

  double sum = 0.0;
  for (double e : errors) sum += e;
  st.mean_error = sum / static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - st.mean_error) * (e - st.mean_error);
  st.stddev = std::sqrt(var / static_cast<double>(errors.size()));

  const double n = static_cast<double>(errors.size());
  st.pct_lt_a = 100.0 * std::count_if(errors.begin(), errors.end(),
                                      [&](double e) { return e < edges[0]; }) / n;
  st.pct_lt_b = 100.0 * std::count_if(errors.begin(), errors.end(),
                                      [&](double e) { return e < edges[1]; }) / n;
  st.pct_gt_c = 100.0 * std::count_if(errors.begin(), errors.end(),
                                      [&](double e) { return e > edges[2]; }) / n;
  st.availability = 100.0 * n / static_cast<double>(total_epochs);
  return st;
}

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::SchemaError, std::string(what) + ": expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Epoch epoch_from_json_obj(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "epoch: expected an object");
  Epoch e;
  e.time = j.value("time", 0.0);
  if (j.contains("truth_ecef") && !j["truth_ecef"].is_null())
    e.truth_ecef = vec3_from_json(j["truth_ecef"], "truth_ecef");
  if (!j.contains("observations") || !j["observations"].is_array())
    throw Error(ErrorCode::SchemaError, "epoch: missing observations array");
  std::set<std::string> seen;
  for (const auto& o : j["observations"]) {
    SatelliteObservation s;
    if (!o.contains("prn") || !o.contains("system") || !o.contains("sat_pos_ecef") ||
        !o.contains("pseudorange_m") || !o.contains("snr_dbhz"))
      throw Error(ErrorCode::SchemaError,
                  "observation: needs prn, system, sat_pos_ecef, pseudorange_m, snr_dbhz");
    s.prn = o["prn"].get<std::string>();
    if (!seen.insert(s.prn).second)
      throw Error(ErrorCode::SchemaError, "epoch: duplicate PRN " + s.prn);
    s.system = system_from_name(o["system"].get<std::string>());
    s.sat_pos = vec3_from_json(o["sat_pos_ecef"], "sat_pos_ecef");
    s.pseudorange_m = o["pseudorange_m"].get<double>();
    s.snr_dbhz = o["snr_dbhz"].get<double>();
    if (s.pseudorange_m <= 1e7 || s.pseudorange_m >= 5e7)
      throw Error(ErrorCode::SchemaError,
                  "observation " + s.prn + ": pseudorange outside (1e7, 5e7) m sanity band");
    if (s.snr_dbhz < 0.0 || s.snr_dbhz > 70.0)
      throw Error(ErrorCode::SchemaError,
                  "observation " + s.prn + ": snr outside [0, 70] dB-Hz");
    if (o.contains("azimuth_deg") && !o["azimuth_deg"].is_null())
      s.azimuth_deg = o["azimuth_deg"].get<double>();
    if (o.contains("elevation_deg") && !o["elevation_deg"].is_null())
      s.elevation_deg = o["elevation_deg"].get<double>();
    e.observations.push_back(std::move(s));
  }
  return e;
}

}  // namespace

std::vector<Epoch> epochs_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("epochs json: ") + e.what());
  }
  std::vector<Epoch> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(epoch_from_json_obj(e));
  } else if (j.is_object() && j.contains("epochs") && j["epochs"].is_array()) {
    for (const auto& e : j["epochs"]) out.push_back(epoch_from_json_obj(e));
  } else if (j.is_object()) {
    out.push_back(epoch_from_json_obj(j));
  } else {
    throw Error(ErrorCode::SchemaError, "epochs json: expected epoch object or array");
  }
  return out;
}

std::string epochs_to_json(const std::vector<Epoch>& epochs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : epochs) {
    nlohmann::json obs = nlohmann::json::array();
    for (const auto& o : e.observations) {
      nlohmann::json jo = {{"prn", o.prn},
                           {"system", system_name(o.system)},
                           {"sat_pos_ecef", {o.sat_pos.x, o.sat_pos.y, o.sat_pos.z}},
                           {"pseudorange_m", o.pseudorange_m},
                           {"snr_dbhz", o.snr_dbhz}};
      if (o.azimuth_deg) jo["azimuth_deg"] = *o.azimuth_deg;
      if (o.elevation_deg) jo["elevation_deg"] = *o.elevation_deg;
      obs.push_back(std::move(jo));
    }
    nlohmann::json je = {{"time", e.time}, {"observations", std::move(obs)}};
    if (e.truth_ecef)
      je["truth_ecef"] = {e.truth_ecef->x, e.truth_ecef->y, e.truth_ecef->z};
    arr.push_back(std::move(je));
  }
  return nlohmann::json{{"epochs", std::move(arr)}}.dump(2) + "\n";
}

}  // namespace busnav::solver
