// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "busnav/error.hpp"
#include "json.hpp"

namespace busnav::pipeline {

namespace {

using nlohmann::json;

// Fill missing azimuth/elevation fields from a reference receiver position.
void fill_az_el(std::vector<solver::SatelliteObservation>& obs,
                const std::optional<Vec3>& ref) {
  for (auto& o : obs) {
    if (o.azimuth_deg && o.elevation_deg) continue;
    if (!ref)
      throw Error(ErrorCode::InvalidParameter,
                  "observation " + o.prn + ": azimuth/elevation missing and no reference position");
    const sky::AzEl ae = solver::az_el_from_ecef(o.sat_pos, *ref);
    if (!o.azimuth_deg) o.azimuth_deg = ae.az_deg;
    if (!o.elevation_deg) o.elevation_deg = ae.el_deg;
  }
}

std::vector<double> esf_weights(const std::vector<solver::SatelliteObservation>& obs,
                                const solver::WeightParams& p) {
  std::vector<double> w;
  w.reserve(obs.size());
  for (const auto& o : obs)
    w.push_back(1.0 / solver::snr_elevation_weight(*o.elevation_deg, o.snr_dbhz, p));
  return w;
}

void set_error_3d(solver::PositionSolution& sol, const std::optional<Vec3>& truth) {
  if (truth) sol.error_3d = norm(sol.position - *truth);
}

std::vector<std::string> prns_of(const std::vector<solver::SatelliteObservation>& obs) {
  std::vector<std::string> out;
  out.reserve(obs.size());
  for (const auto& o : obs) out.push_back(o.prn);
  return out;
}

}  // namespace

MethodSet run_methods(const solver::Epoch& epoch,
                      const std::vector<sky::SkyBoundary>& boundaries,
                      const config::RunConfig& cfg,
                      const std::optional<Vec3>& initial_hint) {
  MethodSet out;
  Vec3 initial{};
  if (cfg.initial_position_ecef)
    initial = *cfg.initial_position_ecef;
  else if (initial_hint)
    initial = *initial_hint;

  // (1) plain LS on everything.
  try {
    auto sol = solver::solve_ls(epoch.observations, initial);
    set_error_3d(sol, epoch.truth_ecef);
    out.ls = std::move(sol);
  } catch (const Error& e) {
    out.errors.push_back(std::string("ls: ") + e.what());
  }

  std::optional<Vec3> ref;
  if (out.ls)
    ref = out.ls->position;
  else if (norm(initial) > 1.0)
    ref = initial;

  std::vector<solver::SatelliteObservation> obs = epoch.observations;
  std::vector<solver::SatelliteObservation> kept, filtered;
  try {
    fill_az_el(obs, ref);
    std::tie(kept, filtered) =
        solver::elevation_snr_filter(obs, cfg.ele_thres_deg, cfg.snr_floor_dbhz);
  } catch (const Error& e) {
    out.errors.push_back(std::string("esf: ") + e.what());
    return out;
  }
  const auto filtered_prns = prns_of(filtered);

  // (2) LS-ESF.
  try {
    auto sol = solver::solve_ls(kept, initial);
    sol.filtered_prns = filtered_prns;
    set_error_3d(sol, epoch.truth_ecef);
    out.ls_esf = std::move(sol);
  } catch (const Error& e) {
    out.errors.push_back(std::string("ls-esf: ") + e.what());
  }

  // (3) WLS-ESF.
  const solver::WeightParams wp = cfg.weight_params();
  try {
    auto sol = solver::solve_wls(kept, esf_weights(kept, wp), initial);
    sol.filtered_prns = filtered_prns;
    set_error_3d(sol, epoch.truth_ecef);
    out.wls_esf = std::move(sol);
  } catch (const Error& e) {
    out.errors.push_back(std::string("wls-esf: ") + e.what());
  }

  // (4) WLS-ESF-NE.
  try {
    std::vector<exclusion::SatSky> sky_sats;
    sky_sats.reserve(kept.size());
    for (const auto& o : kept)
      sky_sats.push_back({o.prn, {*o.azimuth_deg, *o.elevation_deg}, o.snr_dbhz});
    auto [survivor_sky, decisions] =
        exclusion::exclude_nlos(sky_sats, boundaries, cfg.exclusion_config());
    out.decisions = std::move(decisions);

    std::vector<solver::SatelliteObservation> survivors;
    std::vector<std::string> excluded_prns;
    for (const auto& o : kept) {
      const bool survived = std::any_of(survivor_sky.begin(), survivor_sky.end(),
                                        [&](const exclusion::SatSky& s) { return s.prn == o.prn; });
      if (survived)
        survivors.push_back(o);
      else
        excluded_prns.push_back(o.prn);
    }
    auto sol = solver::solve_wls(survivors, esf_weights(survivors, wp), initial);
    sol.filtered_prns = filtered_prns;
    sol.excluded_prns = std::move(excluded_prns);
    set_error_3d(sol, epoch.truth_ecef);
    out.wls_esf_ne = std::move(sol);
  } catch (const Error& e) {
    out.errors.push_back(std::string("wls-esf-ne: ") + e.what());
  }

  return out;
}

std::vector<sky::SkyBoundary> scenario_boundaries(const simkit::Scenario& s,
                                                  std::vector<std::string>* diagnostics) {
  std::vector<sky::SkyBoundary> out;
  for (const auto& box : s.boxes) {
    detect::ObbDescriptor obb;
    obb.xc = box.center.x;
    obb.yc = box.center.y;
    obb.zc = box.center.z;
    obb.yaw_deg = box.yaw_deg;
    obb.d_len = std::max(box.len, box.wid);
    obb.d_wid = std::min(box.len, box.wid);
    obb.d_alt = box.alt;
    const detect::BusBoundary3D b3 = detect::extract_boundary(obb, s.antenna_offset_m);
    try {
      out.push_back(sky::project_boundary(b3, s.antenna_offset_m, s.heading_deg));
    } catch (const Error& e) {
      if (diagnostics) diagnostics->push_back(std::string("boundary dropped: ") + e.what());
    }
  }
  return out;
}

ScenarioReport run_scenario(const simkit::Scenario& s, std::size_t epochs,
                            const config::RunConfig& cfg) {
  const auto boundaries = scenario_boundaries(s);
  ScenarioReport rep;
  std::vector<double> e_ls, e_ls_esf, e_wls_esf, e_wls_esf_ne;
  std::optional<Vec3> hint;
  for (std::size_t i = 0; i < epochs; ++i) {
    const solver::Epoch epoch = simkit::synth_epoch(s, i);
    const MethodSet m = run_methods(epoch, boundaries, cfg, hint);
    ScenarioEpochRow row;
    row.time = epoch.time;
    if (m.ls) {
      e_ls.push_back(*m.ls->error_3d);
      row.err_ls = m.ls->error_3d;
      hint = m.ls->position;
    }
    if (m.ls_esf) {
      e_ls_esf.push_back(*m.ls_esf->error_3d);
      row.err_ls_esf = m.ls_esf->error_3d;
    }
    if (m.wls_esf) {
      e_wls_esf.push_back(*m.wls_esf->error_3d);
      row.err_wls_esf = m.wls_esf->error_3d;
      row.hdop_wls_esf = m.wls_esf->hdop;
      row.used_wls_esf = static_cast<int>(m.wls_esf->used_prns.size());
    }
    if (m.wls_esf_ne) {
      e_wls_esf_ne.push_back(*m.wls_esf_ne->error_3d);
      row.err_wls_esf_ne = m.wls_esf_ne->error_3d;
      row.hdop_wls_esf_ne = m.wls_esf_ne->hdop;
      row.used_wls_esf_ne = static_cast<int>(m.wls_esf_ne->used_prns.size());
    }
    rep.epochs.push_back(row);
  }
  if (epochs > 0) {
    rep.ls = solver::stats_from_errors(e_ls, epochs, cfg.bucket_edges_m);
    rep.ls_esf = solver::stats_from_errors(e_ls_esf, epochs, cfg.bucket_edges_m);
    rep.wls_esf = solver::stats_from_errors(e_wls_esf, epochs, cfg.bucket_edges_m);
    rep.wls_esf_ne = solver::stats_from_errors(e_wls_esf_ne, epochs, cfg.bucket_edges_m);
  }
  return rep;
}

namespace {

json stats_to_json(const solver::ErrorStats& st) {
  return {{"mean_error_m", st.mean_error}, {"std_m", st.stddev},
          {"pct_lt_a", st.pct_lt_a},       {"pct_lt_b", st.pct_lt_b},
          {"pct_gt_c", st.pct_gt_c},       {"availability_pct", st.availability}};
}

json opt_num(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string report_to_json(const ScenarioReport& r, const config::RunConfig& cfg) {
  json epochs = json::array();
  for (const auto& row : r.epochs) {
    epochs.push_back({{"time", row.time},
                      {"err_ls", opt_num(row.err_ls)},
                      {"err_ls_esf", opt_num(row.err_ls_esf)},
                      {"err_wls_esf", opt_num(row.err_wls_esf)},
                      {"err_wls_esf_ne", opt_num(row.err_wls_esf_ne)},
                      {"hdop_wls_esf", opt_num(row.hdop_wls_esf)},
                      {"hdop_wls_esf_ne", opt_num(row.hdop_wls_esf_ne)},
                      {"used_wls_esf", row.used_wls_esf},
                      {"used_wls_esf_ne", row.used_wls_esf_ne}});
  }
  json j = {{"bucket_edges_m",
             {cfg.bucket_edges_m[0], cfg.bucket_edges_m[1], cfg.bucket_edges_m[2]}},
            {"stats",
             {{"ls", stats_to_json(r.ls)},
              {"ls_esf", stats_to_json(r.ls_esf)},
              {"wls_esf", stats_to_json(r.wls_esf)},
              {"wls_esf_ne", stats_to_json(r.wls_esf_ne)}}},
            {"epochs", std::move(epochs)}};
  return j.dump(2) + "\n";
}

std::string report_to_table(const ScenarioReport& r, const config::RunConfig& cfg) {
  const solver::ErrorStats* cols[4] = {&r.ls, &r.ls_esf, &r.wls_esf, &r.wls_esf_ne};
  std::ostringstream os;
  auto emit = [&](const std::string& label, const std::array<std::string, 4>& cells) {
    os << label;
    for (std::size_t i = label.size(); i < 26; ++i) os << ' ';
    for (const auto& cell : cells) {
      os << cell;
      for (std::size_t i = cell.size(); i < 12; ++i) os << ' ';
    }
    os << '\n';
  };
  auto row = [&](const std::string& label, auto getter) {
    std::array<std::string, 4> cells;
    for (int i = 0; i < 4; ++i) cells[i] = getter(*cols[i]);
    emit(label, cells);
  };
  auto edge = [](double v) {
    // Edges are whole meters in practice; keep the label compact.
    if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
    return fmt(v);
  };
  emit("All data", {"LS", "LS-ESF", "WLS-ESF", "WLS-ESF-NE"});
  row("Mean error", [](const solver::ErrorStats& c) { return fmt(c.mean_error); });
  row("Std", [](const solver::ErrorStats& c) { return fmt(c.stddev); });
  row("Percentage (<" + edge(cfg.bucket_edges_m[0]) + " meters)",
      [](const solver::ErrorStats& c) { return fmt(c.pct_lt_a) + "%"; });
  row("Percentage (<" + edge(cfg.bucket_edges_m[1]) + " meters)",
      [](const solver::ErrorStats& c) { return fmt(c.pct_lt_b) + "%"; });
  row("Percentage (>" + edge(cfg.bucket_edges_m[2]) + " meters)",
      [](const solver::ErrorStats& c) { return fmt(c.pct_gt_c) + "%"; });
  row("Availability", [](const solver::ErrorStats& c) { return fmt(c.availability) + "%"; });
  return os.str();
}

namespace {

json solution_to_json(const solver::PositionSolution& s) {
  json clocks = json::object();
  for (const auto& [sys, bias] : s.clock_bias) clocks[solver::system_name(sys)] = bias;
  json j = {{"position_ecef", {s.position.x, s.position.y, s.position.z}},
            {"clock_bias_m", std::move(clocks)},
            {"hdop", s.hdop},
            {"used_prns", s.used_prns},
            {"filtered_prns", s.filtered_prns},
            {"excluded_prns", s.excluded_prns},
            {"iterations", s.iterations},
            {"converged", s.converged}};
  if (s.error_3d) j["error_3d_m"] = *s.error_3d;
  return j;
}

json method_to_json(const std::optional<solver::PositionSolution>& s) {
  return s ? solution_to_json(*s) : json(nullptr);
}

}  // namespace

CommandOutput detect_command(std::string_view cloud_text, std::string_view format,
                             std::string_view config_json) {
  const config::RunConfig cfg = config::config_from_json(config_json);
  pointcloud::LoadResult loaded;
  if (format == "csv")
    loaded = pointcloud::load_cloud_csv(cloud_text);
  else if (format == "pcd")
    loaded = pointcloud::load_cloud_pcd(cloud_text);
  else
    loaded = pointcloud::load_cloud_auto(cloud_text);

  if (cfg.ground_z_min_m) {
    pointcloud::PointCloud filtered;
    for (const auto& p : loaded.cloud.points)
      if (p.z >= *cfg.ground_z_min_m) filtered.points.push_back(p);
    loaded.cloud = std::move(filtered);
  }

  const auto boundaries =
      detect::detect_buses(loaded.cloud, cfg.classifier, cfg.r_search_m, cfg.min_cluster_size,
                           cfg.max_cluster_size, Point3{0, 0, 0});
  CommandOutput out;
  out.json = detect::boundaries_to_json(boundaries);
  return out;
}

CommandOutput solve_command(std::string_view epochs_json, std::string_view boundaries_json,
                            std::string_view config_json, std::string_view method,
                            bool render_skyplots) {
  const config::RunConfig cfg = config::config_from_json(config_json);
  const auto epochs = solver::epochs_from_json(epochs_json);

  const bool want_all = method.empty() || method == "all";
  if (!want_all && method != "ls" && method != "ls-esf" && method != "wls-esf" &&
      method != "wls-esf-ne")
    throw Error(ErrorCode::SchemaError, "unknown method '" + std::string(method) + "'");

  std::vector<std::string> warnings;
  std::vector<sky::SkyBoundary> boundaries;
  if (!boundaries_json.empty()) {
    for (const auto& b3 : detect::boundaries_from_json(boundaries_json)) {
      try {
        boundaries.push_back(sky::project_boundary(b3, cfg.lever_arm_m, cfg.heading_deg));
      } catch (const Error& e) {
        warnings.push_back(std::string("boundary dropped: ") + e.what());
      }
    }
  } else if (method == "wls-esf-ne") {
    warnings.push_back("no boundaries supplied; wls-esf-ne behaves as wls-esf");
  }

  CommandOutput out;
  json jepochs = json::array();
  std::vector<double> errs[4];
  bool any_truth = false;
  std::optional<Vec3> hint;
  std::size_t index = 0;
  for (const auto& epoch : epochs) {
    const MethodSet m = run_methods(epoch, boundaries, cfg, hint);
    if (m.ls) hint = m.ls->position;
    if (epoch.truth_ecef) any_truth = true;

    json jm = json::object();
    if (want_all || method == "ls") jm["ls"] = method_to_json(m.ls);
    if (want_all || method == "ls-esf") jm["ls_esf"] = method_to_json(m.ls_esf);
    if (want_all || method == "wls-esf") jm["wls_esf"] = method_to_json(m.wls_esf);
    if (want_all || method == "wls-esf-ne") jm["wls_esf_ne"] = method_to_json(m.wls_esf_ne);

    json jd = json::array();
    for (const auto& d : m.decisions)
      jd.push_back({{"prn", d.prn},
                    {"verdict", d.excluded ? "excluded" : "kept"},
                    {"reason", exclusion::reason_name(d.reason)},
                    {"dS", d.delta_s},
                    {"theta1", d.theta1},
                    {"theta2", d.theta2}});
    json je = {{"time", epoch.time}, {"methods", std::move(jm)}, {"decisions", std::move(jd)}};
    if (!m.errors.empty()) je["errors"] = m.errors;
    jepochs.push_back(std::move(je));

    if (m.ls && m.ls->error_3d) errs[0].push_back(*m.ls->error_3d);
    if (m.ls_esf && m.ls_esf->error_3d) errs[1].push_back(*m.ls_esf->error_3d);
    if (m.wls_esf && m.wls_esf->error_3d) errs[2].push_back(*m.wls_esf->error_3d);
    if (m.wls_esf_ne && m.wls_esf_ne->error_3d) errs[3].push_back(*m.wls_esf_ne->error_3d);

    if (render_skyplots) {
      // Colour satellites by the full-method outcome.
      std::vector<sky::SkySat> plot;
      const solver::PositionSolution* ne = m.wls_esf_ne ? &*m.wls_esf_ne : nullptr;
      std::vector<solver::SatelliteObservation> obs = epoch.observations;
      try {
        fill_az_el(obs, m.ls ? std::optional<Vec3>(m.ls->position) : std::nullopt);
      } catch (const Error&) {
        obs.clear();
      }
      for (const auto& o : obs) {
        std::string decision = "kept";
        if (ne) {
          auto has = [&](const std::vector<std::string>& v) {
            return std::find(v.begin(), v.end(), o.prn) != v.end();
          };
          if (has(ne->filtered_prns)) decision = "filtered";
          else if (has(ne->excluded_prns)) decision = "excluded";
        }
        plot.push_back({o.prn, {*o.azimuth_deg, *o.elevation_deg}, o.snr_dbhz, decision});
      }
      out.artifacts.emplace_back("skyplot_" + std::to_string(index) + ".svg",
                                 sky::render_skyplot(plot, boundaries));
    }
    ++index;
  }

  json j = {{"epochs", std::move(jepochs)}};
  if (!warnings.empty()) j["warnings"] = warnings;
  if (any_truth && !epochs.empty()) {
    ScenarioReport rep;
    rep.ls = solver::stats_from_errors(errs[0], epochs.size(), cfg.bucket_edges_m);
    rep.ls_esf = solver::stats_from_errors(errs[1], epochs.size(), cfg.bucket_edges_m);
    rep.wls_esf = solver::stats_from_errors(errs[2], epochs.size(), cfg.bucket_edges_m);
    rep.wls_esf_ne = solver::stats_from_errors(errs[3], epochs.size(), cfg.bucket_edges_m);
    j["stats"] = {{"ls", stats_to_json(rep.ls)},
                  {"ls_esf", stats_to_json(rep.ls_esf)},
                  {"wls_esf", stats_to_json(rep.wls_esf)},
                  {"wls_esf_ne", stats_to_json(rep.wls_esf_ne)}};
    out.table = report_to_table(rep, cfg);
  }
  out.json = j.dump(2) + "\n";
  return out;
}

CommandOutput simulate_command(std::string_view scenario_json, std::size_t epochs,
                               std::string_view config_json, bool emit_epochs,
                               bool render_skyplots) {
  const config::RunConfig cfg = config::config_from_json(config_json);
  const simkit::Scenario scen = simkit::scenario_from_json(scenario_json);
  const ScenarioReport rep = run_scenario(scen, epochs, cfg);

  CommandOutput out;
  out.json = report_to_json(rep, cfg);
  out.table = report_to_table(rep, cfg);
  if (emit_epochs) {
    std::vector<solver::Epoch> stream;
    stream.reserve(epochs);
    for (std::size_t i = 0; i < epochs; ++i) stream.push_back(simkit::synth_epoch(scen, i));
    out.artifacts.emplace_back("epochs.json", solver::epochs_to_json(stream));
  }
  if (render_skyplots && epochs > 0) {
    const auto boundaries = scenario_boundaries(scen);
    const solver::Epoch first = simkit::synth_epoch(scen, 0);
    std::vector<sky::SkySat> plot;
    for (const auto& o : first.observations)
      plot.push_back({o.prn, {*o.azimuth_deg, *o.elevation_deg}, o.snr_dbhz, "kept"});
    out.artifacts.emplace_back("skyplot_0.svg", sky::render_skyplot(plot, boundaries));
  }
  return out;
}

}  // namespace busnav::pipeline
