// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav/config.hpp"

#include <set>

#include "busnav/error.hpp"
#include "json.hpp"

namespace busnav::config {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw Error(ErrorCode::SchemaError, "config: '" + key + "' must be a number");
  return j.get<double>();
}

double require_positive(const json& j, const std::string& key) {
  const double v = require_number(j, key);
  if (v <= 0.0) throw Error(ErrorCode::SchemaError, "config: '" + key + "' must be positive");
  return v;
}

Vec3 require_vec3(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
    throw Error(ErrorCode::SchemaError, "config: '" + key + "' must be a 3-element number array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& scope) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key()))
      throw Error(ErrorCode::SchemaError, "config: unknown key '" + scope + it.key() + "'");
  }
}

void apply_classifier(const json& j, detect::BusClassifierConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "config: 'classifier' must be an object");
  static const std::set<std::string> known = {"len_min", "len_max", "wid_min", "wid_max",
                                             "alt_min", "alt_max", "full_len", "full_wid",
                                             "full_alt"};
  check_known_keys(j, known, "classifier.");
  if (j.contains("len_min")) c.len_min = require_number(j["len_min"], "classifier.len_min");
  if (j.contains("len_max")) c.len_max = require_number(j["len_max"], "classifier.len_max");
  if (j.contains("wid_min")) c.wid_min = require_number(j["wid_min"], "classifier.wid_min");
  if (j.contains("wid_max")) c.wid_max = require_number(j["wid_max"], "classifier.wid_max");
  if (j.contains("alt_min")) c.alt_min = require_number(j["alt_min"], "classifier.alt_min");
  if (j.contains("alt_max")) c.alt_max = require_number(j["alt_max"], "classifier.alt_max");
  if (j.contains("full_len")) c.full_len = require_positive(j["full_len"], "classifier.full_len");
  if (j.contains("full_wid")) c.full_wid = require_positive(j["full_wid"], "classifier.full_wid");
  if (j.contains("full_alt")) c.full_alt = require_positive(j["full_alt"], "classifier.full_alt");
  if (!(c.len_min < c.len_max) || !(c.wid_min < c.wid_max) || !(c.alt_min < c.alt_max))
    throw Error(ErrorCode::SchemaError, "config: classifier intervals need min < max");
}

}  // namespace

RunConfig config_from_json(std::string_view text) {
  RunConfig cfg;
  if (text.empty()) return cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("config json: ") + e.what());
  }
  if (j.is_null()) return cfg;
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "config: expected a JSON object");

  static const std::set<std::string> known = {
      "s_threshold",   "snr_threshold",     "theta_thres_deg",     "sector_tolerance_deg",
      "ele_thres_deg", "snr_floor_dbhz",    "weight_a",            "weight_A",
      "weight_F",      "r_search_m",        "min_cluster_size",    "max_cluster_size",
      "ground_z_min_m", "classifier",       "lever_arm_m",         "heading_deg",
      "initial_position_ecef", "bucket_edges_m"};
  check_known_keys(j, known, "");

  if (j.contains("s_threshold")) cfg.s_threshold = require_positive(j["s_threshold"], "s_threshold");
  if (j.contains("snr_threshold"))
    cfg.snr_threshold = require_positive(j["snr_threshold"], "snr_threshold");
  if (j.contains("theta_thres_deg"))
    cfg.theta_thres_deg = require_positive(j["theta_thres_deg"], "theta_thres_deg");
  if (j.contains("sector_tolerance_deg"))
    cfg.sector_tolerance_deg = require_positive(j["sector_tolerance_deg"], "sector_tolerance_deg");
  if (j.contains("ele_thres_deg")) cfg.ele_thres_deg = require_number(j["ele_thres_deg"], "ele_thres_deg");
  if (j.contains("snr_floor_dbhz"))
    cfg.snr_floor_dbhz = require_number(j["snr_floor_dbhz"], "snr_floor_dbhz");
  if (j.contains("weight_a")) cfg.weight_a = require_positive(j["weight_a"], "weight_a");
  if (j.contains("weight_A")) cfg.weight_A = require_positive(j["weight_A"], "weight_A");
  if (j.contains("weight_F")) cfg.weight_F = require_number(j["weight_F"], "weight_F");
  if (cfg.weight_F >= cfg.snr_threshold)
    throw Error(ErrorCode::SchemaError, "config: weight_F must be below snr_threshold");
  if (j.contains("r_search_m")) cfg.r_search_m = require_positive(j["r_search_m"], "r_search_m");
  if (j.contains("min_cluster_size")) {
    if (!j["min_cluster_size"].is_number_unsigned())
      throw Error(ErrorCode::SchemaError, "config: 'min_cluster_size' must be a non-negative integer");
    cfg.min_cluster_size = j["min_cluster_size"].get<std::size_t>();
    if (cfg.min_cluster_size < 1)
      throw Error(ErrorCode::SchemaError, "config: 'min_cluster_size' must be >= 1");
  }
  if (j.contains("max_cluster_size")) {
    if (!j["max_cluster_size"].is_number_unsigned())
      throw Error(ErrorCode::SchemaError, "config: 'max_cluster_size' must be a non-negative integer");
    cfg.max_cluster_size = j["max_cluster_size"].get<std::size_t>();
  }
  if (cfg.min_cluster_size > cfg.max_cluster_size)
    throw Error(ErrorCode::SchemaError, "config: min_cluster_size must be <= max_cluster_size");
  if (j.contains("ground_z_min_m") && !j["ground_z_min_m"].is_null())
    cfg.ground_z_min_m = require_number(j["ground_z_min_m"], "ground_z_min_m");
  if (j.contains("classifier")) apply_classifier(j["classifier"], cfg.classifier);
  if (j.contains("lever_arm_m")) cfg.lever_arm_m = require_vec3(j["lever_arm_m"], "lever_arm_m");
  if (j.contains("heading_deg")) cfg.heading_deg = require_number(j["heading_deg"], "heading_deg");
  if (j.contains("initial_position_ecef") && !j["initial_position_ecef"].is_null())
    cfg.initial_position_ecef = require_vec3(j["initial_position_ecef"], "initial_position_ecef");
  if (j.contains("bucket_edges_m")) {
    const auto& e = j["bucket_edges_m"];
    if (!e.is_array() || e.size() != 3)
      throw Error(ErrorCode::SchemaError, "config: 'bucket_edges_m' must be a 3-element array");
    for (int i = 0; i < 3; ++i)
      cfg.bucket_edges_m[i] = require_positive(e[i], "bucket_edges_m");
    if (!(cfg.bucket_edges_m[0] <= cfg.bucket_edges_m[1]))
      throw Error(ErrorCode::SchemaError, "config: bucket edges must be non-decreasing");
  }
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j = {
      {"s_threshold", cfg.s_threshold},
      {"snr_threshold", cfg.snr_threshold},
      {"theta_thres_deg", cfg.theta_thres_deg},
      {"sector_tolerance_deg", cfg.sector_tolerance_deg},
      {"ele_thres_deg", cfg.ele_thres_deg},
      {"snr_floor_dbhz", cfg.snr_floor_dbhz},
      {"weight_a", cfg.weight_a},
      {"weight_A", cfg.weight_A},
      {"weight_F", cfg.weight_F},
      {"r_search_m", cfg.r_search_m},
      {"min_cluster_size", cfg.min_cluster_size},
      {"max_cluster_size", cfg.max_cluster_size},
      {"ground_z_min_m", cfg.ground_z_min_m ? json(*cfg.ground_z_min_m) : json(nullptr)},
      {"classifier",
       {{"len_min", cfg.classifier.len_min},
        {"len_max", cfg.classifier.len_max},
        {"wid_min", cfg.classifier.wid_min},
        {"wid_max", cfg.classifier.wid_max},
        {"alt_min", cfg.classifier.alt_min},
        {"alt_max", cfg.classifier.alt_max},
        {"full_len", cfg.classifier.full_len},
        {"full_wid", cfg.classifier.full_wid},
        {"full_alt", cfg.classifier.full_alt}}},
      {"lever_arm_m", {cfg.lever_arm_m.x, cfg.lever_arm_m.y, cfg.lever_arm_m.z}},
      {"heading_deg", cfg.heading_deg},
      {"initial_position_ecef",
       cfg.initial_position_ecef
           ? json({cfg.initial_position_ecef->x, cfg.initial_position_ecef->y,
                   cfg.initial_position_ecef->z})
           : json(nullptr)},
      {"bucket_edges_m",
       {cfg.bucket_edges_m[0], cfg.bucket_edges_m[1], cfg.bucket_edges_m[2]}},
  };
  return j.dump(2) + "\n";
}

}  // namespace busnav::config
