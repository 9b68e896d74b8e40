// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "busnav/error.hpp"
#include "busnav/pipeline.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace busnav;
using nlohmann::json;

namespace {

const Vec3 kTruth = geodetic_to_ecef({deg2rad(22.3), deg2rad(114.17), 50.0});

simkit::Scenario clean_scenario() {
  simkit::Scenario s;
  s.truth_ecef = kTruth;
  s.noise_sigma_m = 0.0;
  s.seed = 5;
  s.satellites = {{"G01", solver::System::GPS, sky::AzEl{30, 60}, {}, 48, 0, 0},
                  {"G02", solver::System::GPS, sky::AzEl{110, 45}, {}, 48, 0, 0},
                  {"G03", solver::System::GPS, sky::AzEl{190, 55}, {}, 48, 0, 0},
                  {"G04", solver::System::GPS, sky::AzEl{260, 40}, {}, 48, 0, 0},
                  {"G05", solver::System::GPS, sky::AzEl{340, 70}, {}, 48, 0, 0},
                  {"C01", solver::System::BDS, sky::AzEl{75, 35}, {}, 48, 0, 0},
                  {"C02", solver::System::BDS, sky::AzEl{300, 52}, {}, 48, 0, 0}};
  return s;
}

}  // namespace

TEST_CASE("run_methods") {
  const config::RunConfig cfg;
  const auto epoch = simkit::synth_epoch(clean_scenario(), 0);

  SUBCASE("no boundaries: WLS-ESF and WLS-ESF-NE coincide") {
    const auto m = pipeline::run_methods(epoch, {}, cfg);
    REQUIRE(m.wls_esf);
    REQUIRE(m.wls_esf_ne);
    CHECK(norm(m.wls_esf->position - m.wls_esf_ne->position) < 1e-9);
    CHECK(m.wls_esf_ne->excluded_prns.empty());
  }
  SUBCASE("all satellites above the SNR threshold: LS-ESF equals WLS-ESF") {
    const auto m = pipeline::run_methods(epoch, {}, cfg);
    REQUIRE(m.ls_esf);
    REQUIRE(m.wls_esf);
    CHECK(norm(m.ls_esf->position - m.wls_esf->position) < 1e-9);
  }
  SUBCASE("zero-noise: all four methods recover truth") {
    const auto m = pipeline::run_methods(epoch, {}, cfg);
    for (const auto* sol : {&m.ls, &m.ls_esf, &m.wls_esf, &m.wls_esf_ne}) {
      REQUIRE(sol->has_value());
      REQUIRE((*sol)->error_3d.has_value());
      CHECK(*(*sol)->error_3d < 1e-5);
    }
  }
}

TEST_CASE("run_scenario aggregates all four methods") {
  const auto rep = pipeline::run_scenario(clean_scenario(), 5, {});
  CHECK(rep.epochs.size() == 5);
  CHECK(rep.ls.availability == doctest::Approx(100.0));
  CHECK(rep.wls_esf_ne.mean_error < 1e-5);
  const std::string table = pipeline::report_to_table(rep, {});
  CHECK(table.find("WLS-ESF-NE") != std::string::npos);
  CHECK(table.find("Percentage (<15 meters)") != std::string::npos);
  CHECK(table.find("Availability") != std::string::npos);
}

TEST_CASE("detect command") {
  SUBCASE("empty input yields an empty boundary list") {
    const auto out = pipeline::detect_command("", "csv", "");
    CHECK(json::parse(out.json)["boundaries"].empty());
  }
  SUBCASE("malformed csv is an input error") {
    try {
      pipeline::detect_command("1,2\n", "csv", "");
      FAIL("expected input error");
    } catch (const Error& e) {
      CHECK(e.is_input_error());
    }
  }
  SUBCASE("simkit bus scan produces one boundary") {
    simkit::BoxPose bus;
    bus.center = {6.0, 9.0, 2.2};
    bus.yaw_deg = 25.0;
    const auto cloud = simkit::synth_bus_cloud(bus, {0, 0, 0}, -30, 10, 0.2);
    std::string csv;
    for (const auto& p : cloud.points)
      csv += std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z) + "\n";
    const auto out = pipeline::detect_command(csv, "csv", "");
    CHECK(json::parse(out.json)["boundaries"].size() == 1);
  }
}

TEST_CASE("solve command") {
  const auto stream = solver::epochs_to_json({simkit::synth_epoch(clean_scenario(), 0)});

  SUBCASE("method all emits the four solutions and stats") {
    const auto out = pipeline::solve_command(stream, "", "", "all", false);
    const json j = json::parse(out.json);
    REQUIRE(j["epochs"].size() == 1);
    for (const char* m : {"ls", "ls_esf", "wls_esf", "wls_esf_ne"})
      CHECK(j["epochs"][0]["methods"].contains(m));
    CHECK(j.contains("stats"));
    CHECK(j["stats"]["wls_esf_ne"]["mean_error_m"].get<double>() < 1e-5);
    CHECK_FALSE(out.table.empty());
  }
  SUBCASE("wls-esf-ne without boundaries warns") {
    const auto out = pipeline::solve_command(stream, "", "", "wls-esf-ne", false);
    const json j = json::parse(out.json);
    REQUIRE(j.contains("warnings"));
    CHECK_FALSE(j["warnings"].empty());
  }
  SUBCASE("unknown method is an input error") {
    CHECK_THROWS_AS(pipeline::solve_command(stream, "", "", "wls", false), Error);
  }
  SUBCASE("skyplot artifacts follow the per-epoch naming scheme") {
    const auto out = pipeline::solve_command(stream, "", "", "all", true);
    REQUIRE(out.artifacts.size() == 1);
    CHECK(out.artifacts[0].first == "skyplot_0.svg");
    CHECK(out.artifacts[0].second.find("<svg") != std::string::npos);
  }
}

TEST_CASE("simulate command") {
  const std::string scenario = simkit::scenario_to_json(clean_scenario());

  SUBCASE("zero epochs yield an empty report") {
    const auto out = pipeline::simulate_command(scenario, 0, "", false, false);
    CHECK(json::parse(out.json)["epochs"].empty());
  }
  SUBCASE("byte-identical reruns under a fixed seed") {
    const auto a = pipeline::simulate_command(scenario, 10, "", true, true);
    const auto b = pipeline::simulate_command(scenario, 10, "", true, true);
    CHECK(a.json == b.json);
    CHECK(a.table == b.table);
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
      CHECK(a.artifacts[i].first == b.artifacts[i].first);
      CHECK(a.artifacts[i].second == b.artifacts[i].second);
    }
  }
  SUBCASE("emit-epochs artifact parses back") {
    const auto out = pipeline::simulate_command(scenario, 3, "", true, false);
    REQUIRE_FALSE(out.artifacts.empty());
    CHECK(out.artifacts[0].first == "epochs.json");
    CHECK(solver::epochs_from_json(out.artifacts[0].second).size() == 3);
  }
}
