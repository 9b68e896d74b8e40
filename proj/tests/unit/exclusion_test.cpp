// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "busnav/exclusion.hpp"
#include "busnav/skygeom.hpp"
#include "doctest.h"

using namespace busnav;
using exclusion::ExclusionConfig;
using exclusion::Reason;
using exclusion::SatSky;
using sky::SkyBoundary;

namespace {

SkyBoundary boundary_from_azel(double azE, double elE, double azF, double elF) {
  SkyBoundary b;
  b.azE = azE;
  b.elE = elE;
  b.azF = azF;
  b.elF = elF;
  b.E = sky::to_sky_point({azE, elE});
  b.F = sky::to_sky_point({azF, elF});
  return b;
}

// Boundary spanning azimuths ~[352, 20] at elevation 70: its segment EF
// passes above a satellite at (az 8, el 54).
const SkyBoundary kBusBoundary = boundary_from_azel(352.0, 70.0, 20.0, 70.0);

}  // namespace

TEST_CASE("weak in-sector satellite below the boundary is blocked") {
  const ExclusionConfig cfg;
  const auto d = exclusion::is_blocked({"G26", {8.0, 54.0}, 38.0}, kBusBoundary, cfg);
  CHECK(d.excluded);
  CHECK(d.reason == Reason::Blocked);
  CHECK(d.delta_s > cfg.s_threshold);
  CHECK(d.theta1 == doctest::Approx(16.0));
  CHECK(d.theta2 == doctest::Approx(12.0));
}

TEST_CASE("strong signal is kept by the SNR guard") {
  const auto d = exclusion::is_blocked({"G26", {8.0, 54.0}, 47.0}, kBusBoundary, {});
  CHECK_FALSE(d.excluded);
  CHECK(d.reason == Reason::HighSnrGuard);
  CHECK(std::string(exclusion::reason_name(d.reason)) == "high_snr_guard");
}

TEST_CASE("satellite near an extended edge beam is kept") {
  // theta1 = 2 deg < theta_thres = 5 deg
  const auto d = exclusion::is_blocked({"G100", {354.0, 40.0}, 38.0}, kBusBoundary, {});
  CHECK_FALSE(d.excluded);
  CHECK(d.reason == Reason::EdgeBeamGuard);
  CHECK(d.theta1 == doctest::Approx(2.0));
}

TEST_CASE("satellite outside the azimuth sector is kept") {
  const auto d = exclusion::is_blocked({"G07", {180.0, 30.0}, 38.0}, kBusBoundary, {});
  CHECK_FALSE(d.excluded);
  CHECK(d.reason == Reason::OutsideSector);
}

TEST_CASE("satellite above the boundary (inside triangle EOF) is kept") {
  const auto d = exclusion::is_blocked({"G09", {8.0, 80.0}, 38.0}, kBusBoundary, {});
  CHECK_FALSE(d.excluded);
  CHECK(d.reason == Reason::InsideTriangleVisible);
}

TEST_CASE("zenith satellite is never excluded") {
  for (double az = 0.0; az < 360.0; az += 15.0) {
    SkyBoundary b = boundary_from_azel(az, 60.0, az + 40.0, 65.0);
    const auto d = exclusion::is_blocked({"Z", {0.0, 90.0}, 30.0}, b, {});
    CHECK_FALSE(d.excluded);
  }
}

TEST_CASE("verdict is excluded iff reason is blocked") {
  for (double az = 0.0; az < 360.0; az += 7.0)
    for (double el : {20.0, 45.0, 60.0, 75.0})
      for (double snr : {30.0, 48.0}) {
        const auto d = exclusion::is_blocked({"X", {az, el}, snr}, kBusBoundary, {});
        CHECK(d.excluded == (d.reason == Reason::Blocked));
      }
}

TEST_CASE("threshold monotonicity") {
  int excluded_low = 0, excluded_high = 0, kept_t_low = 0, kept_t_high = 0;
  ExclusionConfig low, high;
  high.s_threshold = 100.0;
  ExclusionConfig t_low, t_high;
  t_low.snr_threshold = 30.0;
  t_high.snr_threshold = 50.0;
  for (double az = 0.0; az < 360.0; az += 5.0)
    for (double el : {25.0, 40.0, 55.0}) {
      const SatSky s{"X", {az, el}, 38.0};
      const bool e_low = exclusion::is_blocked(s, kBusBoundary, low).excluded;
      const bool e_high = exclusion::is_blocked(s, kBusBoundary, high).excluded;
      // raising S_threshold never excludes more (pointwise)
      if (e_high) CHECK(e_low);
      excluded_low += e_low;
      excluded_high += e_high;

      // raising T never keeps more via the SNR guard (pointwise)
      const bool k_low = !exclusion::is_blocked(s, kBusBoundary, t_low).excluded;
      const bool k_high = !exclusion::is_blocked(s, kBusBoundary, t_high).excluded;
      if (k_high && !k_low) FAIL_CHECK("raising T kept a satellite it should not");
      kept_t_low += k_low;
      kept_t_high += k_high;
    }
  CHECK(excluded_high <= excluded_low);
  CHECK(kept_t_high <= kept_t_low);
  CHECK(excluded_low > 0);  // the sweep actually exercises exclusions
}

TEST_CASE("exclude_nlos aggregation") {
  const std::vector<SatSky> sats = {{"G26", {8.0, 54.0}, 38.0},
                                    {"G07", {180.0, 30.0}, 38.0},
                                    {"G09", {8.0, 80.0}, 38.0}};
  SUBCASE("zero boundaries keeps everything") {
    auto [survivors, decisions] = exclusion::exclude_nlos(sats, {}, {});
    CHECK(survivors.size() == 3);
    REQUIRE(decisions.size() == 3);
    for (const auto& d : decisions) CHECK_FALSE(d.excluded);
  }
  SUBCASE("single boundary excludes the blocked satellite") {
    auto [survivors, decisions] = exclusion::exclude_nlos(sats, {kBusBoundary}, {});
    REQUIRE(survivors.size() == 2);
    CHECK(survivors[0].prn == "G07");
    CHECK(survivors[1].prn == "G09");
    CHECK(decisions[0].excluded);
  }
  SUBCASE("union semantics over disjoint boundaries") {
    const SkyBoundary other = boundary_from_azel(160.0, 70.0, 200.0, 70.0);
    auto [survivors, decisions] = exclusion::exclude_nlos(sats, {kBusBoundary, other}, {});
    // G26 blocked by the first, G07 (el 30 under el-70 boundary at az 180)
    // blocked by the second
    REQUIRE(survivors.size() == 1);
    CHECK(survivors[0].prn == "G09");
  }
}

TEST_CASE("decision json shape") {
  auto [survivors, decisions] =
      exclusion::exclude_nlos({{"G26", {8.0, 54.0}, 38.0}}, {kBusBoundary}, {});
  const std::string j = exclusion::decisions_to_json(decisions);
  for (const char* key : {"\"prn\"", "\"verdict\"", "\"reason\"", "\"dS\"", "\"theta1\"",
                          "\"theta2\"", "\"excluded\"", "\"blocked\""})
    CHECK(j.find(key) != std::string::npos);
}
