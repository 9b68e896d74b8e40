// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "busnav/config.hpp"
#include "busnav/exclusion.hpp"
#include "busnav/simkit.hpp"
#include "busnav/solver.hpp"

namespace busnav::pipeline {

// Result of running the four comparison methods on one epoch. A method
// that cannot be solved carries an error message instead of a solution.
struct MethodSet {
  std::optional<solver::PositionSolution> ls, ls_esf, wls_esf, wls_esf_ne;
  std::vector<std::string> errors;
  std::vector<exclusion::ExclusionDecision> decisions;  // from the NE step
};

// LS, LS-ESF, WLS-ESF and WLS-ESF-NE on one epoch. `initial_hint` is
// typically the previous epoch's solution.
MethodSet run_methods(const solver::Epoch& epoch,
                      const std::vector<sky::SkyBoundary>& boundaries,
                      const config::RunConfig& cfg,
                      const std::optional<Vec3>& initial_hint = std::nullopt);

// Project scenario boxes into skyplot boundaries (below-horizon edges are
// dropped with a diagnostic).
std::vector<sky::SkyBoundary> scenario_boundaries(const simkit::Scenario& s,
                                                  std::vector<std::string>* diagnostics = nullptr);

struct ScenarioEpochRow {
  double time = 0.0;
  std::optional<double> err_ls, err_ls_esf, err_wls_esf, err_wls_esf_ne;
  std::optional<double> hdop_wls_esf, hdop_wls_esf_ne;
  int used_wls_esf = 0, used_wls_esf_ne = 0;
};

struct ScenarioReport {
  solver::ErrorStats ls, ls_esf, wls_esf, wls_esf_ne;
  std::vector<ScenarioEpochRow> epochs;
};

// Generate `epochs` epochs, run the four methods on each, aggregate.
ScenarioReport run_scenario(const simkit::Scenario& s, std::size_t epochs,
                            const config::RunConfig& cfg);

std::string report_to_json(const ScenarioReport& r, const config::RunConfig& cfg);
// Aligned-column text table with the standard report row labels.
std::string report_to_table(const ScenarioReport& r, const config::RunConfig& cfg);

// String-level command entry points shared by the C API and the CLI.
struct CommandOutput {
  std::string json;
  std::string table;
  std::vector<std::pair<std::string, std::string>> artifacts;  // name -> content
};

CommandOutput detect_command(std::string_view cloud_text, std::string_view format,
                             std::string_view config_json);
CommandOutput solve_command(std::string_view epochs_json, std::string_view boundaries_json,
                            std::string_view config_json, std::string_view method,
                            bool render_skyplots);
CommandOutput simulate_command(std::string_view scenario_json, std::size_t epochs,
                               std::string_view config_json, bool emit_epochs,
                               bool render_skyplots);

}  // namespace busnav::pipeline
