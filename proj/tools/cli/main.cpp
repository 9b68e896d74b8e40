// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
//
// busnav-cli: detect / solve / simulate / skyplot over the C API.
// Exit codes: 0 success, 1 runtime/solve failure, 2 input/schema error.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "busnav.h"

namespace {

namespace fs = std::filesystem;

struct ResultDeleter {
  void operator()(bn_result* r) const { bn_result_free(r); }
};
using ResultPtr = std::unique_ptr<bn_result, ResultDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    std::exit(2);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path.string() << "'\n";
    std::exit(1);
  }
  out << content;
}

// Loads --config (file) if given, else empty = defaults.
std::string load_config(const std::string& config_path) {
  return config_path.empty() ? std::string() : read_file(config_path);
}

int print_config(const std::string& config_path) {
  // Round-trip through the library so the dump reflects the merged result.
  const std::string user = load_config(config_path);
  bn_result* raw = nullptr;
  bn_status st = bn_default_config(&raw);
  ResultPtr res(raw);
  if (st != BN_OK) {
    std::cerr << "error: " << (res ? bn_result_error(res.get()) : "out of memory") << "\n";
    return static_cast<int>(st);
  }
  if (user.empty()) {
    std::cout << bn_result_json(res.get());
    return 0;
  }
  // Validate the user config by running it through a no-op solve of zero
  // epochs; on success echo the merged document via the library.
  bn_result* raw2 = nullptr;
  st = bn_solve("{\"epochs\":[]}", nullptr, user.c_str(), "all", 0, &raw2);
  ResultPtr res2(raw2);
  if (st != BN_OK) {
    std::cerr << "error: " << bn_result_error(res2.get()) << "\n";
    return static_cast<int>(st);
  }
  std::cout << user;
  if (!user.empty() && user.back() != '\n') std::cout << '\n';
  return 0;
}

// Emit result payloads: JSON to stdout (or DIR/report.json), table on
// request, artifacts into --out DIR.
int emit(const ResultPtr& res, bn_status st, const std::string& out_dir, bool want_table) {
  if (!res) {
    std::cerr << "error: out of memory\n";
    return 1;
  }
  if (st != BN_OK) {
    std::cerr << "error: " << bn_result_error(res.get()) << "\n";
    return static_cast<int>(st);
  }
  const char* json = bn_result_json(res.get());
  const char* table = bn_result_table(res.get());
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create '" << out_dir << "': " << ec.message() << "\n";
      return 1;
    }
    if (json) write_file(fs::path(out_dir) / "report.json", json);
    if (table) write_file(fs::path(out_dir) / "report.txt", table);
    for (size_t i = 0; i < bn_result_artifact_count(res.get()); ++i)
      write_file(fs::path(out_dir) / bn_result_artifact_name(res.get(), i),
                 bn_result_artifact_content(res.get(), i));
  } else {
    if (json) std::cout << json;
    for (size_t i = 0; i < bn_result_artifact_count(res.get()); ++i) {
      // Without --out, artifacts land in the working directory.
      write_file(bn_result_artifact_name(res.get(), i),
                 bn_result_artifact_content(res.get(), i));
    }
  }
  if (want_table && table) {
    (out_dir.empty() && json ? std::cout << '\n' : std::cout) << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occluder-aware GNSS positioning pipeline"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", bn_version());

  std::string config_path, out_dir;
  bool show_config = false, table = false, skyplots = false;
  app.add_option("--config", config_path, "Config JSON file (omitted = defaults)");
  app.add_flag("--print-config", show_config, "Dump the effective config and exit");
  app.add_option("--out", out_dir, "Output directory for multi-file results");
  app.add_flag("--table", table, "Print the text report table");

  // detect
  auto* detect = app.add_subcommand("detect", "Detect occluding vehicles in a point cloud");
  std::string cloud_path, cloud_format = "auto";
  detect->add_option("cloud", cloud_path, "Point cloud file (CSV or ASCII PCD)")->required();
  detect->add_option("--format", cloud_format, "csv|pcd|auto")
      ->check(CLI::IsMember({"csv", "pcd", "auto"}));

  // solve
  auto* solve = app.add_subcommand("solve", "Position solutions for an epoch stream");
  std::string epochs_path, boundaries_path, method = "all";
  solve->add_option("epochs", epochs_path, "Epoch stream JSON")->required();
  solve->add_option("--boundaries", boundaries_path, "Boundary JSON from detect");
  solve->add_option("--method", method, "ls|ls-esf|wls-esf|wls-esf-ne|all")
      ->check(CLI::IsMember({"ls", "ls-esf", "wls-esf", "wls-esf-ne", "all"}));
  solve->add_flag("--skyplot", skyplots, "Render one SVG per epoch");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Synthesize epochs and compare methods");
  std::string scenario_path;
  std::size_t n_epochs = 100;
  bool emit_epochs = false;
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--epochs", n_epochs, "Number of epochs to generate");
  simulate->add_flag("--emit-epochs", emit_epochs, "Also write the generated epoch stream");
  simulate->add_flag("--skyplot", skyplots, "Render a skyplot for the first epoch");

  // skyplot
  auto* skyplot = app.add_subcommand("skyplot", "Render a skyplot for one epoch");
  std::string sp_epochs_path, sp_boundaries_path;
  std::size_t epoch_index = 0;
  skyplot->add_option("epochs", sp_epochs_path, "Epoch stream JSON")->required();
  skyplot->add_option("--boundaries", sp_boundaries_path, "Boundary JSON from detect");
  skyplot->add_option("--index", epoch_index, "Epoch index (0-based)");

  // Let the global flags (--config/--out/--table/...) appear after the
  // subcommand name as well.
  for (auto* sub : {detect, solve, simulate, skyplot}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (show_config) return print_config(config_path);
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  const std::string config = load_config(config_path);
  bn_result* raw = nullptr;
  bn_status st = BN_OK;

  if (*detect) {
    const std::string cloud = read_file(cloud_path);
    st = bn_detect(cloud.c_str(), cloud_format.c_str(),
                   config.empty() ? nullptr : config.c_str(), &raw);
  } else if (*solve) {
    const std::string epochs = read_file(epochs_path);
    const std::string boundaries =
        boundaries_path.empty() ? std::string() : read_file(boundaries_path);
    st = bn_solve(epochs.c_str(), boundaries.empty() ? nullptr : boundaries.c_str(),
                  config.empty() ? nullptr : config.c_str(), method.c_str(),
                  skyplots ? 1 : 0, &raw);
  } else if (*simulate) {
    const std::string scenario = read_file(scenario_path);
    st = bn_simulate(scenario.c_str(), n_epochs, config.empty() ? nullptr : config.c_str(),
                     emit_epochs ? 1 : 0, skyplots ? 1 : 0, &raw);
  } else if (*skyplot) {
    const std::string epochs = read_file(sp_epochs_path);
    const std::string boundaries =
        sp_boundaries_path.empty() ? std::string() : read_file(sp_boundaries_path);
    st = bn_skyplot(epochs.c_str(), boundaries.empty() ? nullptr : boundaries.c_str(),
                    config.empty() ? nullptr : config.c_str(), epoch_index, &raw);
  }

  ResultPtr res(raw);
  return emit(res, st, out_dir, table);
}
