// Copyright 2026 busnav contributors
// SPDX-License-Identifier: Apache-2.0
#include "busnav.h"

#include <new>
#include <string>
#include <utility>
#include <vector>

#include "busnav/error.hpp"
#include "busnav/pipeline.hpp"

struct bn_result {
  std::string json;
  std::string table;
  std::string error;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

namespace {

using busnav::Error;
using busnav::pipeline::CommandOutput;

std::string as_string(const char* s) { return s ? std::string(s) : std::string(); }

// Runs `fn` (returning a CommandOutput), capturing errors into the handle.
template <typename Fn>
bn_status run(Fn&& fn, bn_result** out) {
  if (!out) return BN_ERR_INPUT;
  *out = nullptr;
  bn_result* r = new (std::nothrow) bn_result;
  if (!r) return BN_ERR_RUNTIME;
  bn_status status = BN_OK;
  try {
    CommandOutput co = fn();
    r->json = std::move(co.json);
    r->table = std::move(co.table);
    r->artifacts = std::move(co.artifacts);
  } catch (const Error& e) {
    r->error = e.what();
    status = e.is_input_error() ? BN_ERR_INPUT : BN_ERR_RUNTIME;
  } catch (const std::exception& e) {
    r->error = e.what();
    status = BN_ERR_RUNTIME;
  }
  *out = r;
  return status;
}

}  // namespace

extern "C" {

bn_status bn_detect(const char* cloud_text, const char* format,
                    const char* config_json, bn_result** out) {
  return run(
      [&] {
        if (!cloud_text)
          throw Error(busnav::ErrorCode::InvalidParameter, "cloud_text is null");
        const std::string fmt = format ? format : "auto";
        return busnav::pipeline::detect_command(cloud_text, fmt, as_string(config_json));
      },
      out);
}

bn_status bn_solve(const char* epochs_json, const char* boundaries_json,
                   const char* config_json, const char* method,
                   int render_skyplots, bn_result** out) {
  return run(
      [&] {
        if (!epochs_json)
          throw Error(busnav::ErrorCode::InvalidParameter, "epochs_json is null");
        return busnav::pipeline::solve_command(epochs_json, as_string(boundaries_json),
                                               as_string(config_json), as_string(method),
                                               render_skyplots != 0);
      },
      out);
}

bn_status bn_simulate(const char* scenario_json, size_t epochs,
                      const char* config_json, int emit_epochs,
                      int render_skyplots, bn_result** out) {
  return run(
      [&] {
        if (!scenario_json)
          throw Error(busnav::ErrorCode::InvalidParameter, "scenario_json is null");
        return busnav::pipeline::simulate_command(scenario_json, epochs, as_string(config_json),
                                                  emit_epochs != 0, render_skyplots != 0);
      },
      out);
}

bn_status bn_skyplot(const char* epochs_json, const char* boundaries_json,
                     const char* config_json, size_t epoch_index, bn_result** out) {
  return run(
      [&] {
        if (!epochs_json)
          throw Error(busnav::ErrorCode::InvalidParameter, "epochs_json is null");
        CommandOutput all = busnav::pipeline::solve_command(
            epochs_json, as_string(boundaries_json), as_string(config_json), "", true);
        const std::string want = "skyplot_" + std::to_string(epoch_index) + ".svg";
        for (auto& [name, content] : all.artifacts)
          if (name == want) {
            CommandOutput one;
            one.artifacts.emplace_back(name, std::move(content));
            return one;
          }
        throw Error(busnav::ErrorCode::InvalidParameter,
                    "epoch index " + std::to_string(epoch_index) + " out of range");
      },
      out);
}

bn_status bn_default_config(bn_result** out) {
  return run(
      [] {
        CommandOutput co;
        co.json = busnav::config::config_to_json(busnav::config::RunConfig{});
        return co;
      },
      out);
}

const char* bn_result_json(const bn_result* r) {
  return r && !r->json.empty() ? r->json.c_str() : nullptr;
}

const char* bn_result_table(const bn_result* r) {
  return r && !r->table.empty() ? r->table.c_str() : nullptr;
}

const char* bn_result_error(const bn_result* r) { return r ? r->error.c_str() : nullptr; }

size_t bn_result_artifact_count(const bn_result* r) { return r ? r->artifacts.size() : 0; }

const char* bn_result_artifact_name(const bn_result* r, size_t index) {
  return r && index < r->artifacts.size() ? r->artifacts[index].first.c_str() : nullptr;
}

const char* bn_result_artifact_content(const bn_result* r, size_t index) {
  return r && index < r->artifacts.size() ? r->artifacts[index].second.c_str() : nullptr;
}

void bn_result_free(bn_result* r) { delete r; }

const char* bn_version(void) { return "1.0.0"; }

}  // extern "C"
