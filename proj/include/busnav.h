/* Copyright 2026 busnav contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the busnav pipeline. All entry points return a status
 * code and, on success, an opaque result handle holding the JSON report,
 * an optional text table, and any rendered artifacts. Handles must be
 * released with bn_result_free.
 */
#ifndef BUSNAV_H
#define BUSNAV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bn_status {
  BN_OK = 0,
  BN_ERR_RUNTIME = 1, /* solve/processing failure */
  BN_ERR_INPUT = 2    /* malformed input, schema violation, bad parameter */
} bn_status;

typedef struct bn_result bn_result;

/* Detect occluding vehicles in a point cloud and report their occluding
 * top edges. `format` is "csv", "pcd" or NULL/"auto". `config_json` may be
 * NULL for defaults. On failure *out is a handle carrying only the error
 * message (still must be freed), unless allocation itself failed, in which
 * case *out is NULL. */
bn_status bn_detect(const char* cloud_text, const char* format,
                    const char* config_json, bn_result** out);

/* Solve positions for a JSON epoch stream. `boundaries_json` may be NULL
 * or empty (no exclusion geometry). `method` is one of "ls", "ls-esf",
 * "wls-esf", "wls-esf-ne", or NULL/"all". `render_skyplots` != 0 adds one
 * SVG artifact per epoch. */
bn_status bn_solve(const char* epochs_json, const char* boundaries_json,
                   const char* config_json, const char* method,
                   int render_skyplots, bn_result** out);

/* Generate `epochs` synthetic epochs from a scenario and run the method
 * comparison. `emit_epochs` != 0 adds the generated stream as an
 * "epochs.json" artifact. */
bn_status bn_simulate(const char* scenario_json, size_t epochs,
                      const char* config_json, int emit_epochs,
                      int render_skyplots, bn_result** out);

/* Render a skyplot for one epoch of an epoch stream (0-based index). */
bn_status bn_skyplot(const char* epochs_json, const char* boundaries_json,
                     const char* config_json, size_t epoch_index, bn_result** out);

/* Full default configuration as a JSON document. */
bn_status bn_default_config(bn_result** out);

/* Accessors. Returned pointers are owned by the handle and valid until
 * bn_result_free. A missing field yields NULL (or an empty string for
 * bn_result_error on success). */
const char* bn_result_json(const bn_result* r);
const char* bn_result_table(const bn_result* r);
const char* bn_result_error(const bn_result* r);
size_t bn_result_artifact_count(const bn_result* r);
const char* bn_result_artifact_name(const bn_result* r, size_t index);
const char* bn_result_artifact_content(const bn_result* r, size_t index);

void bn_result_free(bn_result* r);

/* Library version, "major.minor.patch". */
const char* bn_version(void);

#ifdef __cplusplus
}
#endif

#endif /* BUSNAV_H */
