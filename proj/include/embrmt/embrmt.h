/* Copyright 2026 The embrmt Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef EMBRMT_EMBRMT_H_
#define EMBRMT_EMBRMT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EMBRMT_BUILDING_LIBRARY)
#    define EMBRMT_API __declspec(dllexport)
#  else
#    define EMBRMT_API __declspec(dllimport)
#  endif
#else
#  define EMBRMT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum embrmt_status {
  EMBRMT_OK = 0,
  EMBRMT_ERR_SPEC = 1,
  EMBRMT_ERR_DOMAIN = 2,
  EMBRMT_ERR_CAPACITY = 3,
  EMBRMT_ERR_CONFIG = 4,
  EMBRMT_ERR_NUMERICAL = 5,
  EMBRMT_ERR_IO = 6,
  EMBRMT_ERR_INVALID_ARGUMENT = 7,
  EMBRMT_ERR_INTERNAL = 8
} embrmt_status;

typedef struct embrmt_run_config embrmt_run_config;
typedef struct embrmt_manifest embrmt_manifest;

EMBRMT_API const char* embrmt_version(void);
EMBRMT_API const char* embrmt_status_string(embrmt_status status);

/* Message of the last failed call on this thread ("" if none). */
EMBRMT_API const char* embrmt_last_error(void);
/* Member index of the last failure when a single ensemble member failed.
 * Returns 1 and stores the index, or 0 when the failure was not member-specific. */
EMBRMT_API int embrmt_last_error_member(uint64_t* member);

/* Strings returned through char** are owned by the caller. */
EMBRMT_API void embrmt_string_free(char* s);

EMBRMT_API embrmt_status embrmt_config_new(embrmt_run_config** out);
EMBRMT_API embrmt_status embrmt_config_from_json(const char* json, embrmt_run_config** out);
EMBRMT_API embrmt_status embrmt_config_load(const char* path, embrmt_run_config** out);
EMBRMT_API void embrmt_config_free(embrmt_run_config* config);

/* Overlays the fields present in `json` onto the config. */
EMBRMT_API embrmt_status embrmt_config_merge_json(embrmt_run_config* config, const char* json);
EMBRMT_API embrmt_status embrmt_config_set_command(embrmt_run_config* config, const char* command);
EMBRMT_API embrmt_status embrmt_config_set_seed(embrmt_run_config* config, uint64_t seed);
EMBRMT_API embrmt_status embrmt_config_set_members(embrmt_run_config* config, size_t members);
EMBRMT_API embrmt_status embrmt_config_set_workers(embrmt_run_config* config, size_t workers);
EMBRMT_API embrmt_status embrmt_config_set_output_dir(embrmt_run_config* config, const char* dir);
EMBRMT_API embrmt_status embrmt_config_validate(const embrmt_run_config* config);
EMBRMT_API embrmt_status embrmt_config_to_json(const embrmt_run_config* config, char** out);
EMBRMT_API embrmt_status embrmt_config_hash(const embrmt_run_config* config, char** out);

/* Runs the configured command and writes its artifacts. */
EMBRMT_API embrmt_status embrmt_run(const embrmt_run_config* config, embrmt_manifest** out);

EMBRMT_API void embrmt_manifest_free(embrmt_manifest* manifest);
EMBRMT_API size_t embrmt_manifest_artifact_count(const embrmt_manifest* manifest);
/* NULL when the index is out of range. Valid until the manifest is freed. */
EMBRMT_API const char* embrmt_manifest_artifact_path(const embrmt_manifest* manifest, size_t i);
EMBRMT_API const char* embrmt_manifest_artifact_sha256(const embrmt_manifest* manifest, size_t i);
EMBRMT_API const char* embrmt_manifest_config_hash(const embrmt_manifest* manifest);
EMBRMT_API double embrmt_manifest_total_seconds(const embrmt_manifest* manifest);
EMBRMT_API embrmt_status embrmt_manifest_to_json(const embrmt_manifest* manifest, char** out);

/* Many-body dimension binom(ell, m) for fermions or binom(ell + m - 1, m) for bosons. */
EMBRMT_API embrmt_status embrmt_dimension(size_t ell, size_t m, int bosons, uint64_t* out);
EMBRMT_API embrmt_status embrmt_semicircle_density(double e, double radius, double* out);
EMBRMT_API embrmt_status embrmt_semicircle_cdf(double e, double radius, double* out);
EMBRMT_API embrmt_status embrmt_edgeworth_density(double x, double gamma1, double gamma2,
                                                  double* out);

#ifdef __cplusplus
}
#endif

#endif /* EMBRMT_EMBRMT_H_ */
