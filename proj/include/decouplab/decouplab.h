/* Copyright 2026 The decouplab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DECOUPLAB_DECOUPLAB_H
#define DECOUPLAB_DECOUPLAB_H

/* C interface to decouplab: numerical exponent experiments for refined
 * decoupling on a sum of free Schrodinger wave packets.
 *
 * Handles are opaque. Every function returning dl_status leaves a message for
 * the failing call in dl_last_error() (per thread). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * dl_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DECOUPLAB_BUILDING)
#    define DL_API __declspec(dllexport)
#  else
#    define DL_API __declspec(dllimport)
#  endif
#else
#  define DL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2 and 3 coincide with the CLI exit codes for config and budget
 * errors. */
typedef enum dl_status {
  DL_OK = 0,
  DL_ERR_CONFIG = 2,
  DL_ERR_BUDGET = 3,
  DL_ERR_HYPOTHESIS = 4, /* a hypothesis of the tested inequality failed */
  DL_ERR_NUMERIC = 5,
  DL_ERR_IO = 6,
  DL_ERR_ARGUMENT = 7, /* null handle or pointer */
  DL_ERR_INTERNAL = 8
} dl_status;

typedef struct dl_session dl_session;
typedef struct dl_record dl_record;

typedef void (*dl_progress_fn)(const char* line, void* user);

typedef struct dl_fit {
  double slope;
  double intercept;
  double max_residual;
  double predicted;
  int pass;
} dl_fit;

DL_API const char* dl_version(void);
DL_API const char* dl_last_error(void);
DL_API const char* dl_status_name(dl_status status);
DL_API void dl_string_free(char* s);

/* Session: a validated run configuration (JSON text, see README). */
DL_API dl_status dl_session_create(const char* config_json, dl_session** out);
DL_API void dl_session_destroy(dl_session* session);
DL_API dl_status dl_session_set_progress(dl_session* session, dl_progress_fn fn, void* user);
/* Canonical config with defaults filled in. */
DL_API dl_status dl_session_config(const dl_session* session, char** out_json);
/* 64 hex digits plus terminator. */
DL_API dl_status dl_session_config_hash(const dl_session* session, const char* campaign,
                                        char out[65]);
/* Number of campaigns listed in the config and the name of the i-th. */
DL_API size_t dl_session_campaign_count(const dl_session* session);
DL_API const char* dl_session_campaign_name(const dl_session* session, size_t i);
/* Estimated phase evaluations for a campaign. */
DL_API dl_status dl_session_estimate_cost(const dl_session* session, const char* campaign,
                                          double* out);

/* Runs "amplitude", "decouple" or "corollary", consulting the cache unless
 * the config sets noCache. */
DL_API dl_status dl_session_run(dl_session* session, const char* campaign, dl_record** out);

/* g at `count` points of R^d (row-major, count * d doubles) at the first R of
 * the config. Points must satisfy |x| <= R. */
DL_API dl_status dl_session_evaluate(const dl_session* session, const double* points,
                                     size_t count, double* out_re, double* out_im);
DL_API int dl_session_dimension(const dl_session* session);

DL_API int dl_record_passed(const dl_record* record);
DL_API int dl_record_cache_hit(const dl_record* record);
DL_API double dl_record_wall_clock(const dl_record* record);
DL_API dl_status dl_record_to_json(const dl_record* record, int include_timing, char** out);
DL_API dl_status dl_record_to_csv(const dl_record* record, int include_header, char** out);
/* Human-readable report: one line per R, then fits and hypothesis checks. */
DL_API dl_status dl_record_summary(const dl_record* record, char** out);
DL_API dl_status dl_record_from_json(const char* json, dl_record** out);
DL_API void dl_record_destroy(dl_record* record);

DL_API const char* dl_csv_header(void);

/* Least-squares slope of log(values) against log(R). */
DL_API dl_status dl_fit_exponent(const double* R, const double* values, size_t count,
                                 double predicted, double tol, double eps_slack, dl_fit* out);

/* Cache maintenance. A null dir means the default resolution
 * (DECOUPLAB_CACHE_DIR, then ".decouplab-cache"). */
DL_API dl_status dl_cache_list(const char* dir, char** out_json);
DL_API dl_status dl_cache_clear(const char* dir, size_t* removed);

#ifdef __cplusplus
}
#endif

#endif /* DECOUPLAB_DECOUPLAB_H */
