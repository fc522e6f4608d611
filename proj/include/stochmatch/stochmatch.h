/* Copyright 2026 The stochmatch Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STOCHMATCH_STOCHMATCH_H_
#define STOCHMATCH_STOCHMATCH_H_

#include <stdint.h>

#if defined(STOCHMATCH_BUILDING_LIBRARY)
#define SM_API __attribute__((visibility("default")))
#else
#define SM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sm_status {
  SM_OK = 0,
  SM_ERR_ARGUMENT = 1,
  SM_ERR_PARSE = 2,
  SM_ERR_INAPPLICABLE = 3,
  SM_ERR_CAP = 4,
  SM_ERR_IO = 5,
  SM_ERR_INTERNAL = 6,
  SM_ERR_TOO_LARGE = 7
} sm_status;

/* A parsed stochastic graph or known-i.d. input. */
typedef struct sm_instance sm_instance;

/* Strings returned through char** are owned by the caller and released
 * with sm_string_free. On failure the out pointer is left untouched and
 * sm_last_error describes the problem (thread-local). */

SM_API const char* sm_version(void);
SM_API const char* sm_last_error(void);
SM_API void sm_string_free(char* s);

SM_API sm_status sm_instance_from_json(const char* json, const char* id,
                                       sm_instance** out);
SM_API sm_status sm_instance_load(const char* path, sm_instance** out);
SM_API void sm_instance_free(sm_instance* inst);
SM_API int sm_instance_is_known_id(const sm_instance* inst);
SM_API sm_status sm_instance_to_json(const sm_instance* inst, char** out);

/* lp: config, config-id, std, std-unit, dp, qc. */
SM_API sm_status sm_solve_lp(const sm_instance* inst, const char* lp,
                             double* objective);
SM_API sm_status sm_solve_lp_json(const sm_instance* inst, const char* lp,
                                  char** out);

SM_API sm_status sm_brute_force_opt(const sm_instance* inst, double* out);

typedef struct sm_sim_options {
  const char* algorithm;  /* known-graph, known-id, known-id-ocrs,
                             known-id-rcrs, secretary, greedy-dp */
  const char* arrival;    /* rom, aom:<i,j,...>, aom:worst, aom:worst<k> */
  int64_t trials;
  uint64_t seed;
  int64_t screen_trials;  /* per order when searching for the worst */
  int brute_force;        /* nonzero: attach OPT(G) when small enough */
} sm_sim_options;

SM_API void sm_sim_options_init(sm_sim_options* options);

/* format: "csv" (one row, no header) or "json". */
SM_API sm_status sm_simulate(const sm_instance* inst,
                             const sm_sim_options* options,
                             const char* format, char** out);
SM_API sm_status sm_csv_header(char** out);

/* family: er-gap, nonmonotone-star, random-weighted, iid-types, id-types.
 * params_json may be NULL. */
SM_API sm_status sm_generate(const char* family, const char* params_json,
                             uint64_t seed, char** out);

/* suite: crs, rounding, lp-consistency, benchmarks. */
SM_API sm_status sm_verify(const char* suite, uint64_t seed,
                           int64_t crs_trials, int instances, int* passed,
                           char** out);

SM_API sm_status sm_gap(int n, double p, int s, int64_t trials, uint64_t seed,
                        char** out);

#ifdef __cplusplus
}
#endif

#endif /* STOCHMATCH_STOCHMATCH_H_ */
