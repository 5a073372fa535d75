/*
 * Copyright 2026 The torlab Authors
 *
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

/* C interface to the torlab library. All objects are opaque handles owned by
 * the caller and released with the matching destroy function. Functions
 * return TORLAB_OK or an error status; torlab_last_error() then holds a
 * message for the calling thread. */

#ifndef TORLAB_TORLAB_H
#define TORLAB_TORLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TORLAB_BUILDING)
#    define TORLAB_API __declspec(dllexport)
#  else
#    define TORLAB_API __declspec(dllimport)
#  endif
#else
#  define TORLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum torlab_status {
  TORLAB_OK = 0,
  TORLAB_INVALID_ARGUMENT = 1,
  TORLAB_PRECONDITION = 2,
  TORLAB_BUDGET_EXHAUSTED = 3,
  TORLAB_NUMERIC = 4,
  TORLAB_IO = 5,
  TORLAB_CONFIG = 6,
  TORLAB_INTERNAL = 7
} torlab_status;

typedef enum torlab_essentiality {
  TORLAB_INESSENTIAL = 0,
  TORLAB_SIMPLY_ESSENTIAL = 1,
  TORLAB_DOUBLY_ESSENTIAL = 2
} torlab_essentiality;

typedef enum torlab_suite {
  TORLAB_SUITE_ROTATION = 0,
  TORLAB_SUITE_CHAIN = 1,
  TORLAB_SUITE_TWO_JUMP = 2,
  TORLAB_SUITE_ESSENTIAL = 3,
  TORLAB_SUITE_PERTURB = 4,
  TORLAB_SUITE_NONWANDERING = 5,
  TORLAB_SUITE_ALL = 6
} torlab_suite;

typedef struct torlab_map torlab_map;
typedef struct torlab_domain torlab_domain;
typedef struct torlab_pseudo_orbit torlab_pseudo_orbit;

TORLAB_API const char* torlab_version(void);
TORLAB_API const char* torlab_status_name(torlab_status status);
/* Message of the last failed call on this thread, "" if none. */
TORLAB_API const char* torlab_last_error(void);

/* ---- maps ---- */

TORLAB_API torlab_status torlab_map_create_rigid(double a, double b, torlab_map** out);
/* Product of two Denjoy maps with golden and silver rotation numbers. */
TORLAB_API torlab_status torlab_map_create_denjoy_product(double total_gap, double exponent, int truncation,
                                                          torlab_map** out);
/* The default skew example over the same two Denjoy maps. */
TORLAB_API torlab_status torlab_map_create_skew_example(double total_gap, double exponent, int truncation,
                                                        double amplitude, double decay, torlab_map** out);
/* Builds the map described by the "map" section of a JSON configuration. */
TORLAB_API torlab_status torlab_map_create_from_json(const char* config_json, torlab_map** out);
TORLAB_API void torlab_map_destroy(torlab_map* map);

TORLAB_API torlab_status torlab_map_eval(const torlab_map* map, double s, double t, double* out_s, double* out_t);
TORLAB_API torlab_status torlab_map_inverse(const torlab_map* map, double s, double t, double* out_s,
                                            double* out_t);
/* Displacement-average estimate after n iterates; bound is 2/n. */
TORLAB_API torlab_status torlab_map_rotation_vector(const torlab_map* map, double s, double t, int64_t n,
                                                    double* rho_s, double* rho_t, double* bound);

/* ---- box domains ---- */

TORLAB_API torlab_status torlab_domain_parse(const char* text, torlab_domain** out);
/* Writes the text form into buf when it fits; *needed receives its size
 * including the terminating NUL. */
TORLAB_API torlab_status torlab_domain_serialize(const torlab_domain* domain, char* buf, size_t size,
                                                 size_t* needed);
TORLAB_API torlab_status torlab_domain_classify(const torlab_domain* domain, torlab_essentiality* out_class,
                                                int64_t basis[4], int* rank);
TORLAB_API torlab_status torlab_domain_capture_diameter(const torlab_domain* domain, double* out);
TORLAB_API void torlab_domain_destroy(torlab_domain* domain);

/* ---- pseudo-orbits ---- */

/* Builds an epsilon pseudo-orbit with at most two jumps from x to y using the
 * default budgets. Returns TORLAB_BUDGET_EXHAUSTED when the search fails. */
TORLAB_API torlab_status torlab_two_jump(const torlab_map* map, double xs, double xt, double ys, double yt,
                                         double epsilon, int threads, torlab_pseudo_orbit** out);
TORLAB_API torlab_status torlab_pseudo_orbit_validate(const torlab_map* map, const torlab_pseudo_orbit* po,
                                                      int* valid, size_t* jump_count, double* max_step_error);
TORLAB_API size_t torlab_pseudo_orbit_length(const torlab_pseudo_orbit* po);
TORLAB_API torlab_status torlab_pseudo_orbit_point(const torlab_pseudo_orbit* po, size_t index, double* s,
                                                   double* t);
TORLAB_API torlab_status torlab_pseudo_orbit_serialize(const torlab_pseudo_orbit* po, char* buf, size_t size,
                                                       size_t* needed);
TORLAB_API torlab_status torlab_pseudo_orbit_parse(const char* text, torlab_pseudo_orbit** out);
TORLAB_API void torlab_pseudo_orbit_destroy(torlab_pseudo_orbit* po);

/* ---- experiment runner ---- */

typedef struct torlab_run_options {
  torlab_suite suite;
  const char* config_path; /* NULL for defaults */
  const char* out_dir;     /* NULL: TORLAB_OUT, then the configuration */
  int has_seed;
  uint64_t seed;
  int threads;             /* 0 keeps the configured value */
} torlab_run_options;

/* exit_code: 0 pass, 1 fail, 2 inconclusive, 3 invalid configuration. The
 * summary (one line per check) and output directory are copied into the
 * optional buffers, truncated to fit. */
TORLAB_API torlab_status torlab_run_experiment(const torlab_run_options* options, int* exit_code, char* summary,
                                               size_t summary_size, char* out_dir, size_t out_dir_size);

#ifdef __cplusplus
}
#endif

#endif /* TORLAB_TORLAB_H */
