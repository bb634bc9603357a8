/*
 * Copyright 2026 The a2g-los Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the a2g-los library: line-of-sight probability of
 * air-to-ground links over statistically described cities.
 *
 * Conventions
 *  - Every function except a2g_version / a2g_last_error returns an
 *    a2g_status; results come back through out-pointers.
 *  - On failure the message is available from a2g_last_error() on the same
 *    thread until the next failing call on that thread.
 *  - Handles are opaque, created by *_create / *_load / *_build functions
 *    and released with the matching *_free (NULL is accepted).
 *  - Text export follows the two-call pattern: pass buf = NULL to get the
 *    required size (excluding the terminating NUL) in *len.
 *  - Lengths are meters, angles radians, frequencies hertz.
 */
#ifndef A2G_LOS_H
#define A2G_LOS_H

#include <stddef.h>
#include <stdint.h>

#if defined(A2G_LOS_BUILDING)
#define A2G_API __attribute__((visibility("default")))
#else
#define A2G_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum a2g_status {
  A2G_OK = 0,
  A2G_ERR_DOMAIN = 1,      /* argument outside the operation's domain */
  A2G_ERR_PARSE = 2,       /* malformed text input */
  A2G_ERR_IO = 3,          /* file could not be read or written */
  A2G_ERR_GEOMETRY = 4,    /* inconsistent scene parameters */
  A2G_ERR_FIT = 5,         /* training / fitting failure */
  A2G_ERR_NOT_FOUND = 6,   /* unknown scenario name */
  A2G_ERR_NO_CROSSING = 7, /* threshold never crossed in the search range */
  A2G_ERR_NULL = 8,        /* required pointer argument was NULL */
  A2G_ERR_BUFFER = 9,      /* caller buffer too small; *len holds the size */
  A2G_ERR_INTERNAL = 99
} a2g_status;

typedef struct a2g_environment {
  double alpha; /* built-up land fraction, (0, 1] */
  double beta;  /* buildings per km^2 */
  double gamma; /* Rayleigh height scale, m */
} a2g_environment;

typedef struct a2g_link {
  double h_tx;
  double h_rx;
  double d_rx;
} a2g_link;

/* wavelength 0 means infinite frequency (no Fresnel clearance). */
typedef struct a2g_fresnel {
  double wavelength;
  int order;
} a2g_fresnel;

typedef struct a2g_fresnel_axes {
  double x_semi;
  double y_semi;
  double z_semi;
} a2g_fresnel_axes;

typedef struct a2g_approx_params {
  double d1;
  double d2;
} a2g_approx_params;

typedef enum a2g_target { A2G_TARGET_D1 = 0, A2G_TARGET_D2 = 1 } a2g_target;
typedef enum a2g_param_source { A2G_SOURCE_RETRAINED = 0, A2G_SOURCE_TABLE1 = 1 } a2g_param_source;
typedef enum a2g_layout {
  A2G_LAYOUT_GRID = 0,
  A2G_LAYOUT_UNIFORM = 1,
  A2G_LAYOUT_UNIFORM_DISJOINT = 2
} a2g_layout;

typedef struct a2g_scenarios a2g_scenarios;
typedef struct a2g_mlp a2g_mlp;
typedef struct a2g_dataset a2g_dataset;
typedef struct a2g_scene a2g_scene;

/* ---- library ------------------------------------------------------------ */

A2G_API const char* a2g_version(void);
A2G_API const char* a2g_last_error(void);
/* 0 = hardware concurrency. Results never depend on this value. */
A2G_API void a2g_set_thread_count(unsigned n);
A2G_API unsigned a2g_thread_count(void);
/* Stream seed used for realization `stream` of a seeded run (splitmix64). */
A2G_API uint64_t a2g_derive_seed(uint64_t seed, uint64_t stream);

/* ---- geometry ----------------------------------------------------------- */

A2G_API a2g_status a2g_wavelength_from_frequency(double frequency_hz, double* wavelength);
A2G_API a2g_status a2g_fresnel_axes_of(a2g_fresnel spec, double d_rx, a2g_fresnel_axes* out);
A2G_API a2g_status a2g_fresnel_radius_at(a2g_fresnel spec, double d_rx, double d_los, double* out);
A2G_API a2g_status a2g_allowed_height(a2g_link link, a2g_fresnel spec, double d_los, double* out);
A2G_API a2g_status a2g_elevation_angle(a2g_link link, double* out);

/* ---- environment -------------------------------------------------------- */

A2G_API a2g_status a2g_height_pdf(double gamma, double h, double* out);
A2G_API a2g_status a2g_height_cdf(double gamma, double h, double* out);
A2G_API a2g_status a2g_building_count(a2g_environment env, double d_rx, long* out);
A2G_API a2g_status a2g_mean_width(a2g_environment env, double* out);
/* width < 0 selects the mean width of env. */
A2G_API a2g_status a2g_building_position(a2g_environment env, double d_rx, long i, double width,
                                         double* out);

A2G_API a2g_status a2g_scenarios_load(const char* path, a2g_scenarios** out);
A2G_API a2g_status a2g_scenarios_parse(const char* text, a2g_scenarios** out);
A2G_API void a2g_scenarios_free(a2g_scenarios* table);
A2G_API size_t a2g_scenarios_count(const a2g_scenarios* table);
/* *name stays valid while the table lives. */
A2G_API a2g_status a2g_scenarios_at(const a2g_scenarios* table, size_t index, const char** name,
                                    a2g_environment* env);
/* A2G_ERR_NOT_FOUND for unknown names; see ScenarioTable::find for matching. */
A2G_API a2g_status a2g_scenarios_find(const a2g_scenarios* table, const char* name,
                                      const char** canonical_name, a2g_environment* env);

/* ---- analytic model ----------------------------------------------------- */

/* width_override: NULL keeps the mean width of env. */
A2G_API a2g_status a2g_p_los_baseline(a2g_link link, a2g_environment env, double* out);
A2G_API a2g_status a2g_p_los(a2g_link link, a2g_environment env, a2g_fresnel spec,
                             const double* width_override, double* out);
A2G_API a2g_status a2g_p_los_curve(double h_tx, double h_rx, a2g_environment env, a2g_fresnel spec,
                                   const double* width_override, const double* d_grid, size_t n,
                                   double* out);
/* max_range <= 0 selects 20 km. A2G_ERR_NO_CROSSING if never below threshold. */
A2G_API a2g_status a2g_max_comm_distance(double h_tx, double h_rx, a2g_environment env,
                                         a2g_fresnel spec, const double* width_override,
                                         double threshold, double max_range, double* out);
A2G_API a2g_status a2g_p_los_vs_elevation(a2g_environment env, a2g_fresnel spec, double h_tx,
                                          double h_rx, const double* width_override,
                                          const double* angles, size_t n, double* out);
/* Smallest x beyond which every sample has p >= threshold (interpolated). */
A2G_API a2g_status a2g_threshold_crossing(const double* xs, const double* ps, size_t n,
                                          double threshold, double* out);

/* ---- parametric model and networks ------------------------------------- */

A2G_API a2g_status a2g_p_los_approx(double d_rx, a2g_approx_params params, double* out);

A2G_API a2g_status a2g_mlp_load(const char* path, a2g_mlp** out);
A2G_API a2g_status a2g_mlp_parse(const char* text, a2g_mlp** out);
A2G_API a2g_status a2g_mlp_table1(const char* scenario, a2g_target target, a2g_mlp** out);
A2G_API void a2g_mlp_free(a2g_mlp* mlp);
A2G_API a2g_status a2g_mlp_forward(const a2g_mlp* mlp, double delta_h, double* out);
A2G_API a2g_status a2g_mlp_to_text(const a2g_mlp* mlp, char* buf, size_t cap, size_t* len);
/* d1_net / d2_net are required for A2G_SOURCE_RETRAINED and ignored
   otherwise. *warning (may be NULL) receives a caveat string or "", valid
   until the next call of this function on the same thread. */
A2G_API a2g_status a2g_params_for_scenario(const a2g_scenarios* table, const char* scenario,
                                           double delta_h, a2g_param_source source,
                                           const a2g_mlp* d1_net, const a2g_mlp* d2_net,
                                           a2g_approx_params* out, const char** warning);

/* ---- fitting ------------------------------------------------------------ */

typedef struct a2g_train_config {
  size_t hidden;        /* 4 */
  double learning_rate; /* 0.05 */
  int epochs;           /* 20000 */
  double eta;           /* 0 */
  uint64_t seed;        /* 1 */
  double lr_growth;     /* 1.05 */
} a2g_train_config;

typedef struct a2g_train_report {
  int epochs_run;
  int best_epoch;
  double train_rmse;
  double validate_rmse;
  double final_learning_rate;
} a2g_train_report;

typedef struct a2g_approx_summary {
  double mse;
  double max_abs;
  double mean_abs;
} a2g_approx_summary;

A2G_API a2g_train_config a2g_train_config_default(void);

A2G_API a2g_status a2g_dataset_build(a2g_environment env, a2g_fresnel spec, double h_rx,
                                     const double* delta_h_grid, size_t n_dh,
                                     const double* d_grid, size_t n_d, a2g_dataset** out);
A2G_API a2g_status a2g_dataset_load(const char* path, a2g_dataset** out);
A2G_API void a2g_dataset_free(a2g_dataset* ds);
A2G_API size_t a2g_dataset_size(const a2g_dataset* ds);
/* residual_mse may be NULL. */
A2G_API a2g_status a2g_dataset_record(const a2g_dataset* ds, size_t index, double* delta_h,
                                      double* d1, double* d2, double* residual_mse);
/* Height differences dropped during the build (curve never below 1). */
A2G_API size_t a2g_dataset_rejected_count(const a2g_dataset* ds);
A2G_API a2g_status a2g_dataset_rejected(const a2g_dataset* ds, size_t index, double* delta_h,
                                        const char** reason);
A2G_API a2g_status a2g_dataset_to_csv(const a2g_dataset* ds, char* buf, size_t cap, size_t* len);
/* 70/30 partition with config.seed, then training on the 70% part. */
A2G_API a2g_status a2g_train(const a2g_dataset* ds, a2g_target target,
                             const a2g_train_config* config, a2g_mlp** out,
                             a2g_train_report* report);
A2G_API a2g_status a2g_rmse(const a2g_mlp* mlp, const a2g_dataset* ds, a2g_target target,
                            double* out);
/* Per-height arrays (length n_dh) may be NULL. */
A2G_API a2g_status a2g_evaluate_approx(a2g_environment env, a2g_fresnel spec, double h_rx,
                                       const a2g_mlp* d1_net, const a2g_mlp* d2_net,
                                       const double* delta_h_grid, size_t n_dh,
                                       const double* d_grid, size_t n_d,
                                       a2g_approx_summary* summary, double* row_mse,
                                       double* row_max_abs);

/* ---- ray-tracing Monte-Carlo -------------------------------------------- */

typedef struct a2g_building {
  double center_x;
  double center_y;
  double width;
  double height;
} a2g_building;

typedef struct a2g_sim_options {
  double extent;     /* 0 = 2 * max(d) + 100 m */
  a2g_layout layout; /* A2G_LAYOUT_GRID */
  int fresnel;       /* nonzero: Fresnel clearance, zero: optical path */
} a2g_sim_options;

typedef struct a2g_sim_point {
  double d;
  double p;
  double ci_halfwidth;
  long links;
} a2g_sim_point;

A2G_API a2g_status a2g_scene_synthesize(a2g_environment env, double extent, uint64_t seed,
                                        a2g_layout layout, a2g_scene** out);
A2G_API void a2g_scene_free(a2g_scene* scene);
A2G_API size_t a2g_scene_building_count(const a2g_scene* scene);
A2G_API size_t a2g_scene_triangle_count(const a2g_scene* scene);
A2G_API a2g_status a2g_scene_building(const a2g_scene* scene, size_t index, a2g_building* out);
A2G_API a2g_status a2g_scene_to_csv(const a2g_scene* scene, char* buf, size_t cap, size_t* len);

/* origin/direction/vertices are xyz triples. *hit = 0 on a miss; s, u, v
   (may be NULL) are written on a hit. */
A2G_API a2g_status a2g_ray_triangle_intersect(const double origin[3], const double direction[3],
                                              const double v0[3], const double v1[3],
                                              const double v2[3], int* hit, double* s, double* u,
                                              double* v);
A2G_API a2g_status a2g_los_blocked_geometric(const a2g_scene* scene, const double tx[3],
                                             const double rx[3], int* blocked);
A2G_API a2g_status a2g_los_blocked_fresnel(const a2g_scene* scene, const double tx[3],
                                           const double rx[3], a2g_fresnel spec, int* blocked);

A2G_API a2g_sim_options a2g_sim_options_default(void);
/* out must hold n points, returned in d_grid order. */
A2G_API a2g_status a2g_estimate_p_los(a2g_environment env, a2g_fresnel spec, double h_tx,
                                      double h_rx, const double* d_grid, size_t n,
                                      int realizations, int links_per_ring, uint64_t seed,
                                      const a2g_sim_options* options, a2g_sim_point* out);

#ifdef __cplusplus
}
#endif

#endif /* A2G_LOS_H */
