// Copyright (C) 2026 The critsplit Authors
// SPDX-License-Identifier: Apache-2.0
//

/* Stable C interface. Every call returns a status code; on failure a message for the
 * calling thread is available from critsplit_last_error(). Handles are opaque and are
 * released with the matching *_free function (NULL is accepted). Strings returned
 * through char** are owned by the caller and released with critsplit_string_free.
 * Distinct handles may be used from different threads concurrently.
 */

#ifndef CRITSPLIT_CRITSPLIT_H
#define CRITSPLIT_CRITSPLIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CRITSPLIT_API __declspec(dllexport)
#else
#define CRITSPLIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum critsplit_status {
    CRITSPLIT_OK = 0,
    CRITSPLIT_E_INVALID_ARGUMENT = 1, /* NULL handle or output pointer */
    CRITSPLIT_E_DOMAIN = 2,           /* argument outside the mathematical domain */
    CRITSPLIT_E_NOT_FOUND = 3,
    CRITSPLIT_E_CONTRACT = 4,
    CRITSPLIT_E_PARSE = 5,
    CRITSPLIT_E_VALIDATION = 6,
    CRITSPLIT_E_NUMERIC = 7,
    CRITSPLIT_E_RESOURCE = 8,
    CRITSPLIT_E_BUFFER_TOO_SMALL = 9,
    CRITSPLIT_E_INTERNAL = 10
} critsplit_status;

typedef enum critsplit_tree_kind { CRITSPLIT_CTCS = 0, CRITSPLIT_DTCS = 1 } critsplit_tree_kind;

typedef enum critsplit_labels {
    CRITSPLIT_LABELS_ORDERED = 0,
    CRITSPLIT_LABELS_UNORDERED = 1,
    CRITSPLIT_LABELS_NONE = 2
} critsplit_labels;

typedef enum critsplit_policy {
    CRITSPLIT_POLICY_STRICT = 0,
    CRITSPLIT_POLICY_SKIP = 1,
    CRITSPLIT_POLICY_RESOLVE = 2
} critsplit_policy;

typedef struct critsplit_rng critsplit_rng;
typedef struct critsplit_tree critsplit_tree;
typedef struct critsplit_fringe critsplit_fringe;
typedef struct critsplit_shape_table critsplit_shape_table;
typedef struct critsplit_newick critsplit_newick;
typedef struct critsplit_report critsplit_report;
typedef struct critsplit_density critsplit_density;

/* Library */
CRITSPLIT_API const char* critsplit_version(void);
CRITSPLIT_API const char* critsplit_last_error(void);
CRITSPLIT_API const char* critsplit_status_name(critsplit_status status);
CRITSPLIT_API void critsplit_string_free(char* s);

/* Random streams: stream `index` of `seed` (replicate i uses index i). */
CRITSPLIT_API critsplit_status critsplit_rng_new(uint64_t seed, uint64_t index, critsplit_rng** out);
CRITSPLIT_API void critsplit_rng_free(critsplit_rng* rng);

/* Split laws */
CRITSPLIT_API critsplit_status critsplit_harmonic(int64_t m, double* out);
CRITSPLIT_API critsplit_status critsplit_split_prob(int64_t m, int64_t i, double* out);
CRITSPLIT_API critsplit_status critsplit_limit_occupation(int64_t i, double* out);

/* Trees */
CRITSPLIT_API critsplit_status critsplit_tree_sample(int64_t n, critsplit_tree_kind kind, critsplit_labels labels,
                                                     critsplit_rng* rng, critsplit_tree** out);
/* CTCS(1) with exchangeable labels, ready for growth. */
CRITSPLIT_API critsplit_status critsplit_tree_new_leaf(critsplit_tree** out);
CRITSPLIT_API critsplit_status critsplit_tree_grow(critsplit_tree* tree, int64_t steps, critsplit_rng* rng);
CRITSPLIT_API critsplit_status critsplit_tree_delete_leaf(critsplit_tree* tree, int64_t label);
CRITSPLIT_API critsplit_status critsplit_tree_leaf_count(const critsplit_tree* tree, int64_t* out);
CRITSPLIT_API critsplit_status critsplit_tree_total_length(const critsplit_tree* tree, double* out);
CRITSPLIT_API critsplit_status critsplit_tree_max_height(const critsplit_tree* tree, double* out);
CRITSPLIT_API critsplit_status critsplit_tree_leaf_height(const critsplit_tree* tree, int64_t label, double* height,
                                                          int64_t* hops);
CRITSPLIT_API critsplit_status critsplit_tree_branchpoint(const critsplit_tree* tree, int64_t label1, int64_t label2,
                                                          double* out);
/* Block sizes of the level cut at t, in least-element order; *count receives the
 * number of blocks (call with capacity 0 to query it). */
CRITSPLIT_API critsplit_status critsplit_tree_level_cut(const critsplit_tree* tree, double t, int64_t* sizes,
                                                        size_t capacity, size_t* count);
/* Leaf count of the clade of `label` alive at t. */
CRITSPLIT_API critsplit_status critsplit_tree_block_size(const critsplit_tree* tree, int64_t label, double t,
                                                         int64_t* out);
CRITSPLIT_API critsplit_status critsplit_tree_newick(const critsplit_tree* tree, int with_lengths, char** out);
CRITSPLIT_API critsplit_status critsplit_tree_json(const critsplit_tree* tree, char** out);
CRITSPLIT_API void critsplit_tree_free(critsplit_tree* tree);

/* Harmonic descent chain. Arrays are indexed from 0 and hold entries for 1..n. */
CRITSPLIT_API critsplit_status critsplit_occupation_dp(int64_t n, double* a, size_t capacity);
CRITSPLIT_API critsplit_status critsplit_mean_heights(int64_t n_max, double* t, size_t capacity);
CRITSPLIT_API critsplit_status critsplit_height_variances(int64_t n_max, double* v, size_t capacity);
CRITSPLIT_API critsplit_status critsplit_hd_simulate(int64_t n, critsplit_rng* rng, double* height, int64_t* hops);

/* Exact shape laws p(chi) for sizes 2..n_max. */
CRITSPLIT_API critsplit_status critsplit_shape_table_new(int64_t n_max, critsplit_shape_table** out);
CRITSPLIT_API size_t critsplit_shape_table_size(const critsplit_shape_table* table);
CRITSPLIT_API critsplit_status critsplit_shape_table_row(const critsplit_shape_table* table, size_t row,
                                                         const char** shape, int64_t* size, double* prob,
                                                         double* leaf_prob);
CRITSPLIT_API void critsplit_shape_table_free(critsplit_shape_table* table);

/* Fringe: upward chain from a typical leaf. */
CRITSPLIT_API critsplit_status critsplit_fringe_sample(int64_t size_cap, critsplit_rng* rng, critsplit_fringe** out);
CRITSPLIT_API size_t critsplit_fringe_steps(const critsplit_fringe* f);
CRITSPLIT_API critsplit_status critsplit_fringe_step(const critsplit_fringe* f, size_t step, int64_t* from, int64_t* to,
                                                     int* sibling_left);
/* Canonical shape of the spine clade of the given size, or "" when not visited. */
CRITSPLIT_API critsplit_status critsplit_fringe_clade_shape(const critsplit_fringe* f, int64_t size, char** out);
CRITSPLIT_API void critsplit_fringe_free(critsplit_fringe* f);

/* Partition limit */
CRITSPLIT_API critsplit_status critsplit_first_block_moment(int64_t n, int k, double t, double* out);
CRITSPLIT_API critsplit_status critsplit_moment_law(double s_re, double s_im, double t, double* re, double* im);
CRITSPLIT_API critsplit_status critsplit_jump_rate(int64_t n, int64_t i, double* out);
CRITSPLIT_API critsplit_status critsplit_dislocation_check(int64_t n, int64_t i, double* lhs, double* rhs);
CRITSPLIT_API critsplit_status critsplit_small_jump_drift(double eps, double* out);
CRITSPLIT_API critsplit_status critsplit_truncation_bias(int k, double t, double eps, double* out);
/* Y on a nondecreasing time grid for one path. */
CRITSPLIT_API critsplit_status critsplit_subordinator_path(double t_max, double eps, critsplit_rng* rng,
                                                           const double* times, size_t count, double* values);

/* Special functions */
CRITSPLIT_API critsplit_status critsplit_digamma(double re, double im, double* out_re, double* out_im);
CRITSPLIT_API critsplit_status critsplit_trigamma(double re, double im, double* out_re, double* out_im);
/* s[0..count], residues[0..count]; s[0] = 1. */
CRITSPLIT_API critsplit_status critsplit_find_roots(int count, double* s, double* residues);
CRITSPLIT_API critsplit_status critsplit_digamma_difference_integral(double s, double* out);

typedef struct critsplit_density_options {
    double x_min;   /* grid is log-spaced on [x_min, 1] */
    int bins;
    int64_t reps;
    double t_max;
    double eps;
    uint64_t seed;
    int threads;    /* 0: CRITSPLIT_THREADS or all cores */
} critsplit_density_options;

CRITSPLIT_API void critsplit_density_options_init(critsplit_density_options* options);
CRITSPLIT_API critsplit_status critsplit_density_estimate(const critsplit_density_options* options,
                                                          critsplit_density** out);
CRITSPLIT_API size_t critsplit_density_bins(const critsplit_density* d);
CRITSPLIT_API critsplit_status critsplit_density_bin(const critsplit_density* d, size_t bin, double* x_lo,
                                                     double* x_hi, double* x_mid, double* u_hat, double* std_error);
/* Mellin integral at s = 1.5, 2, 3 (index 0, 1, 2). */
CRITSPLIT_API critsplit_status critsplit_density_mellin(const critsplit_density* d, size_t index, double* s,
                                                        double* estimate, double* std_error);
CRITSPLIT_API critsplit_status critsplit_density_truncated(const critsplit_density* d, int64_t* truncated,
                                                           int64_t* reps);
CRITSPLIT_API void critsplit_density_free(critsplit_density* d);

/* Newick */
CRITSPLIT_API critsplit_status critsplit_newick_parse(const char* text, size_t length, const char* source,
                                                      critsplit_newick** out);
CRITSPLIT_API size_t critsplit_newick_tree_count(const critsplit_newick* doc);
CRITSPLIT_API size_t critsplit_newick_error_count(const critsplit_newick* doc);
/* "source: message at line:col" */
CRITSPLIT_API critsplit_status critsplit_newick_error(const critsplit_newick* doc, size_t index, char** out);
CRITSPLIT_API critsplit_status critsplit_newick_serialize(const critsplit_newick* doc, char** out);
CRITSPLIT_API void critsplit_newick_free(critsplit_newick* doc);

CRITSPLIT_API critsplit_status critsplit_shape_report(const critsplit_newick* const* docs, size_t count,
                                                      int64_t max_size, critsplit_policy policy, uint64_t seed,
                                                      critsplit_report** out);
CRITSPLIT_API critsplit_status critsplit_report_csv(const critsplit_report* report, char** out);
CRITSPLIT_API critsplit_status critsplit_report_json(const critsplit_report* report, char** out);
CRITSPLIT_API void critsplit_report_free(critsplit_report* report);

/* Threads used when 0 is requested: CRITSPLIT_THREADS, else the core count. */
CRITSPLIT_API int critsplit_resolve_threads(int requested);

#ifdef __cplusplus
}
#endif

#endif /* CRITSPLIT_CRITSPLIT_H */
