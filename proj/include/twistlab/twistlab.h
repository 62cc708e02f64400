/* SPDX-License-Identifier: Apache-2.0 */
/*
 * twistlab C API.
 *
 * Every function returns a twl_status. On failure the message is available
 * from twl_last_error(ctx) for context functions, or from twl_error_message()
 * (per thread) for the free functions.
 */
#ifndef TWISTLAB_TWISTLAB_H
#define TWISTLAB_TWISTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TWISTLAB_BUILDING_LIBRARY)
#define TWL_API __declspec(dllexport)
#else
#define TWL_API __declspec(dllimport)
#endif
#else
#define TWL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twl_status {
  TWL_OK = 0,
  TWL_ERR_IO = 1,
  TWL_ERR_CONFIG = 2,
  TWL_ERR_NUMERIC = 3,
  TWL_ERR_DOMAIN = 4,
  TWL_ERR_INVALID_ARGUMENT = 5,
  TWL_ERR_INTERNAL = 6
} twl_status;

typedef struct twl_context twl_context;
typedef struct twl_rng twl_rng;

TWL_API const char* twl_version(void);
TWL_API const char* twl_status_string(twl_status s);
/* Message of the last failed free function on this thread. */
TWL_API const char* twl_error_message(void);

/* ---- experiment context ---- */

TWL_API twl_status twl_context_create(twl_context** out);
TWL_API void twl_context_destroy(twl_context* ctx);

/* Space-separated list of configuration keys / subcommands. */
TWL_API const char* twl_config_keys(void);
TWL_API const char* twl_subcommands(void);

TWL_API twl_status twl_config_set(twl_context* ctx, const char* key, const char* value);
TWL_API twl_status twl_config_load_file(twl_context* ctx, const char* path);
/* Copies the value (NUL terminated) into buf; *needed receives the full length + 1. */
TWL_API twl_status twl_config_get(const twl_context* ctx, const char* key, char* buf, size_t len, size_t* needed);

/* Runs a subcommand; its summary lines are kept until the next run. */
TWL_API twl_status twl_run(twl_context* ctx, const char* subcommand);
TWL_API const char* twl_summary(const twl_context* ctx);
TWL_API const char* twl_last_error(const twl_context* ctx);

/* ---- random numbers ---- */

TWL_API twl_status twl_rng_create(uint64_t seed, uint64_t stream, twl_rng** out);
TWL_API void twl_rng_destroy(twl_rng* rng);
TWL_API twl_status twl_rng_uniform(twl_rng* rng, double* out);
/* Haar rotation as a unit quaternion (w, x, y, z). */
TWL_API twl_status twl_rng_haar(twl_rng* rng, double quaternion[4]);

/* ---- numerics ---- */

TWL_API twl_status twl_solve_kepler(double z, double* theta);
TWL_API twl_status twl_random_exponent(double eps, double* value, double* error_bound);
/* regime 0 = small eps, 1 = large eps */
TWL_API twl_status twl_random_exponent_series(double eps, int regime, double* value);
TWL_API twl_status twl_random_exponent_mc(double eps, long n_iterates, long n_samples, uint64_t seed, int threads,
                                          double* value, double* std_error, double* kappa);
/* m = {a, b, c, d} for [[a, b], [c, d]] */
TWL_API twl_status twl_avila_bochi(const double m[4], double* value);
TWL_API twl_status twl_lambda_of_coset(const double m[4], int n_phi, double* value);
TWL_API twl_status twl_max_eigenvalue(double eps, double* value);
TWL_API twl_status twl_fixed_point_function(double b, double beta, double theta, double eps, double* value);

typedef struct twl_fixed_point {
  double b;
  double location[3];
  double trace;
  double eigenvalues[4]; /* re1, im1, re2, im2 */
  char stability;        /* 'E', 'H' or 'R' */
  int flagged;
} twl_fixed_point;

/* Writes up to cap records; *count receives the total number found. */
TWL_API twl_status twl_find_fixed_points(double beta, double theta, double eps, twl_fixed_point* out, size_t cap,
                                         size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* TWISTLAB_TWISTLAB_H */
