// SPDX-License-Identifier: Apache-2.0
#include "twistlab/twistlab.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "exponents.hpp"
#include "fixedpoints.hpp"
#include "linear.hpp"
#include "run.hpp"

struct twl_context {
  twistlab::Config config;
  std::string summary;
  std::string error;
};

struct twl_rng {
  twistlab::Philox gen;
};

namespace {

thread_local std::string g_error;

// Runs f, translating exceptions into status codes and storing the message.
template <class F>
twl_status guarded(std::string& err, F&& f) {
  try {
    f();
    err.clear();
    return TWL_OK;
  } catch (const twistlab::ConfigError& e) {
    err = e.what();
    return TWL_ERR_CONFIG;
  } catch (const twistlab::NumericError& e) {
    err = e.what();
    return TWL_ERR_NUMERIC;
  } catch (const twistlab::DomainError& e) {
    err = e.what();
    return TWL_ERR_DOMAIN;
  } catch (const std::bad_alloc&) {
    err = "out of memory";
    return TWL_ERR_INTERNAL;
  } catch (const std::runtime_error& e) {
    err = e.what();
    return TWL_ERR_IO;
  } catch (const std::exception& e) {
    err = e.what();
    return TWL_ERR_INTERNAL;
  } catch (...) {
    err = "unknown error";
    return TWL_ERR_INTERNAL;
  }
}

template <class F>
twl_status guarded(F&& f) {
  return guarded(g_error, std::forward<F>(f));
}

twl_status null_argument(std::string& err) {
  err = "null argument";
  return TWL_ERR_INVALID_ARGUMENT;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

twistlab::Matrix2 matrix_from(const double m[4]) { return {m[0], m[1], m[2], m[3]}; }

}  // namespace

extern "C" {

const char* twl_version(void) { return TWISTLAB_VERSION; }

const char* twl_status_string(twl_status s) {
  switch (s) {
    case TWL_OK: return "ok";
    case TWL_ERR_IO: return "i/o error";
    case TWL_ERR_CONFIG: return "configuration error";
    case TWL_ERR_NUMERIC: return "numeric failure";
    case TWL_ERR_DOMAIN: return "argument outside domain";
    case TWL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TWL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* twl_error_message(void) { return g_error.c_str(); }

twl_status twl_context_create(twl_context** out) {
  if (!out) return null_argument(g_error);
  return guarded([&] { *out = new twl_context(); });
}

void twl_context_destroy(twl_context* ctx) { delete ctx; }

const char* twl_config_keys(void) {
  static const std::string keys = join(twistlab::Config::keys());
  return keys.c_str();
}

const char* twl_subcommands(void) {
  static const std::string names = join(twistlab::subcommands());
  return names.c_str();
}

twl_status twl_config_set(twl_context* ctx, const char* key, const char* value) {
  if (!ctx) return null_argument(g_error);
  if (!key || !value) return null_argument(ctx->error);
  return guarded(ctx->error, [&] { ctx->config.set(key, value); });
}

twl_status twl_config_load_file(twl_context* ctx, const char* path) {
  if (!ctx) return null_argument(g_error);
  if (!path) return null_argument(ctx->error);
  return guarded(ctx->error, [&] { ctx->config.load_file(path); });
}

twl_status twl_config_get(const twl_context* ctx, const char* key, char* buf, size_t len, size_t* needed) {
  if (!ctx || !key) return null_argument(g_error);
  return guarded([&] {
    const std::string& v = ctx->config.raw(key);
    if (needed) *needed = v.size() + 1;
    if (buf && len > 0) {
      const size_t n = std::min(len - 1, v.size());
      std::memcpy(buf, v.data(), n);
      buf[n] = '\0';
    }
  });
}

twl_status twl_run(twl_context* ctx, const char* subcommand) {
  if (!ctx) return null_argument(g_error);
  if (!subcommand) return null_argument(ctx->error);
  ctx->summary.clear();
  return guarded(ctx->error, [&] {
    std::ostringstream out;
    twistlab::run(subcommand, ctx->config, out);
    ctx->summary = out.str();
  });
}

const char* twl_summary(const twl_context* ctx) { return ctx ? ctx->summary.c_str() : ""; }
const char* twl_last_error(const twl_context* ctx) { return ctx ? ctx->error.c_str() : g_error.c_str(); }

twl_status twl_rng_create(uint64_t seed, uint64_t stream, twl_rng** out) {
  if (!out) return null_argument(g_error);
  return guarded([&] { *out = new twl_rng{twistlab::Philox(seed, stream)}; });
}

void twl_rng_destroy(twl_rng* rng) { delete rng; }

twl_status twl_rng_uniform(twl_rng* rng, double* out) {
  if (!rng || !out) return null_argument(g_error);
  *out = rng->gen.uniform();
  return TWL_OK;
}

twl_status twl_rng_haar(twl_rng* rng, double quaternion[4]) {
  if (!rng || !quaternion) return null_argument(g_error);
  return guarded([&] {
    const auto q = twistlab::sample_haar(rng->gen).rotation.quaternion();
    for (int i = 0; i < 4; ++i) quaternion[i] = q[static_cast<size_t>(i)];
  });
}

twl_status twl_solve_kepler(double z, double* theta) {
  if (!theta) return null_argument(g_error);
  return guarded([&] { *theta = twistlab::solve_kepler(z); });
}

twl_status twl_random_exponent(double eps, double* value, double* error_bound) {
  if (!value) return null_argument(g_error);
  return guarded([&] {
    const auto e = twistlab::random_exponent_quadrature(eps);
    *value = e.value;
    if (error_bound) *error_bound = e.std_error;
  });
}

twl_status twl_random_exponent_series(double eps, int regime, double* value) {
  if (!value) return null_argument(g_error);
  if (regime != 0 && regime != 1) {
    g_error = "regime must be 0 (small) or 1 (large)";
    return TWL_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *value = twistlab::random_exponent_series(eps, regime == 0 ? twistlab::SeriesRegime::small
                                                               : twistlab::SeriesRegime::large);
  });
}

twl_status twl_random_exponent_mc(double eps, long n_iterates, long n_samples, uint64_t seed, int threads,
                                  double* value, double* std_error, double* kappa) {
  if (!value) return null_argument(g_error);
  return guarded([&] {
    const auto e = twistlab::random_exponent_montecarlo(eps, n_iterates, n_samples, seed, threads);
    *value = e.value;
    if (std_error) *std_error = e.std_error;
    if (kappa) *kappa = e.kappa;
  });
}

twl_status twl_avila_bochi(const double m[4], double* value) {
  if (!m || !value) return null_argument(g_error);
  return guarded([&] { *value = twistlab::avila_bochi(matrix_from(m)); });
}

twl_status twl_lambda_of_coset(const double m[4], int n_phi, double* value) {
  if (!m || !value) return null_argument(g_error);
  return guarded([&] { *value = twistlab::lambda_of_coset(matrix_from(m), n_phi); });
}

twl_status twl_max_eigenvalue(double eps, double* value) {
  if (!value) return null_argument(g_error);
  return guarded([&] { *value = twistlab::max_eigenvalue(eps); });
}

twl_status twl_fixed_point_function(double b, double beta, double theta, double eps, double* value) {
  if (!value) return null_argument(g_error);
  *value = twistlab::fixed_point_function(b, beta, theta, eps);
  return TWL_OK;
}

twl_status twl_find_fixed_points(double beta, double theta, double eps, twl_fixed_point* out, size_t cap,
                                 size_t* count) {
  if (!count || (cap > 0 && !out)) return null_argument(g_error);
  return guarded([&] {
    const auto recs = twistlab::find_fixed_points(beta, theta, eps);
    *count = recs.size();
    for (size_t i = 0; i < recs.size() && i < cap; ++i) {
      const auto& r = recs[i];
      twl_fixed_point& o = out[i];
      o.b = r.b;
      o.location[0] = r.location.vec().x;
      o.location[1] = r.location.vec().y;
      o.location[2] = r.location.vec().z;
      o.trace = r.trace;
      o.eigenvalues[0] = r.eigenvalues[0].real();
      o.eigenvalues[1] = r.eigenvalues[0].imag();
      o.eigenvalues[2] = r.eigenvalues[1].real();
      o.eigenvalues[3] = r.eigenvalues[1].imag();
      o.stability = twistlab::to_char(r.stability);
      o.flagged = r.flagged() ? 1 : 0;
    }
  });
}

}  // extern "C"
