// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "doctest.h"
#include "twistlab/twistlab.h"

TEST_CASE("version and status strings") {
  CHECK(std::strlen(twl_version()) > 0);
  CHECK(std::string(twl_status_string(TWL_OK)) == "ok");
  CHECK(std::string(twl_status_string(TWL_ERR_CONFIG)) == "configuration error");
  CHECK(std::string(twl_config_keys()).find("eps") != std::string::npos);
  CHECK(std::string(twl_subcommands()).find("random-exact") != std::string::npos);
}

TEST_CASE("context lifecycle and config access") {
  twl_context* ctx = nullptr;
  REQUIRE(twl_context_create(&ctx) == TWL_OK);
  CHECK(twl_config_set(ctx, "eps", "0.3") == TWL_OK);
  char buf[8];
  size_t needed = 0;
  CHECK(twl_config_get(ctx, "eps", buf, sizeof buf, &needed) == TWL_OK);
  CHECK(std::string(buf) == "0.3");
  CHECK(needed == 4);
  CHECK(twl_config_get(ctx, "matrix", buf, 4, &needed) == TWL_OK);
  CHECK(std::string(buf) == "2,0");
  CHECK(needed == 10);
  CHECK(twl_config_set(ctx, "bogus", "1") == TWL_ERR_CONFIG);
  CHECK(std::string(twl_last_error(ctx)).find("bogus") != std::string::npos);
  CHECK(twl_config_set(ctx, nullptr, "1") == TWL_ERR_INVALID_ARGUMENT);
  CHECK(twl_config_load_file(ctx, "/nonexistent/file.cfg") == TWL_ERR_CONFIG);
  CHECK(twl_run(ctx, "no-such-command") == TWL_ERR_CONFIG);

  char dir[] = "/tmp/twistlab_capi_XXXXXX";
  REQUIRE(mkdtemp(dir) != nullptr);
  CHECK(twl_config_set(ctx, "output_dir", dir) == TWL_OK);
  CHECK(twl_run(ctx, "random-exact") == TWL_OK);
  CHECK(std::string(twl_summary(ctx)).find("R=0.0547518") != std::string::npos);
  const std::string csv = std::string(dir) + "/random_exact.csv";
  CHECK(twl_config_set(ctx, "file", csv.c_str()) == TWL_OK);
  CHECK(twl_run(ctx, "verify") == TWL_OK);
  std::remove(csv.c_str());
  std::remove(dir);
  twl_context_destroy(ctx);
  twl_context_destroy(nullptr);
  CHECK(twl_context_create(nullptr) == TWL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("random numbers") {
  twl_rng *a = nullptr, *b = nullptr;
  REQUIRE(twl_rng_create(3, 1, &a) == TWL_OK);
  REQUIRE(twl_rng_create(3, 1, &b) == TWL_OK);
  for (int i = 0; i < 10; ++i) {
    double x = 0, y = 1;
    twl_rng_uniform(a, &x);
    twl_rng_uniform(b, &y);
    CHECK(x == y);
    CHECK((x >= 0 && x < 1));
  }
  double q[4];
  CHECK(twl_rng_haar(a, q) == TWL_OK);
  CHECK(std::abs(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3] - 1) < 1e-12);
  CHECK(twl_rng_uniform(nullptr, q) == TWL_ERR_INVALID_ARGUMENT);
  twl_rng_destroy(a);
  twl_rng_destroy(b);
}

TEST_CASE("numerics through the C interface") {
  double v = 0, err = 0, k = 0;
  CHECK(twl_solve_kepler(1.0, &v) == TWL_OK);
  CHECK(std::abs(v - std::sin(v) - 1.0) < 1e-12);
  CHECK(twl_solve_kepler(-1.0, &v) == TWL_ERR_DOMAIN);
  CHECK(std::strlen(twl_error_message()) > 0);

  CHECK(twl_random_exponent(0.3, &v, &err) == TWL_OK);
  CHECK(std::abs(v - 0.0547518) < 1e-6);
  CHECK(twl_random_exponent_series(0.3, 0, &v) == TWL_OK);
  CHECK(twl_random_exponent_series(0.3, 7, &v) == TWL_ERR_INVALID_ARGUMENT);
  CHECK(twl_random_exponent_mc(0.0, 10, 10, 1, 1, &v, &err, &k) == TWL_OK);
  CHECK(v == 0.0);

  const double diag[4] = {2, 0, 0, 0.5};
  CHECK(twl_avila_bochi(diag, &v) == TWL_OK);
  CHECK(std::abs(v - std::log(1.25)) < 1e-14);
  CHECK(twl_lambda_of_coset(diag, 16384, &v) == TWL_OK);
  CHECK(std::abs(v - std::log(1.25)) < 1e-4);
  const double bad[4] = {2, 0, 0, 1};
  CHECK(twl_avila_bochi(bad, &v) == TWL_ERR_DOMAIN);

  CHECK(twl_max_eigenvalue(2.0, &v) == TWL_OK);
  CHECK(std::abs(v - 6.4385) < 1e-4);
  CHECK(twl_fixed_point_function(0.3, 0.3, 2.0, 0.0, &v) == TWL_OK);
  CHECK(std::abs(v) < 1e-15);

  size_t count = 0;
  CHECK(twl_find_fixed_points(0.1, 3.14159, 0.1, nullptr, 0, &count) == TWL_OK);
  CHECK(count == 2);
  twl_fixed_point pts[4];
  CHECK(twl_find_fixed_points(0.1, 3.14159, 0.1, pts, 4, &count) == TWL_OK);
  for (size_t i = 0; i < count; ++i) {
    const auto& p = pts[i];
    CHECK(std::abs(std::hypot(p.location[0], p.location[1], p.location[2]) - 1) < 1e-12);
    CHECK((p.stability == 'E' || p.stability == 'H' || p.stability == 'R'));
  }
  CHECK(twl_find_fixed_points(0.1, 3.14159, 0.1, nullptr, 4, &count) == TWL_ERR_INVALID_ARGUMENT);
}
