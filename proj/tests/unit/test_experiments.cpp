// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "experiments.hpp"
#include "exponents.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace twistlab;

TEST_CASE("simpson grid") {
  CHECK_THROWS_AS(GridSpec{7}.validate(), ConfigError);
  CHECK_THROWS_AS(GridSpec{0}.validate(), ConfigError);
  CHECK_NOTHROW(GridSpec{8}.validate());
  for (int n : {8, 64}) {
    const GridSpec g{n};
    double s = 0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) s += g.weight(i, j);
    CHECK(std::abs(s - 1.0) < (n == 64 ? 1e-6 : 1e-4));
  }
  const GridSpec g{8};
  CHECK(g.theta(8) == doctest::Approx(2 * oracle::pi));
  CHECK(g.beta(8) == doctest::Approx(oracle::pi / 2));
  const Rotation r = GridSpec::rotation(1.0, 0.4);
  const Vec3 axis{std::cos(0.4), 0, std::sin(0.4)};
  CHECK(norm(r.apply(axis) - axis) < 1e-14);
  CHECK(r.canonical_angle() == doctest::Approx(1.0));
}

TEST_CASE("per-rotation exponent") {
  OrbitOptions opt;
  opt.points = 16;
  opt.iterates = 1024;
  opt.transient = 64;
  Philox rng(40, 0);
  const Rotation g = sample_haar(rng).rotation;
  const RotationStats z = lambda_for_rotation(g, 0.0, opt);
  CHECK(z.lambda == 0.0);
  CHECK(z.sigma == 0.0);

  const RotationStats id = lambda_for_rotation(Rotation::identity(), 2.0, opt);
  const double M = static_cast<double>(opt.iterates);
  CHECK(std::abs(id.lambda) < 10 * std::log(M) / M);

  opt.estimator = Estimator::classical;
  CHECK(lambda_for_rotation(g, 0.0, opt).lambda == 0.0);
  opt.estimator = Estimator::quadrature;
  CHECK_THROWS_AS(lambda_for_rotation(g, 1.0, opt), ConfigError);
}

// Individual rotations at eps = 10 scatter by about 0.25 around R(10); only the
// average over g follows R. Kept as stated, expected to report a failure.
TEST_CASE("large eps rotations are close to the random exponent" * doctest::may_fail()) {
  OrbitOptions opt;
  opt.points = 128;
  opt.iterates = 8192;
  const double r10 = oracle::random_exponent(10.0);
  Philox rng(41, 0);
  int close = 0;
  for (int k = 0; k < 50; ++k) {
    const RotationStats st = lambda_for_rotation(sample_haar(rng).rotation, 10.0, opt);
    if (std::abs(st.lambda - r10) < 0.05) ++close;
  }
  CHECK(close >= 45);
}

TEST_CASE("per-rotation exponent against a finite-difference orbit") {
  OrbitOptions opt;
  opt.points = 8;
  opt.iterates = 4096;
  opt.estimator = Estimator::classical;
  Philox rng(42, 0);
  for (int k = 0; k < 4; ++k) {
    const Rotation g = sample_haar(rng).rotation;
    const auto q = g.quaternion();
    const oracle::M3 m = oracle::rotation_matrix(q[0], q[1], q[2], q[3]);
    oracle::Moments ref;
    for (int i = 0; i < 4; ++i) {
      const SpherePoint p = sample_sphere(rng);
      const Vec3 v = horizontal_direction(p.vec());
      ref.add(oracle::orbit_exponent_fd(m, 10.0, {p.vec().x, p.vec().y, p.vec().z}, {v.x, v.y, v.z}, 4096, 512));
    }
    CHECK(std::abs(lambda_for_rotation(g, 10.0, opt).lambda - ref.mean) < 0.05);
  }
}

TEST_CASE("lambda scan bookkeeping") {
  OrbitOptions opt;
  opt.points = 8;
  opt.iterates = 256;
  opt.transient = 16;
  const LambdaScanResult z = lambda_scan(0.0, GridSpec{4}, opt, 1);
  CHECK(z.lambda_num == 0.0);
  CHECK(z.sigma_s2 == 0.0);
  CHECK(z.sigma_total == 0.0);
  CHECK_THROWS_AS(lambda_scan(1.0, GridSpec{5}, opt), ConfigError);

  const LambdaScanResult r = lambda_scan(1.5, GridSpec{4}, opt, 1);
  double s = 0;
  for (const auto& c : r.cells) s += c.weight * c.lambda;
  CHECK(std::abs(s - r.lambda_num) < 1e-12);
  // the extrapolation is the least-squares line through (1/M, Lambda)
  const double M = 256;
  const LineFit f = fit_line({4 / M, 2 / M, 1 / M}, {r.lambda_quarter, r.lambda_half, r.lambda_num});
  CHECK(r.lambda_extrap == doctest::Approx(f.intercept).epsilon(1e-12));
  for (const auto& c : r.cells)
    CHECK(c.h == doctest::Approx(c.lambda * std::cos(c.beta) * (1 - std::cos(c.theta)) * oracle::pi / 2));

  const LambdaScanResult t = lambda_scan(1.5, GridSpec{4}, opt, 3);
  CHECK(t.lambda_num == r.lambda_num);
  CHECK(t.cells.size() == r.cells.size());
}

TEST_CASE("sigma statistics") {
  ScanCell c;
  c.lambda = 0.7;
  c.sigma = 0.2;
  c.weight = 1.0;
  const SigmaStats one = sigma_statistics({c});
  CHECK(one.sigma_s2 == doctest::Approx(0.2));
  CHECK(one.sigma_total == doctest::Approx(0.2));

  ScanCell d = c;
  d.lambda = 1.1;
  d.sigma = 0.1;
  d.weight = 3.0;
  const SigmaStats two = sigma_statistics({c, d});
  const double mean = (0.7 + 3 * 1.1) / 4;
  CHECK(two.sigma_s2 == doctest::Approx((0.2 + 0.3) / 4));
  const double var = (0.04 + (0.7 - mean) * (0.7 - mean) + 3 * (0.01 + (1.1 - mean) * (1.1 - mean))) / 4;
  CHECK(two.sigma_total == doctest::Approx(std::sqrt(var)));

  OrbitOptions opt;
  opt.points = 16;
  opt.iterates = 512;
  const LambdaScanResult r = lambda_scan(3.0, GridSpec{4}, opt, 1);
  CHECK(r.sigma_total >= r.sigma_s2);
}

TEST_CASE("line fits") {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.rms_residual < 1e-12);
  CHECK_THROWS_AS(fit_line({1}, {1}), DomainError);

  std::vector<double> eps{0.1, 0.15, 0.2, 0.3}, lam;
  for (double e : eps) lam.push_back(std::exp(2.45 - 3.16 / e));
  const LineFit g = fit_exponential_smallness(eps, lam);
  CHECK(g.intercept == doctest::Approx(2.45));
  CHECK(g.slope == doctest::Approx(3.16));
  CHECK_THROWS_AS(fit_exponential_smallness({0.1, 0.2}, {1.0, -1.0}), DomainError);
}

TEST_CASE("diffused exponent") {
  DiffusedSpec bad;
  bad.eps = 1.0;
  bad.delta = 0.0;
  CHECK_THROWS_AS(diffused_exponent(bad, 1), DomainError);

  DiffusedSpec full;
  full.eps = 0.3;
  full.delta = 2 * oracle::pi;
  full.N = 1000;
  full.rotations = 50;
  full.starts = 10;
  const ExponentEstimate d = diffused_exponent(full, 3, 1);
  const ExponentEstimate m = random_exponent_montecarlo(0.3, 1000, 500, 4, 1);
  CHECK(std::abs(d.value - m.value) < 3 * std::hypot(d.std_error, m.std_error));

  DiffusedSpec zero = full;
  zero.eps = 0.0;
  CHECK(diffused_exponent(zero, 3, 1).value == 0.0);

  DiffusedSpec small = full;
  small.delta = 0.3;
  const ExponentEstimate s = diffused_exponent(small, 5, 1);
  CHECK(s.value > 3 * s.std_error);
}

TEST_CASE("theta symmetry for integer eps") {
  OrbitOptions opt;
  opt.points = 32;
  opt.iterates = 1024;
  const GridSpec grid{8};
  const LambdaScanResult r = lambda_scan(1.0, grid, opt, 1);
  double asym = 0, pooled = 0;
  int count = 0;
  for (int i = 1; i < grid.intervals / 2; ++i)
    for (int j = 0; j < grid.nodes(); ++j) {
      const ScanCell &a = r.cell(i, j), &b = r.cell(grid.intervals - i, j);
      asym += std::abs(a.h - b.h);
      const double scale = std::cos(a.beta) * (1 - std::cos(a.theta)) * oracle::pi / 2;
      pooled += scale * std::hypot(a.sigma, b.sigma) / std::sqrt(static_cast<double>(opt.points));
      ++count;
    }
  CHECK(asym / count < 3 * pooled / count);
}
