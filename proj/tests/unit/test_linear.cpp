// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "linear.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace twistlab;

namespace {

// int over the unit circle of log |A u|, normalized.
double circle_average_log_norm(double a, double b, double c, double d, int n) {
  return oracle::trapezoid([&](double t) {
    const double x = std::cos(t), y = std::sin(t);
    return std::log(std::hypot(a * x + b * y, c * x + d * y));
  }, 0, 2 * oracle::pi, n) / (2 * oracle::pi);
}

// average over phi of log |e1(R_phi A)| by the midpoint rule, det A = 1
double coset_average(double a, double b, double c, double d, int n) {
  double s = 0;
  for (int k = 0; k < n; ++k) {
    const double phi = 2 * oracle::pi * (k + 0.5) / n;
    const double t = std::cos(phi) * (a + d) + std::sin(phi) * (c - b);
    if (std::abs(t) > 2) s += std::log((std::abs(t) + std::sqrt(t * t - 4)) / 2);
  }
  return s / n;
}

Matrix2 random_sl2(Philox& rng) {
  const double s = rng.uniform(1.0, 5.0);
  return Matrix2::rotation(rng.uniform(0, 2 * oracle::pi)) * Matrix2::diag(s, 1 / s) *
         Matrix2::rotation(rng.uniform(0, 2 * oracle::pi)) * Matrix2{1, rng.uniform(-1, 1), 0, 1};
}

}  // namespace

TEST_CASE("matrix basics") {
  const Matrix2 m{2, 1, 1, 1};
  CHECK(m.det() == 1.0);
  CHECK(m.trace() == 3.0);
  // largest singular value from the eigenvalues of m^T m
  const double f = 4 + 1 + 1 + 1;
  CHECK(m.norm() == doctest::Approx(std::sqrt((f + std::sqrt(f * f - 4)) / 2)));
  const Matrix2 n = Matrix2{2, 0, 0, 8}.normalized();
  CHECK(n.det() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(Matrix2({1, 2, 2, 4}).normalized(), DomainError);
  CHECK(log_spectral_radius(Matrix2::diag(3, 1.0 / 3)) == doctest::Approx(std::log(3.0)));
  CHECK(log_spectral_radius(Matrix2::rotation(0.4)) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("avila bochi identity") {
  CHECK(avila_bochi(Matrix2::identity()) == 0.0);
  CHECK(std::abs(avila_bochi(Matrix2::rotation(1.1))) < 1e-15);
  CHECK(avila_bochi(Matrix2::diag(2, 0.5)) == doctest::Approx(std::log(1.25)).epsilon(1e-14));
  CHECK(std::abs(circle_average_log_norm(2, 0, 0, 0.5, 2048) - 0.223144) < 1e-6);
  CHECK(std::abs(avila_bochi(Matrix2::diag(2, 0.5)) - circle_average_log_norm(2, 0, 0, 0.5, 2048)) < 1e-8);
  CHECK_THROWS_AS(avila_bochi(Matrix2::diag(2, 1)), DomainError);
  Philox rng(60, 0);
  for (int i = 0; i < 20; ++i) {
    const Matrix2 A = random_sl2(rng);
    CHECK(std::abs(avila_bochi(A) - circle_average_log_norm(A.a, A.b, A.c, A.d, 8192)) < 1e-8);
  }
}

TEST_CASE("average exponent of an SO(2) coset") {
  CHECK(lambda_of_coset(Matrix2::identity()) == 0.0);
  const double d = lambda_of_coset(Matrix2::diag(2, 0.5));
  CHECK(std::abs(d - avila_bochi(Matrix2::diag(2, 0.5))) < 1e-4);
  CHECK(std::abs(d - coset_average(2, 0, 0, 0.5, 2000000)) < 1e-5);

  const Matrix2 shear{1, 1, 0, 1};
  const double s = (1 + std::sqrt(5.0)) / 2;  // operator norm of the shear
  CHECK(std::abs(lambda_of_coset(shear) - std::log((s + 1 / s) / 2)) < 1e-3);
  CHECK(std::abs(avila_bochi(shear) - std::log((s + 1 / s) / 2)) < 1e-12);

  Philox rng(61, 0);
  for (int i = 0; i < 20; ++i) {
    const Matrix2 A = random_sl2(rng);
    const double L = lambda_of_coset(A);
    CHECK(std::abs(L - avila_bochi(A)) < 1e-3);
    CHECK(std::abs(L - coset_average(A.a, A.b, A.c, A.d, 400000)) < 1e-4);
  }
  CHECK(lambda_of_coset(Matrix2{4, 0, 0, 1}) == doctest::Approx(lambda_of_coset(Matrix2::diag(2, 0.5))));
  CHECK_THROWS_AS(lambda_of_coset(Matrix2{1, 0, 0, -1}), DomainError);
}

TEST_CASE("matrix diffused exponent") {
  const Matrix2 A = Matrix2::diag(2, 0.5);
  const ExponentEstimate full = matrix_diffused_exponent(A, 0.0, 2 * oracle::pi, 1000, 400, 1, 1);
  CHECK(std::abs(full.value - avila_bochi(A)) < 3 * full.std_error);
  const ExponentEstimate tiny = matrix_diffused_exponent(A, 0.0, 1e-3, 1000, 100, 2, 1);
  CHECK(std::abs(tiny.value - std::log(2.0)) < 0.02);
  CHECK(matrix_diffused_exponent(Matrix2::identity(), 0.3, 0.5, 100, 10, 3, 1).value == doctest::Approx(0.0).scale(1));

  // bridge between the two endpoints for a fixed hyperbolic gA
  const Matrix2 B = Matrix2::diag(3, 1.0 / 3);
  const double g = 0.2;
  const double e1 = log_spectral_radius(Matrix2::rotation(g) * B);
  std::vector<double> values;
  for (double delta : {2 * oracle::pi, 1.0, 0.1, 0.01}) {
    const ExponentEstimate e = matrix_diffused_exponent(B, g, delta, 2000, 200, 4, 1);
    values.push_back(e.value);
    if (delta > 6) CHECK(std::abs(e.value - avila_bochi(B)) < 3 * e.std_error);
    if (delta < 0.05) CHECK(std::abs(e.value - e1) < 3 * e.std_error + 0.01);
  }
  CHECK(values.front() < values.back());
  const ExponentEstimate a = matrix_diffused_exponent(B, g, 0.5, 300, 40, 9, 1);
  const ExponentEstimate b = matrix_diffused_exponent(B, g, 0.5, 300, 40, 9, 3);
  CHECK(a.value == b.value);
}

TEST_CASE("counterexample for general measures") {
  const std::vector<Matrix2> ms{{1, 0, 1, 1}, {1, 1, 0, 1}};
  const std::vector<double> p{0.5, 0.5};
  CHECK(eigenvalue_average(ms, p) == 0.0);
  const ExponentEstimate r = random_product_exponent(ms, p, 2000, 200, 1, 1);
  CHECK(r.value > 3 * r.std_error);
  CHECK_THROWS(random_product_exponent(ms, {0.5}, 10, 10, 1));
}

TEST_CASE("circle map") {
  for (double w : {0.0, 1.0, 3.0, 5.5})
    CHECK(std::abs(std::remainder(circle_map(Matrix2::identity(), w) - w, 2 * oracle::pi)) < 1e-12);
  // the projective action of diag(2, 1/2) on the direction at angle w/2
  const double w = 1.2;
  const double img = 2 * std::atan2(0.5 * std::sin(w / 2), 2 * std::cos(w / 2));
  CHECK(std::abs(std::remainder(circle_map(Matrix2::diag(2, 0.5), w) - img, 2 * oracle::pi)) < 1e-12);
}

TEST_CASE("circle operator fixed point") {
  const CircleDensity id = circle_operator_fixed_point(Matrix2::identity(), 0.7, 0.3, 128);
  for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

  const Matrix2 A = Matrix2::diag(2, 0.5);
  const CircleDensity u = circle_operator_fixed_point(A, 1.3, 0.3, 256);
  CHECK(std::abs(u.mean() - 1) < 1e-8);
  CHECK(u.min() > 0);
  CHECK(u.max() > 1.1);
  std::vector<double> bumpy(256);
  for (int i = 0; i < 256; ++i) bumpy[static_cast<std::size_t>(i)] = 1 + 0.9 * std::sin(2 * oracle::pi * i / 256);
  const CircleDensity v = circle_operator_fixed_point(A, 1.3, 0.3, 256, bumpy);
  double diff = 0;
  for (int i = 0; i < 256; ++i) diff = std::max(diff, std::abs(u.values[i] - v.values[i]));
  CHECK(diff < 1e-8);
  CHECK_THROWS_AS(circle_operator_fixed_point(A, 1.3, 0.3, 256, {}, 1e-10, 3), NumericError);
}

TEST_CASE("average of stationary densities is Lebesgue") {
  CHECK(verify_m_delta_lebesgue(Matrix2::identity(), 0.3, 16, 64, 1) < 1e-12);
  const Matrix2 A = Matrix2::diag(2, 0.5);
  const double coarse = verify_m_delta_lebesgue(A, 0.3, 64, 128, 1);
  const double mid = verify_m_delta_lebesgue(A, 0.3, 128, 256, 1);
  CHECK(mid < coarse);
  MESSAGE("deviation " << coarse << " -> " << mid);
}
