// SPDX-License-Identifier: Apache-2.0
//
// The linear case: cosets SO(2) A of 2x2 matrices, the Avila-Bochi closed
// form, random matrix products and the circle operator whose fixed points
// average to Lebesgue measure.
#pragma once

#include <cstdint>
#include <vector>

#include "exponents.hpp"

namespace twistlab {

struct Matrix2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

  static Matrix2 identity() { return {}; }
  static Matrix2 rotation(double phi);
  static Matrix2 diag(double x, double y) { return {x, 0, 0, y}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  /// Largest singular value.
  double norm() const;
  /// A / sqrt|det A|; throws DomainError for singular A.
  Matrix2 normalized() const;

  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
};

/// log of the spectral radius.
double log_spectral_radius(const Matrix2& A);

/// int log |A u| du over the unit circle = log((s + 1/s) / 2), s = |A|.
/// Requires |det A| = 1 within 1e-12.
double avila_bochi(const Matrix2& A);

/// Normalized average over phi of log |e1(R_phi A)|. A is normalized to det 1
/// first (det > 0 required). The hyperbolic arcs are integrated by tanh-sinh
/// with n_phi nodes in total.
double lambda_of_coset(const Matrix2& A, int n_phi = 1 << 14);

/// Top exponent of u_k g A, u_k uniform rotations with angle in (-delta, delta),
/// g the rotation by g_angle. M runs of N steps.
ExponentEstimate matrix_diffused_exponent(const Matrix2& A, double g_angle, double delta, long N, long M,
                                          std::uint64_t seed, int threads = 0);

/// Top exponent of i.i.d. products drawing matrices[i] with probability probs[i].
ExponentEstimate random_product_exponent(const std::vector<Matrix2>& matrices, const std::vector<double>& probs,
                                         long N, long M, std::uint64_t seed, int threads = 0);

/// Probability-weighted log spectral radius.
double eigenvalue_average(const std::vector<Matrix2>& matrices, const std::vector<double>& probs);

/// Density on N equal cells of the circle, normalized to mean 1.
struct CircleDensity {
  std::vector<double> values;
  int iterations = 0;
  double last_change = 0;

  int size() const { return static_cast<int>(values.size()); }
  double mean() const;
  double min() const;
  double max() const;
};

/// Circle map induced by A: the projective action conjugated by angle doubling.
double circle_map(const Matrix2& A, double omega);

/// Fixed point of L_{alpha,f} phi(z) = int k_delta(alpha conj(z) f(y)) phi(y) dy with
/// the top-hat kernel of half-width delta. The kernel is discretized by exact
/// cell overlaps of the arc around alpha f(y_i) and normalized per source cell.
/// Power iteration from `initial` (uniform if empty) until the mean absolute
/// change is < tol; NumericError after max_iterations.
CircleDensity circle_operator_fixed_point(const Matrix2& A, double alpha, double delta, int n_z,
                                          const std::vector<double>& initial = {}, double tol = 1e-10,
                                          int max_iterations = 100000);

/// max_z |mean over n_alpha equispaced alpha of phi_alpha(z) - 1|.
double verify_m_delta_lebesgue(const Matrix2& A, double delta, int n_alpha, int n_z, int threads = 0);

}  // namespace twistlab
