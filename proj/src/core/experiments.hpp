// SPDX-License-Identifier: Apache-2.0
//
// Estimation pipelines over SO(3): per-rotation phase-space averages, the
// product-Simpson scan for Lambda(eps), sigma statistics and the delta-diffused
// random exponent.
#pragma once

#include <cstdint>
#include <vector>

#include "exponents.hpp"

namespace twistlab {

/// Product Simpson grid over theta in [0, 2pi], beta in [0, pi/2] with the
/// Haar weight cos(beta)(1 - cos(theta)) / (2pi). `intervals` per axis, even.
struct GridSpec {
  int intervals = 64;

  void validate() const;  // throws ConfigError
  int nodes() const { return intervals + 1; }
  double theta(int i) const;
  double beta(int j) const;
  /// Simpson weight times density for node (i, j); sums to 1.
  double weight(int i, int j) const;
  /// Rotation by theta about (cos beta, 0, sin beta).
  static Rotation rotation(double theta, double beta);
};

struct OrbitOptions {
  long points = 128;     // N_p
  long iterates = 4096;  // M
  long transient = 512;
  Estimator estimator = Estimator::megno_improved;
  std::uint64_t seed = 1;
};

struct RotationStats {
  double lambda = 0;  // mean over starts
  double sigma = 0;   // sample std over starts
  double lambda_half = 0;     // same orbits, M/2 iterates
  double lambda_quarter = 0;  // M/4 iterates
};

/// Starts are drawn from Philox(seed, 1).substream(i), i < points, so every
/// rotation sees the same initial states.
RotationStats lambda_for_rotation(const Rotation& g, double eps, const OrbitOptions& opt);

struct ScanCell {
  double theta = 0, beta = 0;
  double lambda = 0, sigma = 0;
  double lambda_half = 0, lambda_quarter = 0;
  double weight = 0;  // Simpson weight times density
  double h = 0;       // lambda cos(beta)(1 - cos(theta)) pi / 2
};

struct LambdaScanResult {
  double eps = 0;
  GridSpec grid;
  OrbitOptions options;
  std::vector<ScanCell> cells;  // row-major, theta index outer

  double lambda_num = 0;
  double lambda_half = 0;     // at M/2
  double lambda_quarter = 0;  // at M/4
  double lambda_extrap = 0;   // intercept of a + b/M
  double extrap_slope = 0;
  double extrap_residual = 0;  // rms residual of the fit over |intercept|
  double lambda_coarse = 0;    // every other node, intervals/2
  double std_error = 0;        // pooled over cells
  double sigma_s2 = 0;
  double sigma_total = 0;
  double max_lambda = 0;

  const ScanCell& cell(int i, int j) const { return cells[static_cast<std::size_t>(i * grid.nodes() + j)]; }
};

LambdaScanResult lambda_scan(double eps, const GridSpec& grid, const OrbitOptions& opt, int threads = 0);

struct SigmaStats {
  double sigma_s2 = 0;
  double sigma_total = 0;
};

/// sigma_s2 = weighted mean of sigma_g; sigma_total^2 = weighted mean of
/// sigma_g^2 + (lambda_g - Lambda)^2.
SigmaStats sigma_statistics(const std::vector<ScanCell>& cells);

struct LineFit {
  double intercept = 0, slope = 0;
  double rms_residual = 0;
};

/// Least squares y = a + b x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// log Lambda = a - b / eps over the given points; returns (a, b) as (intercept, -slope).
LineFit fit_exponential_smallness(const std::vector<double>& eps, const std::vector<double>& lambda);

struct DiffusedSpec {
  double eps = 0;
  double delta = kTwoPi;
  long N = 1000;          // steps per run
  long rotations = 100;   // M_r
  long starts = 10;       // M_p
  void validate() const;  // throws DomainError
};

/// Outer average over Haar g, inner random process u_k g f_eps with u_k in the
/// delta ball. std_error comes from the spread of the per-g averages.
ExponentEstimate diffused_exponent(const DiffusedSpec& spec, std::uint64_t seed, int threads = 0);

}  // namespace twistlab
