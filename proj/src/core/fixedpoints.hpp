// SPDX-License-Identifier: Apache-2.0
//
// Fixed points of g o f_eps, g the rotation by theta about (cos beta, 0, sin beta).
//
// A root b of fixed_point_function gives the fixed point
//   A = (cos b cos d, -cos b sin d, sin b),  d = delta(b) = (pi/2) eps (1 + sin b).
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "twistmap.hpp"

namespace twistlab {

enum class Stability { E, H, R };
char to_char(Stability s);

double fixed_point_delta(double b, double eps);

double fixed_point_function(double b, double beta, double theta, double eps);

/// The map g o f_eps for the given axis latitude and angle.
OrbitMap fixed_point_map(double beta, double theta, double eps);

struct FixedPointRecord {
  double b = 0;
  SpherePoint location;
  double trace = 0;
  double determinant = 1;
  std::array<std::complex<double>, 2> eigenvalues{};
  Stability stability = Stability::E;
  double residual = 0;  // |G(A) - A|
  bool degenerate = false;        // ||trace| - 2| < 1e-6
  bool residual_flag = false;     // residual > 1e-6
  bool double_candidate = false;  // merged with a root closer than 1e-6

  bool flagged() const { return degenerate || residual_flag || double_candidate; }
  double max_abs_eigenvalue() const { return std::max(std::abs(eigenvalues[0]), std::abs(eigenvalues[1])); }
};

/// 2x2 derivative of `map` at the fixed point p in the (east, north) frame,
/// by central differences (step h) with one Richardson refinement.
std::array<double, 4> numeric_jacobian(const OrbitMap& map, const Vec3& p, double h = 1e-6);

FixedPointRecord classify_fixed_point(const OrbitMap& map, double b, double eps);

struct FixedPointOptions {
  int scan_points = 4096;
  double bisection_tol = 1e-12;
  double merge_tol = 1e-6;
};

std::vector<FixedPointRecord> find_fixed_points(double beta, double theta, double eps,
                                                const FixedPointOptions& opt = {});

struct BifurcationCell {
  double theta = 0, beta = 0;
  int nE = 0, nH = 0, nR = 0;
  std::string code;
  bool flagged = false;   // a record in the cell is flagged
  bool boundary = false;  // a neighbouring cell has different counts
  double max_eigenvalue = 0;

  int total() const { return nE + nH + nR; }
};

std::string stability_code(int nE, int nH, int nR);

struct BifurcationGrid {
  int n_theta = 64, n_beta = 64;
  double theta_min = 0, theta_max = kTwoPi;
  double beta_min = 0, beta_max = kPi / 2;
};

struct BifurcationMap {
  double eps = 0;
  BifurcationGrid grid;
  std::vector<BifurcationCell> cells;  // theta index outer
  const BifurcationCell& cell(int i, int j) const { return cells[static_cast<std::size_t>(i * grid.n_beta + j)]; }
};

/// Cell centres; throws ConfigError on an empty or inverted grid.
BifurcationMap bifurcation_map(double eps, const BifurcationGrid& grid, int threads = 0);

/// Limit (eps -> 0) fixed-point equation m sin(b - beta) - cos b (1 + sin b) and its b-derivative.
double limit_equation(double b, double m, double beta);
double limit_equation_db(double b, double m, double beta);

struct DoubleZeroPoint {
  double b = 0, m = 0, beta = 0;
};

/// Double-zero curves of the limit equation, b sampled on (pi/2, 3pi/2):
/// m = -|w|, w = cos 2b - sin b + i (cos b + sin(2b)/2), so
/// m^2 = 2 + 2 sin^3 b - (3/4) sin^2(2b).
std::vector<DoubleZeroPoint> double_zero_curves(int samples);
DoubleZeroPoint double_zero_point(double b);

/// m on branch 1 (b in (pi/2, pi)) or branch 2 (b in (pi, 3pi/2)) at axis latitude
/// beta in [pi/4, pi/2].
double double_zero_m(int branch, double beta);

/// theta = 2pi + m pi eps, the small-eps image of a curve point.
inline double theta_from_m(double m, double eps) { return kTwoPi + m * kPi * eps; }

/// Roots b in (-pi/2, pi/2) of (2/(pi eps)) tan(delta(b)) = sin b cos^2 b; each
/// has the mirror root pi - b.
std::vector<double> beta0_double_roots(double eps, int scan_points = 20000);

/// Number of fixed points for beta = 0, maximised over an n-point theta scan.
int beta0_max_root_count(double eps, int n_theta = 720);

double max_eigenvalue(double eps);

struct MaxEigenvalueWitness {
  double beta = 0, theta = 0;
  double mu = 0;
};

/// Rotation (beta, theta) for which A = (cos d0, -sin d0, 0), d0 = pi eps / 2,
/// is fixed, chosen to maximise the largest eigenvalue there.
MaxEigenvalueWitness b0_max_eigenvalue_witness(double eps);

}  // namespace twistlab
