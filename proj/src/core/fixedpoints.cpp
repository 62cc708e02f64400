// SPDX-License-Identifier: Apache-2.0
#include "fixedpoints.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "parallel.hpp"

namespace twistlab {

char to_char(Stability s) {
  switch (s) {
    case Stability::E: return 'E';
    case Stability::H: return 'H';
    case Stability::R: return 'R';
  }
  return '?';
}

double fixed_point_delta(double b, double eps) { return 0.5 * kPi * eps * (1.0 + std::sin(b)); }

double fixed_point_function(double b, double beta, double theta, double eps) {
  const double d = fixed_point_delta(b, eps);
  const double st = std::sin(0.5 * theta), ct = std::cos(0.5 * theta);
  const double cb = std::cos(b), sb = std::sin(b);
  return st * std::sin(beta) * cb * std::cos(d) - st * std::cos(beta) * sb + ct * cb * std::sin(d);
}

OrbitMap fixed_point_map(double beta, double theta, double eps) {
  return OrbitMap(Rotation::from_axis_angle({std::cos(beta), 0.0, std::sin(beta)}, theta), eps);
}

namespace {

struct Frame {
  Vec3 p, e, n;
};

Frame frame_at(const Vec3& p) { return {p, horizontal_direction(p), north_direction(p)}; }

// Gnomonic chart around the frame's base point.
Vec3 chart_point(const Frame& f, double u1, double u2) { return normalized(f.p + u1 * f.e + u2 * f.n); }
std::array<double, 2> chart_coords(const Frame& f, const Vec3& y) {
  const double s = dot(y, f.p);
  return {dot(y, f.e) / s, dot(y, f.n) / s};
}

std::array<double, 4> central_difference(const OrbitMap& map, const Frame& f, double h) {
  std::array<double, 4> J{};
  for (int col = 0; col < 2; ++col) {
    const double du1 = col == 0 ? h : 0.0, du2 = col == 1 ? h : 0.0;
    const auto plus = chart_coords(f, map.apply(chart_point(f, du1, du2)));
    const auto minus = chart_coords(f, map.apply(chart_point(f, -du1, -du2)));
    J[col] = (plus[0] - minus[0]) / (2 * h);
    J[2 + col] = (plus[1] - minus[1]) / (2 * h);
  }
  return J;
}

std::array<std::complex<double>, 2> eigenvalues_2x2(double t, double d) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(t * t - 4.0 * d, 0.0));
  return {0.5 * (t + disc), 0.5 * (t - disc)};
}

// Exact derivative of the map at p in the (east, north) frame, from the tangent action.
std::array<double, 4> analytic_jacobian(const OrbitMap& map, const Vec3& p) {
  const Frame f = frame_at(p);
  const Frame g = frame_at(map.apply(p));
  std::array<double, 4> J{};
  for (int col = 0; col < 2; ++col) {
    const StepResult r = map.step({SpherePoint(p), col == 0 ? f.e : f.n});
    const Vec3 w = std::exp(r.log_stretch) * r.state.dir;
    J[col] = dot(w, g.e);
    J[2 + col] = dot(w, g.n);
  }
  return J;
}

double max_abs_eig(const std::array<double, 4>& J) {
  const auto ev = eigenvalues_2x2(J[0] + J[3], J[0] * J[3] - J[1] * J[2]);
  return std::max(std::abs(ev[0]), std::abs(ev[1]));
}

double bisect(auto&& f, double lo, double hi, double flo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section maximisation on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::array<double, 4> numeric_jacobian(const OrbitMap& map, const Vec3& p, double h) {
  const Frame f = frame_at(p);
  const auto J1 = central_difference(map, f, h);
  const auto J2 = central_difference(map, f, 0.5 * h);
  std::array<double, 4> J{};
  for (int i = 0; i < 4; ++i) J[i] = (4.0 * J2[i] - J1[i]) / 3.0;
  return J;
}

FixedPointRecord classify_fixed_point(const OrbitMap& map, double b, double eps) {
  FixedPointRecord r;
  r.b = b;
  const double d = fixed_point_delta(b, eps);
  const Vec3 A{std::cos(b) * std::cos(d), -std::cos(b) * std::sin(d), std::sin(b)};
  r.location = SpherePoint(A);
  r.residual = norm(map.apply(r.location.vec()) - r.location.vec());
  r.residual_flag = r.residual > 1e-6;
  const auto J = numeric_jacobian(map, r.location.vec());
  r.trace = J[0] + J[3];
  r.determinant = J[0] * J[3] - J[1] * J[2];
  r.eigenvalues = eigenvalues_2x2(r.trace, r.determinant);
  r.degenerate = std::abs(std::abs(r.trace) - 2.0) < 1e-6;
  r.stability = std::abs(r.trace) < 2.0 ? Stability::E : (r.trace > 0 ? Stability::H : Stability::R);
  return r;
}

std::vector<FixedPointRecord> find_fixed_points(double beta, double theta, double eps, const FixedPointOptions& opt) {
  auto F = [&](double b) { return fixed_point_function(b, beta, theta, eps); };
  const int n = opt.scan_points;
  const double h = kTwoPi / n;
  std::vector<double> roots;
  const double f_start = F(0.0);
  double b0 = 0.0, f0 = f_start;
  for (int i = 1; i <= n; ++i) {
    const double b1 = i == n ? kTwoPi : i * h;
    const double f1 = i == n ? f_start : F(b1);  // periodic: reuse F(0)
    if (f0 == 0.0) {
      roots.push_back(b0);
    } else if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
      roots.push_back(bisect(F, b0, b1, f0, opt.bisection_tol));
    }
    b0 = b1;
    f0 = f1;
  }
  std::sort(roots.begin(), roots.end());

  const OrbitMap map = fixed_point_map(beta, theta, eps);
  std::vector<FixedPointRecord> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double b = std::fmod(roots[i], kTwoPi);
    if (!out.empty()) {
      double gap = std::abs(b - out.back().b);
      gap = std::min(gap, kTwoPi - gap);
      if (gap < opt.merge_tol) {
        out.back().double_candidate = true;
        continue;
      }
    }
    out.push_back(classify_fixed_point(map, b, eps));
  }
  if (out.size() > 1) {
    double gap = std::abs(out.front().b - out.back().b);
    gap = std::min(gap, kTwoPi - gap);
    if (gap < opt.merge_tol) {
      out.front().double_candidate = true;
      out.pop_back();
    }
  }
  return out;
}

std::string stability_code(int nE, int nH, int nR) {
  std::string s;
  if (nR) s += "R^" + std::to_string(nR);
  if (nH) s += "H^" + std::to_string(nH);
  if (nE) s += "E^" + std::to_string(nE);
  return s.empty() ? "none" : s;
}

BifurcationMap bifurcation_map(double eps, const BifurcationGrid& grid, int threads) {
  if (grid.n_theta < 1 || grid.n_beta < 1 || !(grid.theta_max > grid.theta_min) || !(grid.beta_max > grid.beta_min))
    throw ConfigError("bifurcation grid must have positive size and increasing ranges");
  BifurcationMap m;
  m.eps = eps;
  m.grid = grid;
  const double dt = (grid.theta_max - grid.theta_min) / grid.n_theta;
  const double db = (grid.beta_max - grid.beta_min) / grid.n_beta;
  m.cells = parallel_map<BifurcationCell>(static_cast<std::size_t>(grid.n_theta) * grid.n_beta, threads,
                                          [&](std::size_t idx) {
                                            BifurcationCell c;
                                            const int i = static_cast<int>(idx) / grid.n_beta;
                                            const int j = static_cast<int>(idx) % grid.n_beta;
                                            c.theta = grid.theta_min + (i + 0.5) * dt;
                                            c.beta = grid.beta_min + (j + 0.5) * db;
                                            for (const auto& r : find_fixed_points(c.beta, c.theta, eps)) {
                                              (r.stability == Stability::E ? c.nE
                                               : r.stability == Stability::H ? c.nH
                                                                             : c.nR)++;
                                              c.flagged = c.flagged || r.flagged();
                                              c.max_eigenvalue = std::max(c.max_eigenvalue, r.max_abs_eigenvalue());
                                            }
                                            c.code = stability_code(c.nE, c.nH, c.nR);
                                            return c;
                                          });
  for (int i = 0; i < grid.n_theta; ++i) {
    for (int j = 0; j < grid.n_beta; ++j) {
      auto& c = m.cells[static_cast<std::size_t>(i * grid.n_beta + j)];
      const int di[] = {-1, 1, 0, 0}, dj[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        if (a < 0 || b < 0 || a >= grid.n_theta || b >= grid.n_beta) continue;
        const auto& o = m.cell(a, b);
        if (o.nE != c.nE || o.nH != c.nH || o.nR != c.nR) c.boundary = true;
      }
    }
  }
  return m;
}

double limit_equation(double b, double m, double beta) {
  return m * std::sin(b - beta) - std::cos(b) * (1.0 + std::sin(b));
}

double limit_equation_db(double b, double m, double beta) {
  // d/db [cos b (1 + sin b)] = -sin b - sin^2 b + cos^2 b = cos 2b - sin b
  return m * std::cos(b - beta) - (std::cos(2 * b) - std::sin(b));
}

DoubleZeroPoint double_zero_point(double b) {
  const double sb = std::sin(b), cb = std::cos(b);
  const double re = std::cos(2 * b) - sb, im = cb + 0.5 * std::sin(2 * b);
  DoubleZeroPoint p;
  p.b = b;
  p.m = -std::hypot(re, im);
  double beta = b - std::atan2(-im, -re);  // arg(sin b - cos 2b - i(cos b + sin 2b / 2))
  beta = std::remainder(beta, kTwoPi);
  p.beta = beta;
  return p;
}

std::vector<DoubleZeroPoint> double_zero_curves(int samples) {
  if (samples < 2) throw DomainError("double_zero_curves: need at least 2 samples");
  std::vector<DoubleZeroPoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  // open interval (pi/2, 3pi/2): the endpoints are the degenerate b = +-pi/2
  for (int k = 0; k < samples; ++k) {
    const double b = 0.5 * kPi + kPi * (k + 0.5) / samples;
    const double sb = std::sin(b), s2 = std::sin(2 * b);
    const double m2 = 2.0 + 2.0 * sb * sb * sb - 0.75 * s2 * s2;
    if (m2 < 0.0) throw NumericError("double_zero_curves: negative m^2");
    out.push_back(double_zero_point(b));
  }
  return out;
}

double double_zero_m(int branch, double beta) {
  if (branch != 1 && branch != 2) throw DomainError("double_zero_m: branch must be 1 or 2");
  if (!(beta >= kPi / 4 && beta <= kPi / 2)) throw DomainError("double_zero_m: beta must lie in [pi/4, pi/2]");
  // beta decreases from pi/2 to pi/4 on branch 1 and increases back on branch 2
  double lo = branch == 1 ? 0.5 * kPi : kPi, hi = branch == 1 ? kPi : 1.5 * kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool above = double_zero_point(mid).beta > beta;
    if ((branch == 1) == above) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return double_zero_point(0.5 * (lo + hi)).m;
}

std::vector<double> beta0_double_roots(double eps, int scan_points) {
  if (!(eps > 0.0)) throw DomainError("beta0_double_roots: eps must be > 0");
  // multiplied through by cos(delta) to remove the poles of tan
  auto K = [eps](double s) {
    const double d = 0.5 * kPi * eps * (1.0 + s);
    return 2.0 / (kPi * eps) * std::sin(d) - s * (1.0 - s * s) * std::cos(d);
  };
  std::vector<double> roots;
  const double lo = -1.0 + 1e-9, hi = 1.0 - 1e-9;
  double s0 = lo, k0 = K(lo);
  for (int i = 1; i <= scan_points; ++i) {
    const double s1 = lo + (hi - lo) * i / scan_points;
    const double k1 = K(s1);
    if (k0 == 0.0) {
      roots.push_back(std::asin(s0));
    } else if ((k0 < 0) != (k1 < 0) && k1 != 0.0) {
      roots.push_back(std::asin(bisect(K, s0, s1, k0, 1e-15)));
    }
    s0 = s1;
    k0 = k1;
  }
  return roots;
}

int beta0_max_root_count(double eps, int n_theta) {
  int best = 0;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = kTwoPi * (i + 0.5) / n_theta;
    best = std::max(best, static_cast<int>(find_fixed_points(0.0, theta, eps).size()));
  }
  return best;
}

double max_eigenvalue(double eps) {
  if (!(eps >= 0.0)) throw DomainError("max_eigenvalue: eps must be >= 0");
  const double a = 0.5 * kPi * eps;
  return a + std::sqrt(1.0 + a * a);
}

MaxEigenvalueWitness b0_max_eigenvalue_witness(double eps) {
  const double d0 = 0.5 * kPi * eps;
  const Vec3 A{std::cos(d0), -std::sin(d0), 0.0};
  MaxEigenvalueWitness w;
  if (std::abs(std::sin(d0)) < 1e-12) {
    // A = (+-1, 0, 0) lies on the beta = 0 axis: fixed for every theta
    auto mu = [&](double theta) { return max_abs_eig(analytic_jacobian(fixed_point_map(0.0, theta, eps), A)); };
    constexpr int kGrid = 4000;
    int best = 0;
    for (int i = 1; i < kGrid; ++i)
      if (mu(kTwoPi * i / kGrid) > mu(kTwoPi * best / kGrid)) best = i;
    w.theta = golden_max(mu, kTwoPi * std::max(0, best - 1) / kGrid, kTwoPi * std::min(kGrid, best + 1) / kGrid, 1e-12);
    w.beta = 0.0;
    w.mu = mu(w.theta);
    return w;
  }
  auto theta_of = [&](double beta) {
    const double t = 2.0 * std::atan2(-std::sin(d0), std::sin(beta) * std::cos(d0));
    return t < 0 ? t + kTwoPi : t;
  };
  auto mu = [&](double beta) {
    return max_abs_eig(analytic_jacobian(fixed_point_map(beta, theta_of(beta), eps), A));
  };
  constexpr int kGrid = 4000;
  const double step = 0.5 * kPi / kGrid;
  int best = 0;
  double best_mu = mu(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = mu(i * step);
    if (v > best_mu) {
      best_mu = v;
      best = i;
    }
  }
  w.beta = golden_max(mu, step * std::max(0, best - 1), step * std::min(kGrid, best + 1), 1e-12);
  w.theta = theta_of(w.beta);
  w.mu = mu(w.beta);
  return w;
}

}  // namespace twistlab
