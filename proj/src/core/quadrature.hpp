// SPDX-License-Identifier: Apache-2.0
//
// One-dimensional quadrature: adaptive Simpson with Richardson stopping, and
// tanh-sinh for integrands with endpoint singularities.
#pragma once

#include <cmath>
#include <numbers>

namespace twistlab {

struct QuadResult {
  double value = 0;
  double error = 0;  // sum of per-interval Richardson estimates
  long evaluations = 0;
};

namespace detail {

template <class F>
void simpson_recurse(F& f, double a, double fa, double m, double fm, double b, double fb,
                     double whole, double tol, int depth, QuadResult& out) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) / 15.0 < tol) {
    out.value += left + right + diff / 15.0;
    out.error += std::abs(diff) / 15.0;
    return;
  }
  simpson_recurse(f, a, fa, lm, flm, m, fm, left, tol, depth - 1, out);
  simpson_recurse(f, m, fm, rm, frm, b, fb, right, tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson on [a,b]. The interval is first cut into `initial` equal
/// pieces; each piece is halved until |S2 - S1| / 15 < tol.
template <class F>
QuadResult adaptive_simpson(F&& f, double a, double b, double tol = 1e-11, int initial = 16,
                            int max_depth = 40) {
  QuadResult out;
  if (a == b) return out;
  const double h = (b - a) / initial;
  double x0 = a, f0 = f(a);
  ++out.evaluations;
  for (int i = 0; i < initial; ++i) {
    const double x1 = (i + 1 == initial) ? b : a + (i + 1) * h;
    const double xm = 0.5 * (x0 + x1);
    const double fm = f(xm), f1 = f(x1);
    out.evaluations += 2;
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    detail::simpson_recurse(f, x0, f0, xm, fm, x1, f1, whole, tol, max_depth, out);
    x0 = x1;
    f0 = f1;
  }
  return out;
}

/// Composite Simpson on n (even) equal intervals.
template <class F>
double composite_simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Tanh-sinh on [a,b] with `nodes` abscissae (odd counts include the centre).
/// f receives (x, distance to the nearer endpoint) so integrands that are
/// singular at the ends can be evaluated without cancellation.
template <class F>
double tanh_sinh(F&& f, double a, double b, int nodes) {
  if (a == b || nodes < 1) return 0.0;
  constexpr double kTMax = 3.5;
  constexpr double kHalfPi = std::numbers::pi / 2;
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const int half = nodes / 2;
  const bool odd = nodes % 2;
  // odd counts use t = k h with the centre node, even counts t = (k - 1/2) h
  const double h = half > 0 ? kTMax / (odd ? half : half - 0.5) : kTMax;
  double sum = odd ? kHalfPi * f(c, r) : 0.0;
  for (int k = 1; k <= half; ++k) {
    const double t = odd ? k * h : (k - 0.5) * h;
    const double u = kHalfPi * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    const double d = r / (std::exp(u) * ch);  // r (1 - tanh u)
    if (d <= 0.0 || w == 0.0) break;
    sum += w * (f(a + d, d) + f(b - d, d));
  }
  return sum * h * r;
}

}  // namespace twistlab
