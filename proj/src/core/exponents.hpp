// SPDX-License-Identifier: Apache-2.0
//
// Lyapunov exponent estimators: finite-time quotients, MEGNO, the exact
// quadrature for the random exponent R(eps), its two asymptotic regimes and
// the Monte-Carlo random process.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "errors.hpp"
#include "parallel.hpp"
#include "twistmap.hpp"

namespace twistlab {

enum class Estimator { classical, megno, megno_improved, quadrature, series };

std::string_view to_string(Estimator e);
Estimator estimator_from_string(std::string_view s);  // throws ConfigError

struct ExponentEstimate {
  double value = 0;
  double std_error = 0;
  long n_iterates = 0;
  long n_samples = 0;
  Estimator estimator = Estimator::classical;
  double kappa = 0;  // batch estimate of std_error * sqrt(N M); Monte Carlo only
};

/// (1/N) sum of log-stretches along N steps of `step` from s0.
template <class Step>
ExponentEstimate classical_exponent(Step&& step, TangentState s, long N) {
  if (N < 1) throw DomainError("classical_exponent: N must be >= 1");
  KahanSum acc;
  for (long k = 0; k < N; ++k) {
    const StepResult r = step(s);
    if (!std::isfinite(r.log_stretch)) throw NumericError("classical_exponent: non-finite log-stretch");
    acc.add(r.log_stretch);
    s = r.state;
  }
  return {acc.value() / static_cast<double>(N), 0.0, N, 1, Estimator::classical, 0.0};
}

/// Running MEGNO sums Y_{m,n}(k) = k^n sum_{j<=k} delta_j j^m and
/// Ybar_{m,n}(N) = sum_{k<=N} Y_{m,n}(k).
class MegnoAccumulator {
 public:
  explicit MegnoAccumulator(int m = 2, int n = 0);

  void add(double log_stretch) {
    ++k_;
    const double kd = static_cast<double>(k_);
    sum_y_.add(log_stretch * ipow(kd, m_));
    sum_ybar_.add(ipow(kd, n_) * sum_y_.value());
  }

  long steps() const { return k_; }
  double sum_y() const { return sum_y_.value(); }
  double sum_ybar() const { return sum_ybar_.value(); }

  /// (m+1)(m+n+2) Ybar / N^{n+m+2}.
  double yhat() const;
  /// 12 Ybar / (N^4 + 4N^3 + 5N^2); (m,n) = (2,0) only.
  double improved() const;
  /// |Yhat - 2/N| N^2; bounded for regular orbits.
  double regular_score() const;

 private:
  static double ipow(double x, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  int m_, n_;
  long k_ = 0;
  KahanSum sum_y_, sum_ybar_;
};

struct MegnoResult {
  double yhat = 0;
  std::optional<double> improved;  // present for (m,n) = (2,0)
  double regular_score = 0;
};

template <class Step>
MegnoResult megno_exponent(Step&& step, TangentState s, long N, int m = 2, int n = 0) {
  if (N < 4) throw DomainError("megno_exponent: N must be >= 4");
  MegnoAccumulator acc(m, n);
  for (long k = 0; k < N; ++k) {
    const StepResult r = step(s);
    if (!std::isfinite(r.log_stretch)) throw NumericError("megno_exponent: non-finite log-stretch");
    acc.add(r.log_stretch);
    s = r.state;
  }
  MegnoResult out{acc.yhat(), std::nullopt, acc.regular_score()};
  if (m == 2 && n == 0) out.improved = acc.improved();
  return out;
}

/// R(eps) = int_0^{1/2} log(1 + (2 pi eps x(1-x))^2) dx by adaptive Simpson;
/// std_error carries the quadrature error bound.
ExponentEstimate random_exponent_quadrature(double eps);

enum class SeriesRegime { small, large };
double random_exponent_series(double eps, SeriesRegime regime);

/// M independent runs of N steps of the random process v -> g_k T f_eps v,
/// g_k Haar. Run i uses Philox(seed, 0).substream(i).
ExponentEstimate random_exponent_montecarlo(double eps, long N, long M, std::uint64_t seed,
                                            int threads = 0);

struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
  long samples = 0;
};

/// Liouville average of |T f_eps v|^{-2}; equal to 1 for any area-preserving f.
MeanEstimate jacobian_normalization_mc(double eps, long samples, std::uint64_t seed, int threads = 0);

/// Liouville average of log |T f_eps v|, which equals R(eps).
MeanEstimate log_stretch_mc(double eps, long samples, std::uint64_t seed, int threads = 0);

}  // namespace twistlab
