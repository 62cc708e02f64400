// SPDX-License-Identifier: Apache-2.0
#include "exponents.hpp"

#include <algorithm>
#include <vector>

#include "quadrature.hpp"

namespace twistlab {

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::classical: return "classical";
    case Estimator::megno: return "megno";
    case Estimator::megno_improved: return "megno_improved";
    case Estimator::quadrature: return "quadrature";
    case Estimator::series: return "series";
  }
  return "unknown";
}

Estimator estimator_from_string(std::string_view s) {
  if (s == "classical") return Estimator::classical;
  if (s == "megno") return Estimator::megno;
  if (s == "megno_improved") return Estimator::megno_improved;
  throw ConfigError("unknown estimator '" + std::string(s) + "'");
}

MegnoAccumulator::MegnoAccumulator(int m, int n) : m_(m), n_(n) {
  if (m < 0 || n < 0) throw DomainError("MegnoAccumulator: m and n must be >= 0");
}

double MegnoAccumulator::yhat() const {
  if (k_ == 0) return 0.0;
  const double N = static_cast<double>(k_);
  return (m_ + 1.0) * (m_ + n_ + 2.0) * sum_ybar_.value() / ipow(N, n_ + m_ + 2);
}

double MegnoAccumulator::improved() const {
  if (m_ != 2 || n_ != 0) throw NumericError("improved MEGNO estimator requires (m,n) = (2,0)");
  if (k_ == 0) return 0.0;
  const double N = static_cast<double>(k_);
  return 12.0 * sum_ybar_.value() / (N * N * (N * N + 4.0 * N + 5.0));
}

double MegnoAccumulator::regular_score() const {
  const double N = static_cast<double>(k_);
  return k_ == 0 ? 0.0 : std::abs(yhat() - 2.0 / N) * N * N;
}

ExponentEstimate random_exponent_quadrature(double eps) {
  if (!(eps >= 0.0)) throw DomainError("random_exponent_quadrature: eps must be >= 0");
  ExponentEstimate e;
  e.estimator = Estimator::quadrature;
  if (eps == 0.0) return e;
  const double c = 2.0 * kPi * eps;
  const QuadResult q = adaptive_simpson(
      [c](double x) {
        const double a = c * x * (1.0 - x);
        return std::log1p(a * a);
      },
      0.0, 0.5, 1e-11, 16);
  e.value = q.value;
  e.std_error = q.error;
  return e;
}

double random_exponent_series(double eps, SeriesRegime regime) {
  if (!(eps > 0.0)) throw DomainError("random_exponent_series: eps must be > 0");
  if (regime == SeriesRegime::small) {
    const double e2 = eps * eps;
    return kPi * kPi / 15.0 * e2 - 2.0 * std::pow(kPi, 4) / 315.0 * e2 * e2;
  }
  return std::log(kTwoPi * eps) - 2.0 + 1.0 / (2.0 * eps);
}

namespace {

// One run of the random process; returns the mean log-stretch.
double random_run(double eps, long N, Philox rng) {
  TangentState s = sample_tangent_state(rng);
  const TwistFamily f(eps);
  KahanSum acc;
  for (long k = 0; k < N; ++k) {
    const StepResult r = f.tangent_apply(s);
    acc.add(r.log_stretch);
    const Rotation g = sample_haar(rng).rotation;
    s.base = SpherePoint(g.apply(r.state.base.vec()));
    s.dir = normalized(g.apply(r.state.dir));
  }
  return acc.value() / static_cast<double>(N);
}

MeanEstimate mean_of(const std::vector<double>& v) {
  MeanEstimate m;
  m.samples = static_cast<long>(v.size());
  m.mean = pairwise_sum(v) / static_cast<double>(v.size());
  if (v.size() > 1) {
    std::vector<double> d(v.size());
    std::transform(v.begin(), v.end(), d.begin(), [&](double x) { return (x - m.mean) * (x - m.mean); });
    m.std_error = std::sqrt(pairwise_sum(d) / (static_cast<double>(v.size()) - 1.0) / static_cast<double>(v.size()));
  }
  return m;
}

template <class Fn>
MeanEstimate liouville_mean(long samples, std::uint64_t seed, int threads, Fn&& fn) {
  if (samples < 2) throw DomainError("Monte-Carlo average needs at least 2 samples");
  // Blocks of 4096 samples per task keep the slot vector small.
  constexpr long kBlock = 4096;
  const long blocks = (samples + kBlock - 1) / kBlock;
  struct Moments {
    double s1 = 0, s2 = 0;
  };
  const Philox root(seed, 0);
  const auto parts = parallel_map<Moments>(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    Philox rng = root.substream(b);
    const long lo = static_cast<long>(b) * kBlock, hi = std::min(samples, lo + kBlock);
    KahanSum s1, s2;
    for (long i = lo; i < hi; ++i) {
      const double x = fn(sample_tangent_state(rng));
      s1.add(x);
      s2.add(x * x);
    }
    return Moments{s1.value(), s2.value()};
  });
  std::vector<double> a(parts.size()), b(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    a[i] = parts[i].s1;
    b[i] = parts[i].s2;
  }
  const double n = static_cast<double>(samples);
  MeanEstimate m;
  m.samples = samples;
  m.mean = pairwise_sum(a) / n;
  const double var = std::max(0.0, (pairwise_sum(b) - n * m.mean * m.mean) / (n - 1.0));
  m.std_error = std::sqrt(var / n);
  return m;
}

}  // namespace

ExponentEstimate random_exponent_montecarlo(double eps, long N, long M, std::uint64_t seed, int threads) {
  if (N < 1 || M < 1) throw DomainError("random_exponent_montecarlo: N and M must be >= 1");
  const Philox root(seed, 0);
  const auto runs = parallel_map<double>(static_cast<std::size_t>(M), threads,
                                         [&](std::size_t i) { return random_run(eps, N, root.substream(i)); });
  const MeanEstimate m = mean_of(runs);
  ExponentEstimate e{m.mean, m.std_error, N, M, Estimator::classical, 0.0};

  // kappa from contiguous batches of runs
  const long B = std::min<long>(M, 20);
  if (B > 1) {
    std::vector<double> batch(static_cast<std::size_t>(B));
    for (long b = 0; b < B; ++b) {
      const long lo = b * M / B, hi = (b + 1) * M / B;
      batch[static_cast<std::size_t>(b)] =
          pairwise_sum(std::span<const double>(runs).subspan(lo, hi - lo)) / static_cast<double>(hi - lo);
    }
    const MeanEstimate bm = mean_of(batch);
    // std of a batch mean is kappa / sqrt(N M / B)
    e.kappa = bm.std_error * std::sqrt(static_cast<double>(B)) * std::sqrt(static_cast<double>(N) * M / B);
  }
  return e;
}

MeanEstimate jacobian_normalization_mc(double eps, long samples, std::uint64_t seed, int threads) {
  const TwistFamily f(eps);
  return liouville_mean(samples, seed, threads, [&](const TangentState& s) {
    const double ls = f.tangent_apply(s).log_stretch;
    return std::exp(-2.0 * ls);
  });
}

MeanEstimate log_stretch_mc(double eps, long samples, std::uint64_t seed, int threads) {
  const TwistFamily f(eps);
  return liouville_mean(samples, seed, threads,
                        [&](const TangentState& s) { return f.tangent_apply(s).log_stretch; });
}

}  // namespace twistlab
