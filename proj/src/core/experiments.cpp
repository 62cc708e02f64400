// SPDX-License-Identifier: Apache-2.0
#include "experiments.hpp"

#include <algorithm>
#include <limits>

namespace twistlab {

namespace {

double simpson_coefficient(int i, int n) {
  if (i == 0 || i == n) return 1.0;
  return (i % 2) ? 4.0 : 2.0;
}

double orbit_value(const MegnoAccumulator& megno, const KahanSum& sum, Estimator e) {
  switch (e) {
    case Estimator::classical: return sum.value() / static_cast<double>(megno.steps());
    case Estimator::megno: return megno.yhat();
    case Estimator::megno_improved: return megno.improved();
    default: throw ConfigError("orbit estimator must be classical, megno or megno_improved");
  }
}

struct OrbitValues {
  double full, half, quarter;
};

OrbitValues run_orbit(const OrbitMap& map, TangentState s, const OrbitOptions& opt) {
  for (long k = 0; k < opt.transient; ++k) s = map.step(s).state;
  MegnoAccumulator megno(2, 0);
  KahanSum sum;
  OrbitValues v{};
  const long quarter = opt.iterates / 4, half = opt.iterates / 2;
  for (long k = 1; k <= opt.iterates; ++k) {
    const StepResult r = map.step(s);
    megno.add(r.log_stretch);
    sum.add(r.log_stretch);
    s = r.state;
    if (k == quarter) v.quarter = orbit_value(megno, sum, opt.estimator);
    if (k == half) v.half = orbit_value(megno, sum, opt.estimator);
  }
  v.full = orbit_value(megno, sum, opt.estimator);
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (intervals < 2 || intervals % 2 != 0)
    throw ConfigError("grid intervals must be a positive even number (Simpson), got " + std::to_string(intervals));
}

double GridSpec::theta(int i) const { return kTwoPi * i / intervals; }
double GridSpec::beta(int j) const { return 0.5 * kPi * j / intervals; }

double GridSpec::weight(int i, int j) const {
  const double ht = kTwoPi / intervals, hb = 0.5 * kPi / intervals;
  const double st = ht / 3.0 * simpson_coefficient(i, intervals);
  const double sb = hb / 3.0 * simpson_coefficient(j, intervals);
  return st * sb * std::cos(beta(j)) * (1.0 - std::cos(theta(i))) / kTwoPi;
}

Rotation GridSpec::rotation(double theta, double beta) {
  return Rotation::from_axis_angle({std::cos(beta), 0.0, std::sin(beta)}, theta);
}

RotationStats lambda_for_rotation(const Rotation& g, double eps, const OrbitOptions& opt) {
  if (opt.points < 1 || opt.iterates < 4) throw DomainError("lambda_for_rotation: need points >= 1, iterates >= 4");
  const OrbitMap map(g, eps);
  const Philox starts(opt.seed, 1);
  const auto n = static_cast<std::size_t>(opt.points);
  std::vector<double> full(n), half(n), quarter(n);
  for (std::size_t i = 0; i < n; ++i) {
    Philox rng = starts.substream(i);
    const OrbitValues v = run_orbit(map, sample_tangent_state(rng), opt);
    full[i] = v.full;
    half[i] = v.half;
    quarter[i] = v.quarter;
  }
  RotationStats st;
  const double np = static_cast<double>(n);
  st.lambda = pairwise_sum(full) / np;
  st.lambda_half = pairwise_sum(half) / np;
  st.lambda_quarter = pairwise_sum(quarter) / np;
  if (n > 1) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (full[i] - st.lambda) * (full[i] - st.lambda);
    st.sigma = std::sqrt(pairwise_sum(d) / (np - 1.0));
  }
  return st;
}

SigmaStats sigma_statistics(const std::vector<ScanCell>& cells) {
  std::vector<double> w, ws, wl;
  for (const auto& c : cells) {
    w.push_back(c.weight);
    ws.push_back(c.weight * c.sigma);
    wl.push_back(c.weight * c.lambda);
  }
  const double W = pairwise_sum(w);
  if (W <= 0.0) return {};
  const double mean = pairwise_sum(wl) / W;
  std::vector<double> wv;
  for (const auto& c : cells) wv.push_back(c.weight * (c.sigma * c.sigma + (c.lambda - mean) * (c.lambda - mean)));
  return {pairwise_sum(ws) / W, std::sqrt(std::max(0.0, pairwise_sum(wv) / W))};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double r2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    r2 += r * r;
  }
  f.rms_residual = std::sqrt(r2 / n);
  return f;
}

LineFit fit_exponential_smallness(const std::vector<double>& eps, const std::vector<double>& lambda) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size() && i < lambda.size(); ++i) {
    if (!(eps[i] > 0.0) || !(lambda[i] > 0.0)) throw DomainError("fit_exponential_smallness: need eps, Lambda > 0");
    x.push_back(1.0 / eps[i]);
    y.push_back(std::log(lambda[i]));
  }
  LineFit f = fit_line(x, y);
  f.slope = -f.slope;
  return f;
}

LambdaScanResult lambda_scan(double eps, const GridSpec& grid, const OrbitOptions& opt, int threads) {
  grid.validate();
  LambdaScanResult res;
  res.eps = eps;
  res.grid = grid;
  res.options = opt;
  const int n = grid.nodes();
  res.cells = parallel_map<ScanCell>(static_cast<std::size_t>(n) * n, threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n, j = static_cast<int>(idx) % n;
    ScanCell c;
    c.theta = grid.theta(i);
    c.beta = grid.beta(j);
    c.weight = grid.weight(i, j);
    const RotationStats st = lambda_for_rotation(GridSpec::rotation(c.theta, c.beta), eps, opt);
    c.lambda = st.lambda;
    c.sigma = st.sigma;
    c.lambda_half = st.lambda_half;
    c.lambda_quarter = st.lambda_quarter;
    c.h = c.lambda * std::cos(c.beta) * (1.0 - std::cos(c.theta)) * kPi / 2.0;
    return c;
  });

  std::vector<double> full, half, quarter, var;
  double max_lambda = -std::numeric_limits<double>::infinity();
  for (const auto& c : res.cells) {
    full.push_back(c.weight * c.lambda);
    half.push_back(c.weight * c.lambda_half);
    quarter.push_back(c.weight * c.lambda_quarter);
    var.push_back(c.weight * c.weight * c.sigma * c.sigma / static_cast<double>(opt.points));
    max_lambda = std::max(max_lambda, c.lambda);
  }
  res.lambda_num = pairwise_sum(full);
  res.lambda_half = pairwise_sum(half);
  res.lambda_quarter = pairwise_sum(quarter);
  res.std_error = std::sqrt(pairwise_sum(var));
  res.max_lambda = max_lambda;

  const double M = static_cast<double>(opt.iterates);
  const LineFit fit = fit_line({1.0 / M, 2.0 / M, 4.0 / M}, {res.lambda_num, res.lambda_half, res.lambda_quarter});
  res.lambda_extrap = fit.intercept;
  res.extrap_slope = fit.slope;
  res.extrap_residual = fit.intercept != 0.0 ? fit.rms_residual / std::abs(fit.intercept) : 0.0;

  const int coarse = grid.intervals / 2;
  if (coarse >= 2 && coarse % 2 == 0) {
    const GridSpec cg{coarse};
    std::vector<double> cw;
    for (int i = 0; i <= coarse; ++i)
      for (int j = 0; j <= coarse; ++j) cw.push_back(cg.weight(i, j) * res.cell(2 * i, 2 * j).lambda);
    res.lambda_coarse = pairwise_sum(cw);
  } else {
    res.lambda_coarse = std::numeric_limits<double>::quiet_NaN();
  }

  const SigmaStats s = sigma_statistics(res.cells);
  res.sigma_s2 = s.sigma_s2;
  res.sigma_total = s.sigma_total;
  return res;
}

void DiffusedSpec::validate() const {
  if (!(delta > 0.0)) throw DomainError("diffused exponent: delta must be > 0");
  if (N < 1 || rotations < 2 || starts < 1) throw DomainError("diffused exponent: need N >= 1, rotations >= 2, starts >= 1");
}

ExponentEstimate diffused_exponent(const DiffusedSpec& spec, std::uint64_t seed, int threads) {
  spec.validate();
  const Philox root(seed, 2);
  const auto per_g = parallel_map<double>(static_cast<std::size_t>(spec.rotations), threads, [&](std::size_t r) {
    Philox rng = root.substream(r);
    const Rotation g = sample_haar(rng).rotation;
    const TwistFamily f(spec.eps);
    KahanSum acc;
    for (long p = 0; p < spec.starts; ++p) {
      TangentState s = sample_tangent_state(rng);
      for (long k = 0; k < spec.N; ++k) {
        const StepResult st = f.tangent_apply(s);
        acc.add(st.log_stretch);
        const Rotation h = sample_ball(rng, spec.delta) * g;
        s.base = SpherePoint(h.apply(st.state.base.vec()));
        s.dir = normalized(h.apply(st.state.dir));
      }
    }
    return acc.value() / (static_cast<double>(spec.N) * spec.starts);
  });
  const double n = static_cast<double>(per_g.size());
  ExponentEstimate e;
  e.value = pairwise_sum(per_g) / n;
  std::vector<double> d(per_g.size());
  for (std::size_t i = 0; i < per_g.size(); ++i) d[i] = (per_g[i] - e.value) * (per_g[i] - e.value);
  e.std_error = std::sqrt(pairwise_sum(d) / (n - 1.0) / n);
  e.n_iterates = spec.N;
  e.n_samples = spec.rotations * spec.starts;
  e.estimator = Estimator::classical;
  return e;
}

}  // namespace twistlab
