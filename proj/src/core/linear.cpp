// SPDX-License-Identifier: Apache-2.0
#include "linear.hpp"

#include <algorithm>
#include <numeric>

#include "quadrature.hpp"

namespace twistlab {

Matrix2 Matrix2::rotation(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {c, -s, s, c};
}

double Matrix2::norm() const {
  const double f = a * a + b * b + c * c + d * d;
  const double dt = det();
  return std::sqrt(0.5 * (f + std::sqrt(std::max(0.0, f * f - 4.0 * dt * dt))));
}

Matrix2 Matrix2::normalized() const {
  const double dt = det();
  if (dt == 0.0) throw DomainError("Matrix2::normalized: singular matrix");
  const double s = 1.0 / std::sqrt(std::abs(dt));
  return {a * s, b * s, c * s, d * s};
}

double log_spectral_radius(const Matrix2& A) {
  const double t = A.trace(), dt = A.det();
  const double disc = t * t - 4.0 * dt;
  if (disc < 0.0) return 0.5 * std::log(dt);  // complex pair, |mu|^2 = det
  return std::log(0.5 * (std::abs(t) + std::sqrt(disc)));
}

double avila_bochi(const Matrix2& A) {
  if (std::abs(std::abs(A.det()) - 1.0) > 1e-12) throw DomainError("avila_bochi: normalize to |det A| = 1 first");
  const double s = A.norm();
  return std::log(0.5 * (s + 1.0 / s));
}

double lambda_of_coset(const Matrix2& A0, int n_phi) {
  if (!(A0.det() > 0.0)) throw DomainError("lambda_of_coset: det A must be positive");
  const Matrix2 A = A0.normalized();
  // trace(R_phi A) = rho cos(phi - phi0)
  const double rho = std::hypot(A.a + A.d, A.b - A.c);
  if (rho <= 2.0) return 0.0;
  const double gamma = std::acos(2.0 / rho);
  // |e1| = exp(acosh(|t| / 2)); the two hyperbolic arcs around phi0 and phi0 + pi
  // contribute equally, each symmetric about its centre.
  auto integrand = [&](double psi, double dist) {
    const double gap = psi > 0.5 * gamma ? dist : gamma - psi;
    // rho cos(psi) / 2 - 1 without cancellation near psi = gamma
    const double x = rho * std::sin(0.5 * (gamma + psi)) * std::sin(0.5 * gap);
    return std::log1p(x + std::sqrt(x * (x + 2.0)));
  };
  const double arc = tanh_sinh(integrand, 0.0, gamma, std::max(1, n_phi / 4));
  return 4.0 * arc / kTwoPi;
}

namespace {

ExponentEstimate summarize_runs(const std::vector<double>& runs, long N) {
  ExponentEstimate e;
  const double n = static_cast<double>(runs.size());
  e.value = pairwise_sum(runs) / n;
  if (runs.size() > 1) {
    std::vector<double> d(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) d[i] = (runs[i] - e.value) * (runs[i] - e.value);
    e.std_error = std::sqrt(pairwise_sum(d) / (n - 1.0) / n);
  }
  e.n_iterates = N;
  e.n_samples = static_cast<long>(runs.size());
  e.estimator = Estimator::classical;
  return e;
}

template <class Draw>
double vector_run(long N, Philox& rng, Draw&& draw) {
  const double w = rng.uniform(0.0, kTwoPi);
  double x = std::cos(w), y = std::sin(w);
  KahanSum acc;
  for (long k = 0; k < N; ++k) {
    const Matrix2 M = draw(rng);
    const double nx = M.a * x + M.b * y, ny = M.c * x + M.d * y;
    const double r = std::hypot(nx, ny);
    acc.add(std::log(r));
    x = nx / r;
    y = ny / r;
  }
  return acc.value() / static_cast<double>(N);
}

}  // namespace

ExponentEstimate matrix_diffused_exponent(const Matrix2& A, double g_angle, double delta, long N, long M,
                                          std::uint64_t seed, int threads) {
  if (!(delta > 0.0)) throw DomainError("matrix_diffused_exponent: delta must be > 0");
  if (N < 1 || M < 2) throw DomainError("matrix_diffused_exponent: need N >= 1, M >= 2");
  const Matrix2 gA = Matrix2::rotation(g_angle) * A;
  const double half = std::min(delta, kPi);
  const Philox root(seed, 3);
  const auto runs = parallel_map<double>(static_cast<std::size_t>(M), threads, [&](std::size_t i) {
    Philox rng = root.substream(i);
    return vector_run(N, rng, [&](Philox& r) { return Matrix2::rotation(r.uniform(-half, half)) * gA; });
  });
  return summarize_runs(runs, N);
}

ExponentEstimate random_product_exponent(const std::vector<Matrix2>& matrices, const std::vector<double>& probs,
                                         long N, long M, std::uint64_t seed, int threads) {
  if (matrices.empty() || matrices.size() != probs.size())
    throw DomainError("random_product_exponent: need one probability per matrix");
  if (N < 1 || M < 2) throw DomainError("random_product_exponent: need N >= 1, M >= 2");
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  for (double& c : cdf) c /= cdf.back();
  const Philox root(seed, 4);
  const auto runs = parallel_map<double>(static_cast<std::size_t>(M), threads, [&](std::size_t i) {
    Philox rng = root.substream(i);
    return vector_run(N, rng, [&](Philox& r) {
      const double u = r.uniform();
      const auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end() - 1, u) - cdf.begin());
      return matrices[k];
    });
  });
  return summarize_runs(runs, N);
}

double eigenvalue_average(const std::vector<Matrix2>& matrices, const std::vector<double>& probs) {
  double s = 0, w = 0;
  for (std::size_t i = 0; i < matrices.size() && i < probs.size(); ++i) {
    s += probs[i] * log_spectral_radius(matrices[i]);
    w += probs[i];
  }
  return s / w;
}

double CircleDensity::mean() const {
  return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}
double CircleDensity::min() const { return *std::min_element(values.begin(), values.end()); }
double CircleDensity::max() const { return *std::max_element(values.begin(), values.end()); }

double circle_map(const Matrix2& A, double omega) {
  const double x = std::cos(0.5 * omega), y = std::sin(0.5 * omega);
  const double w = 2.0 * std::atan2(A.c * x + A.d * y, A.a * x + A.b * y);
  const double r = std::fmod(w, kTwoPi);
  return r < 0 ? r + kTwoPi : r;
}

namespace {

// Column i: the arc of half-width delta around alpha f(y_i), spread over cells.
struct SparseColumn {
  int first = 0;  // may wrap
  std::vector<double> weights;
};

std::vector<SparseColumn> transition_columns(const Matrix2& A, double alpha, double delta, int n) {
  const double h = kTwoPi / n;
  const double half = std::min(delta, kPi);
  std::vector<SparseColumn> cols(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double c = circle_map(A, (i + 0.5) * h) + alpha;
    const double lo = c - half, hi = c + half;
    const int j0 = static_cast<int>(std::floor(lo / h)), j1 = static_cast<int>(std::floor(hi / h));
    SparseColumn& col = cols[static_cast<std::size_t>(i)];
    col.first = j0;
    double total = 0;
    for (int j = j0; j <= j1; ++j) {
      const double ov = std::max(0.0, std::min(hi, (j + 1) * h) - std::max(lo, j * h));
      col.weights.push_back(ov);
      total += ov;
    }
    for (double& w : col.weights) w /= total;
  }
  return cols;
}

}  // namespace

CircleDensity circle_operator_fixed_point(const Matrix2& A, double alpha, double delta, int n_z,
                                          const std::vector<double>& initial, double tol, int max_iterations) {
  if (!(delta > 0.0)) throw DomainError("circle operator: delta must be > 0");
  if (n_z < 2) throw DomainError("circle operator: need at least 2 cells");
  if (!initial.empty() && static_cast<int>(initial.size()) != n_z)
    throw DomainError("circle operator: initial density has the wrong size");
  const Matrix2 B = A.normalized();
  const auto cols = transition_columns(B, alpha, delta, n_z);

  std::vector<double> p = initial.empty() ? std::vector<double>(static_cast<std::size_t>(n_z), 1.0) : initial;
  {
    const double m = pairwise_sum(p) / n_z;
    if (!(m > 0.0)) throw DomainError("circle operator: initial density must have positive mass");
    for (double& v : p) v /= m;
  }
  std::vector<double> q(p.size());
  CircleDensity out;
  for (int it = 1; it <= max_iterations; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int i = 0; i < n_z; ++i) {
      const SparseColumn& col = cols[static_cast<std::size_t>(i)];
      const double pi = p[static_cast<std::size_t>(i)];
      int j = ((col.first % n_z) + n_z) % n_z;
      for (double w : col.weights) {
        q[static_cast<std::size_t>(j)] += w * pi;
        if (++j == n_z) j = 0;
      }
    }
    double change = 0;
    for (int i = 0; i < n_z; ++i) change += std::abs(q[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)]);
    change /= n_z;
    p.swap(q);
    if (change < tol) {
      out.values = std::move(p);
      out.iterations = it;
      out.last_change = change;
      return out;
    }
  }
  throw NumericError("circle operator: no convergence after " + std::to_string(max_iterations) +
                     " iterations (spectral gap too small)");
}

double verify_m_delta_lebesgue(const Matrix2& A, double delta, int n_alpha, int n_z, int threads) {
  if (n_alpha < 1) throw DomainError("verify_m_delta_lebesgue: need n_alpha >= 1");
  const auto dens = parallel_map<std::vector<double>>(static_cast<std::size_t>(n_alpha), threads, [&](std::size_t k) {
    return circle_operator_fixed_point(A, kTwoPi * static_cast<double>(k) / n_alpha, delta, n_z).values;
  });
  double dev = 0;
  std::vector<double> col(static_cast<std::size_t>(n_alpha));
  for (int z = 0; z < n_z; ++z) {
    for (int k = 0; k < n_alpha; ++k) col[static_cast<std::size_t>(k)] = dens[static_cast<std::size_t>(k)][static_cast<std::size_t>(z)];
    dev = std::max(dev, std::abs(pairwise_sum(col) / n_alpha - 1.0));
  }
  return dev;
}

}  // namespace twistlab
