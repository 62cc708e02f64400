// SPDX-License-Identifier: Apache-2.0
#include "run.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "csv.hpp"
#include "errors.hpp"
#include "experiments.hpp"
#include "fixedpoints.hpp"
#include "linear.hpp"

#ifndef TWISTLAB_VERSION
#define TWISTLAB_VERSION "dev"
#endif

namespace twistlab {

namespace {

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Context {
  const std::string& subcommand;
  const Config& cfg;
  std::ostream& out;
  int threads;
  std::string dir;

  Table table(const std::string& name, std::vector<std::string> columns) const {
    Table t;
    t.columns = std::move(columns);
    t.header.emplace_back("table", name);
    t.header.emplace_back("subcommand", subcommand);
    t.header.emplace_back("version", TWISTLAB_VERSION);
    t.header.emplace_back("config_hash", cfg.hash());
    for (const auto& kv : cfg.echo()) t.header.push_back(kv);
    return t;
  }

  void save(Table& t, const std::string& file) const {
    t.header.emplace_back("rows", std::to_string(t.rows.size()));
    write_file_atomic((std::filesystem::path(dir) / file).string(), write_csv(t));
  }

  void save_plot(const std::vector<std::array<double, 3>>& pts, const std::string& file) const {
    if (cfg.get_long("plot") == 0) return;
    write_file_atomic((std::filesystem::path(dir) / file).string(), write_plot_data(pts));
  }
};

void random_exact(const Context& c) {
  Table t = c.table("random_exact", {"eps", "R_quadrature", "quad_error", "R_series_small", "R_series_large"});
  for (double eps : c.cfg.eps_values()) {
    const ExponentEstimate q = random_exponent_quadrature(eps);
    const double s = eps > 0 ? random_exponent_series(eps, SeriesRegime::small) : 0.0;
    const double l = eps > 0 ? random_exponent_series(eps, SeriesRegime::large) : 0.0;
    t.add_row({eps, q.value, q.std_error, s, l});
    c.out << "eps=" << format_double(eps) << " R=" << fmt6(q.value) << " series_small=" << fmt6(s)
          << " series_large=" << fmt6(l) << "\n";
  }
  c.save(t, "random_exact.csv");
}

void random_mc(const Context& c) {
  Table t = c.table("random_mc", {"eps", "N", "M", "R_mc", "std_error", "kappa", "R_quadrature", "deviation"});
  const long N = c.cfg.get_long("N"), M = c.cfg.get_long("M");
  const auto seed = c.cfg.get_u64("seed");
  for (double eps : c.cfg.eps_values()) {
    const ExponentEstimate e = random_exponent_montecarlo(eps, N, M, seed, c.threads);
    const double r = random_exponent_quadrature(eps).value;
    t.add_row({eps, double(N), double(M), e.value, e.std_error, e.kappa, r, e.value - r});
    c.out << "eps=" << format_double(eps) << " R_mc=" << fmt6(e.value) << " stderr=" << fmt6(e.std_error)
          << " kappa=" << fmt6(e.kappa) << " R=" << fmt6(r) << "\n";
  }
  c.save(t, "random_mc.csv");
}

void lambda_scan_cmd(const Context& c) {
  const GridSpec grid{static_cast<int>(c.cfg.get_long("Ng"))};
  OrbitOptions opt;
  opt.points = c.cfg.get_long("Np");
  opt.iterates = c.cfg.get_long("M");
  opt.transient = c.cfg.get_long("transient");
  opt.estimator = estimator_from_string(c.cfg.raw("estimator"));
  opt.seed = c.cfg.get_u64("seed");
  Table summary = c.table("lambda_summary", {"eps", "Lambda_num", "Lambda_extrap", "R_quadrature", "sigma_S2",
                                             "sigma_total", "Lambda_M2", "Lambda_M4", "Lambda_coarse", "std_error",
                                             "extrap_residual", "max_lambda"});
  for (double eps : c.cfg.eps_values()) {
    const LambdaScanResult r = lambda_scan(eps, grid, opt, c.threads);
    const double R = random_exponent_quadrature(eps).value;
    Table cells = c.table("lambda_scan", {"eps", "theta", "beta", "lambda_g", "sigma_g", "weight", "h"});
    std::vector<std::array<double, 3>> pts;
    for (const auto& cell : r.cells) {
      cells.add_row({eps, cell.theta, cell.beta, cell.lambda, cell.sigma, cell.weight, cell.h});
      pts.push_back({cell.theta, cell.beta, cell.h});
    }
    const std::string tag = "eps" + format_double(eps);
    c.save(cells, "lambda_scan_" + tag + ".csv");
    c.save_plot(pts, "lambda_scan_" + tag + ".dat");
    summary.add_row({eps, r.lambda_num, r.lambda_extrap, R, r.sigma_s2, r.sigma_total, r.lambda_half,
                     r.lambda_quarter, r.lambda_coarse, r.std_error, r.extrap_residual, r.max_lambda});
    c.out << "eps=" << format_double(eps) << " Lambda=" << fmt6(r.lambda_num) << " Lambda_extrap=" << fmt6(r.lambda_extrap)
          << " R=" << fmt6(R) << " sigma_S2=" << fmt6(r.sigma_s2) << " sigma_total=" << fmt6(r.sigma_total) << "\n";
  }
  c.save(summary, "lambda_summary.csv");
}

void diffused_cmd(const Context& c) {
  Table t = c.table("diffused", {"eps", "delta", "R_eps_delta", "stderr", "R_quadrature"});
  DiffusedSpec spec;
  spec.delta = c.cfg.get_double("delta");
  spec.N = c.cfg.get_long("N");
  spec.rotations = c.cfg.get_long("Mr");
  spec.starts = c.cfg.get_long("Mp");
  const auto seed = c.cfg.get_u64("seed");
  for (double eps : c.cfg.eps_values()) {
    spec.eps = eps;
    const ExponentEstimate e = diffused_exponent(spec, seed, c.threads);
    const double R = random_exponent_quadrature(eps).value;
    t.add_row({eps, spec.delta, e.value, e.std_error, R});
    c.out << "eps=" << format_double(eps) << " delta=" << format_double(spec.delta) << " R_eps_delta=" << fmt6(e.value)
          << " stderr=" << fmt6(e.std_error) << " R=" << fmt6(R) << "\n";
  }
  c.save(t, "diffused.csv");
}

std::string record_flags(const FixedPointRecord& r) {
  std::string s;
  if (r.degenerate) s += "degenerate|";
  if (r.residual_flag) s += "residual|";
  if (r.double_candidate) s += "double|";
  if (s.empty()) return "-";
  s.pop_back();
  return s;
}

void fixed_points_cmd(const Context& c) {
  Table t = c.table("fixed_points", {"eps", "beta", "theta", "b", "x", "y", "z", "trace", "det", "mu1_re", "mu1_im",
                                     "mu2_re", "mu2_im", "stability", "residual", "flags"});
  const double beta = c.cfg.get_double("beta"), theta = c.cfg.get_double("theta");
  for (double eps : c.cfg.eps_values()) {
    const auto recs = find_fixed_points(beta, theta, eps);
    std::string codes;
    for (const auto& r : recs) {
      const Vec3& p = r.location.vec();
      t.add_row({eps, beta, theta, r.b, p.x, p.y, p.z, r.trace, r.determinant, r.eigenvalues[0].real(),
                 r.eigenvalues[0].imag(), r.eigenvalues[1].real(), r.eigenvalues[1].imag(),
                 std::string(1, to_char(r.stability)), r.residual, record_flags(r)});
      codes += to_char(r.stability);
    }
    c.out << "eps=" << format_double(eps) << " fixed_points=" << recs.size() << " types=" << (codes.empty() ? "-" : codes)
          << " mu_max=" << fmt6(max_eigenvalue(eps)) << "\n";
  }
  c.save(t, "fixed_points.csv");
}

void bifurcation_cmd(const Context& c) {
  BifurcationGrid g;
  g.n_theta = static_cast<int>(c.cfg.get_long("n_theta"));
  g.n_beta = static_cast<int>(c.cfg.get_long("n_beta"));
  g.theta_min = c.cfg.get_double("theta_min");
  g.theta_max = c.cfg.get_double("theta_max");
  g.beta_min = c.cfg.get_double("beta_min");
  g.beta_max = c.cfg.get_double("beta_max");
  for (double eps : c.cfg.eps_values()) {
    const BifurcationMap m = bifurcation_map(eps, g, c.threads);
    Table t = c.table("bifurcation", {"eps", "theta", "beta", "nE", "nH", "nR", "code", "flags"});
    std::vector<std::array<double, 3>> pts;
    std::map<std::string, int> tally;
    int violations = 0;
    for (const auto& cell : m.cells) {
      std::string flags;
      if (cell.flagged) flags += "flagged|";
      if (cell.boundary) flags += "boundary|";
      if (flags.empty()) flags = "-";
      else flags.pop_back();
      t.add_row({eps, cell.theta, cell.beta, double(cell.nE), double(cell.nH), double(cell.nR), cell.code, flags});
      pts.push_back({cell.theta, cell.beta, double(cell.total())});
      ++tally[cell.code];
      if (!cell.flagged && cell.nE - cell.nH + cell.nR != 2) ++violations;
    }
    const std::string tag = "eps" + format_double(eps);
    c.save(t, "bifurcation_" + tag + ".csv");
    c.save_plot(pts, "bifurcation_" + tag + ".dat");
    c.out << "eps=" << format_double(eps) << " cells=" << m.cells.size();
    for (const auto& [code, n] : tally) c.out << " " << code << ":" << n;
    c.out << " euler_violations=" << violations << "\n";
  }
}

void double_zero_cmd(const Context& c) {
  Table t = c.table("double_zero_curves", {"b", "m", "beta", "branch"});
  const auto pts = double_zero_curves(static_cast<int>(c.cfg.get_long("samples")));
  for (const auto& p : pts) t.add_row({p.b, p.m, p.beta, p.b < kPi ? 1.0 : 2.0});
  c.save(t, "double_zero_curves.csv");
  const DoubleZeroPoint tp = double_zero_point(kPi);
  c.out << "points=" << pts.size() << " triple_point_m=" << fmt6(tp.m) << " triple_point_beta=" << fmt6(tp.beta)
        << "\n";
}

void megno_demo(const Context& c) {
  Table t = c.table("megno_demo", {"eps", "orbit", "k", "yhat", "improved", "classical", "regular_score"});
  const long N = std::max(4L, c.cfg.get_long("N"));
  const auto seed = c.cfg.get_u64("seed");
  for (double eps : c.cfg.eps_values()) {
    Philox rng(seed, 5);
    const Rotation chaotic_g = sample_haar(rng).rotation;
    struct Orbit {
      const char* name;
      Rotation g;
      TangentState s;
    };
    // rotation about the twist axis: every orbit stays on its latitude circle
    const SpherePoint p0 = sphere_from_uniforms(0.0, 0.3);
    const Orbit orbits[] = {
        {"regular", Rotation::from_axis_angle({0, 0, 1}, 1.0), TangentState::from_angle(p0, kPi / 2)},
        {"chaotic", chaotic_g, sample_tangent_state(rng)},
    };
    for (const auto& o : orbits) {
      const OrbitMap map(o.g, eps);
      MegnoAccumulator acc(2, 0);
      KahanSum sum;
      TangentState s = o.s;
      long next = 4;
      for (long k = 1; k <= N; ++k) {
        const StepResult r = map.step(s);
        acc.add(r.log_stretch);
        sum.add(r.log_stretch);
        s = r.state;
        if (k == next || k == N) {
          t.add_row({eps, std::string(o.name), double(k), acc.yhat(), acc.improved(), sum.value() / double(k),
                     acc.regular_score()});
          if (k == next) next *= 2;
        }
      }
      c.out << "eps=" << format_double(eps) << " orbit=" << o.name << " N=" << N << " Yhat=" << fmt6(acc.yhat())
            << " improved=" << fmt6(acc.improved()) << " regular_score=" << fmt6(acc.regular_score()) << "\n";
    }
  }
  c.save(t, "megno_demo.csv");
}

void linear_check(const Context& c) {
  const auto m = c.cfg.get_doubles("matrix");
  const Matrix2 A0{m[0], m[1], m[2], m[3]};
  if (!(A0.det() > 0.0)) throw ConfigError("matrix must have positive determinant", c.cfg.line_of("matrix"));
  const Matrix2 A = A0.normalized();
  const double delta = c.cfg.get_double("delta");
  const long N = c.cfg.get_long("N"), M = std::max(2L, c.cfg.get_long("M"));
  const auto seed = c.cfg.get_u64("seed");
  const int n_alpha = static_cast<int>(c.cfg.get_long("n_alpha")), n_z = static_cast<int>(c.cfg.get_long("n_z"));

  const double ab = avila_bochi(A);
  const double lam = lambda_of_coset(A, static_cast<int>(c.cfg.get_long("n_phi")));
  const ExponentEstimate diff = matrix_diffused_exponent(A, c.cfg.get_double("g_angle"), delta, N, M, seed, c.threads);
  const double dev = verify_m_delta_lebesgue(A, delta, n_alpha, n_z, c.threads);
  const std::vector<Matrix2> pair{{1, 0, 1, 1}, {1, 1, 0, 1}};
  const std::vector<double> half{0.5, 0.5};
  const double eig_avg = eigenvalue_average(pair, half);
  const ExponentEstimate rp = random_product_exponent(pair, half, N, M, seed, c.threads);

  Table s = c.table("linear_summary", {"delta", "max_deviation", "avila_bochi", "lambda_of_coset", "diffused",
                                       "diffused_stderr", "pair_eigenvalue_average", "pair_random_exponent",
                                       "pair_stderr"});
  s.add_row({delta, dev, ab, lam, diff.value, diff.std_error, eig_avg, rp.value, rp.std_error});
  c.save(s, "linear_summary.csv");

  Table d = c.table("linear_density", {"alpha", "z", "phi"});
  for (int k = 0; k < 4; ++k) {
    const double alpha = kTwoPi * k / 4.0;
    const CircleDensity phi = circle_operator_fixed_point(A, alpha, delta, n_z);
    for (int z = 0; z < n_z; ++z) d.add_row({alpha, kTwoPi * (z + 0.5) / n_z, phi.values[static_cast<std::size_t>(z)]});
  }
  c.save(d, "linear_density.csv");

  c.out << "avila_bochi=" << fmt6(ab) << " lambda_of_coset=" << fmt6(lam) << " diffused=" << fmt6(diff.value)
        << " max_deviation=" << fmt6(dev) << " pair_eigenvalue_average=" << fmt6(eig_avg)
        << " pair_random_exponent=" << fmt6(rp.value) << "\n";
}

void verify_cmd(const Context& c) {
  const std::string path = c.cfg.raw("file");
  if (path.empty()) throw ConfigError("verify needs file=<csv>", c.cfg.line_of("file"));
  Table t;
  try {
    t = parse_csv(read_file(path));
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::string> problems;
  Config echoed;
  for (const auto& [k, v] : t.header) {
    if (!Config::known(k)) continue;
    try {
      echoed.set(k, v);
    } catch (const ConfigError& e) {
      problems.push_back(std::string("header value: ") + e.what());
    }
  }
  const std::string* hash = t.header_value("config_hash");
  if (!hash) problems.push_back("missing config_hash");
  else if (*hash != echoed.hash()) problems.push_back("config_hash does not match the echoed config");
  const std::string* rows = t.header_value("rows");
  if (!rows) problems.push_back("missing rows");
  else if (*rows != std::to_string(t.rows.size())) problems.push_back("rows header does not match the body");
  if (std::find(t.columns.begin(), t.columns.end(), "eps") != t.columns.end()) {
    const auto eps = echoed.eps_values();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double e = t.number(i, "eps");
      if (std::find(eps.begin(), eps.end(), e) == eps.end()) {
        problems.push_back("row " + std::to_string(i + 1) + ": eps not in the configured list");
        break;
      }
    }
  }
  const std::string* table = t.header_value("table");
  if (table && *table == "lambda_scan") {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double th = t.number(i, "theta"), be = t.number(i, "beta"), l = t.number(i, "lambda_g");
      const double h = l * std::cos(be) * (1.0 - std::cos(th)) * kPi / 2.0;
      if (std::abs(h - t.number(i, "h")) > 1e-12 * std::max(1.0, std::abs(h))) {
        problems.push_back("row " + std::to_string(i + 1) + ": h inconsistent with lambda_g");
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "verify failed for '" + path + "':";
    for (const auto& p : problems) msg += " " + p + ";";
    throw NumericError(msg);
  }
  c.out << "verified " << path << " rows=" << t.rows.size() << " config_hash=" << *hash << "\n";
}

using Handler = void (*)(const Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h = {
      {"random-exact", random_exact},       {"random-mc", random_mc},
      {"lambda-scan", lambda_scan_cmd},     {"diffused", diffused_cmd},
      {"fixed-points", fixed_points_cmd},   {"bifurcation-map", bifurcation_cmd},
      {"double-zero-curves", double_zero_cmd}, {"megno-demo", megno_demo},
      {"linear-check", linear_check},       {"verify", verify_cmd},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, h] : handlers()) v.push_back(n);
    return v;
  }();
  return names;
}

void run(const std::string& subcommand, const Config& cfg, std::ostream& out) {
  cfg.validate();
  for (const auto& [name, handler] : handlers()) {
    if (name != subcommand) continue;
    const Context ctx{subcommand, cfg, out, static_cast<int>(cfg.get_long("threads")), cfg.output_dir()};
    handler(ctx);
    return;
  }
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

}  // namespace twistlab
