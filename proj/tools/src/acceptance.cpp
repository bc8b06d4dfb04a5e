#include "fracheat_app/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include <fracheat/continuation.hpp>
#include <fracheat/evolve.hpp>
#include <fracheat/kernel.hpp>
#include <fracheat/params.hpp>
#include <fracheat/selfsim.hpp>
#include <fracheat/spectral.hpp>

namespace fracheat::app {

namespace {

std::string label(const char* fmt, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

std::string label(const char* fmt, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

std::string label(const char* fmt, double a, double b, double c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

ProfileOptions profile_options(const AcceptanceOptions& opt) {
  ProfileOptions po;
  po.workers = opt.workers;
  po.cache_dir = opt.cache_dir;
  return po;
}

const KernelInterpolant& interpolant(double alpha, int dim, double r_max, const AcceptanceOptions& opt) {
  static std::mutex mu;
  static std::map<std::tuple<double, int, double>, std::unique_ptr<KernelInterpolant>> memo;
  std::lock_guard lock(mu);
  auto& slot = memo[{alpha, dim, r_max}];
  if (!slot)
    slot = std::make_unique<KernelInterpolant>(kernel_profile(alpha, dim, default_radii(r_max), profile_options(opt)));
  return *slot;
}

std::ofstream plot_file(const AcceptanceOptions& opt, const std::string& name) {
  if (!opt.out) return {};
  std::filesystem::create_directories(*opt.out);
  std::ofstream f(*opt.out / name);
  f.precision(10);
  return f;
}

double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

// ---------------------------------------------------------------- 1
Check kernel_oracle(const AcceptanceOptions&) {
  Check c{"1 kernel oracle"};
  QuadratureOptions q;
  q.rel_tol = 1e-8;
  for (double r : {0.0, 1.0, 5.0, 20.0}) {
    const double v = kernel_value(0.5, 1, r, q).value;
    const double ref = 1.0 / (std::numbers::pi * (1.0 + r * r));
    c.expect(at_most(label("cauchy rel err r=%g", r), std::abs(v / ref - 1.0), 1e-5));
  }
  for (int dim : {1, 2})
    for (double r : {0.0, 1.0, 2.0, 5.0}) {
      const double v = kernel_value(1.0, dim, r, q).value;
      const double ref = gaussian_kernel(dim, 1.0, r);
      c.expect(at_most(label("gaussian N=%g rel err r=%g", dim, r), std::abs(v / ref - 1.0), 1e-6));
    }
  return c;
}

// ---------------------------------------------------------------- 2
Check kernel_bound(const AcceptanceOptions& opt) {
  Check c{"2 kernel bound"};
  const double r1 = opt.quick ? 50.0 : 100.0;
  auto csv = plot_file(opt, "kernel_bound.csv");
  if (csv) csv << "alpha,dim,r_max,c_bound,r_at_sup\n";
  for (double alpha : {0.25, 0.5, 0.75})
    for (int dim : {1, 2}) {
      const auto po = profile_options(opt);
      const auto b1 = kernel_bound_constant(kernel_profile(alpha, dim, default_radii(r1), po));
      const auto b2 = kernel_bound_constant(kernel_profile(alpha, dim, default_radii(2.0 * r1), po));
      if (csv) {
        csv << alpha << ',' << dim << ',' << r1 << ',' << b1.c_bound << ',' << b1.r_at_sup << '\n';
        csv << alpha << ',' << dim << ',' << 2 * r1 << ',' << b2.c_bound << ',' << b2.r_at_sup << '\n';
      }
      const bool finite = std::isfinite(b1.c_bound) && std::isfinite(b2.c_bound);
      c.expect(at_most(label("bound change a=%g N=%g", alpha, dim),
                       finite ? std::abs(b2.c_bound / b1.c_bound - 1.0) : INFINITY, 0.05));
      c.info(label("c_bound a=%g N=%g", alpha, dim), b2.c_bound);
    }
  return c;
}

// ---------------------------------------------------------------- 3
Check mass_semigroup(const AcceptanceOptions& opt) {
  Check c{"3 mass and semigroup"};
  struct Case {
    double alpha;
    int dim;
    double L;
    int M;
    double t0;
  };
  const double k = 3.0;
  for (const Case& cs : {Case{0.5, 1, 200, 4096, 0.1}, Case{0.75, 1, 200, 4096, 0.1}, Case{0.5, 2, 60, 512, 0.3}}) {
    const Grid g = build_grid(cs.dim, cs.L, cs.M);
    const ModelParams P{cs.alpha, 0.0, 2.0, cs.dim};
    EvolveOptions eo;
    eo.stepper.params = P;
    eo.stepper.absorption_coeff = 0.0;
    eo.snapshot_every_step = true;
    const Field init = dirac_initial(g, k, cs.t0, P, 0.0);
    const auto traj = evolve(init, TimeMesh::graded(cs.t0, 1.0, opt.quick ? 20 : 50, 1.0), eo);
    const double m0 = traj.diagnostics.front().mass;
    double drift = 0.0;
    for (const auto& d : traj.diagnostics) drift = std::max(drift, std::abs(d.mass / m0 - 1.0));
    c.expect(at_most(label("mass drift a=%g N=%g", cs.alpha, cs.dim), drift, 1e-4));
    c.expect(at_most(label("initial mass vs k a=%g N=%g", cs.alpha, cs.dim), std::abs(m0 / k - 1.0), 1e-4));
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int dim : {1, 2}) {
    const Grid g = dim == 1 ? build_grid(1, 200, 4096) : build_grid(2, 60, 512);
    Field f(g);
    for (double& v : f.values) v = U(rng);
    SpectralOps ops(g);
    for (double alpha : {0.25, 0.5, 0.75}) {
      Field a = f, b = f;
      ops.apply_heat(a, 0.13, alpha);
      ops.apply_heat(a, 0.29, alpha);
      ops.apply_heat(b, 0.42, alpha);
      c.expect(at_most(label("spectral composition a=%g N=%g", alpha, dim), max_abs_diff(a, b) / b.max(), 1e-12));
    }
  }

  // int G(s, -y) G(t, y) dy = G(s + t, 0) on a fine profile
  struct Conv {
    double alpha;
    int dim;
    double L;
    int M;
  };
  for (const Conv& cv : {Conv{0.5, 1, 200, 4096}, Conv{0.75, 1, 200, 4096}, Conv{0.5, 2, 30, 512}}) {
    std::vector<double> radii;
    for (double r = 0.0; r < 10.0 - 1e-9; r += 0.005) radii.push_back(r);
    for (double r = 10.0; r <= 1.01 * cv.L; r *= 1.02) radii.push_back(r);
    auto po = profile_options(opt);
    po.tol_outer = 1e-6;
    const KernelInterpolant kern(kernel_profile(cv.alpha, cv.dim, radii, po));
    const Grid g = build_grid(cv.dim, cv.L, cv.M);
    for (auto [s, t] : {std::pair{0.5, 0.5}, std::pair{0.2, 0.8}}) {
      const Field probe(g);
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = probe.radius(i);
        sum += kern(s, r).value * kern(t, r).value;
      }
      sum *= g.cell_volume();
      const double ref = kern(s + t, 0.0).value;
      c.expect(at_most(label("convolution a=%g N=%g s=%g", cv.alpha, cv.dim, s), std::abs(sum / ref - 1.0), 1e-5));
    }
  }
  return c;
}

// ---------------------------------------------------------------- 4
Check smoothing(const AcceptanceOptions& opt) {
  Check c{"4 smoothing"};
  struct Case {
    double alpha;
    int dim;
    double L;
    int M;
    double t1;
  };
  const double k = 5.0;
  auto csv = plot_file(opt, "smoothing.csv");
  if (csv) csv << "alpha,dim,t,scaled_max\n";
  for (const Case& cs : {Case{0.25, 1, 200, 1 << 19, 0.2}, Case{0.5, 1, 200, 4096, 0.1}, Case{0.75, 1, 200, 4096, 0.1},
                         Case{0.5, 2, 60, 512, 0.3}}) {
    const Grid g = build_grid(cs.dim, cs.L, cs.M);
    const ModelParams P{cs.alpha, 0.0, 2.0, cs.dim};
    const Field init = dirac_initial(g, k, cs.t1, P, 0.0);
    SpectralOps ops(g);
    double lo = INFINITY, hi = 0.0;
    for (int j = 0; j <= 8; ++j) {
      const double t = cs.t1 * std::pow(10.0, j / 8.0);
      Field u = init;
      ops.apply_heat(u, t - cs.t1, cs.alpha);
      const double v = u.max() * std::pow(t, cs.dim / (2.0 * cs.alpha)) / k;
      if (csv) csv << cs.alpha << ',' << cs.dim << ',' << t << ',' << v << '\n';
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    c.expect(at_most(label("spread a=%g N=%g", cs.alpha, cs.dim), (hi - lo) / (0.5 * (hi + lo)), 0.02));
    c.info(label("center constant a=%g N=%g", cs.alpha, cs.dim), hi, "DERIVED");
  }
  return c;
}

// ---------------------------------------------------------------- 5
Check comparison(const AcceptanceOptions& opt) {
  Check c{"5 comparison bounds"};
  const Grid g = build_grid(2, 60, 512);
  const auto& kern = interpolant(0.5, 2, 100.0, opt);
  const std::vector<double> ks{1.0, 4.0, 16.0, 64.0, 256.0};
  const std::vector<double> checkpoints{0.5, 0.75, 1.0};
  for (double p : {1.2, 1.4}) {
    const ModelParams P{0.5, 0.0, p, 2};
    FamilyOptions fo;
    fo.workers = opt.workers;
    fo.evolve.stepper.params = P;
    const auto mesh = TimeMesh::graded(0.3, 1.0, opt.quick ? 20 : 40, TimeMesh::default_gamma(0.0));
    const auto fr = dirac_family_run(ks, P, g, mesh, checkpoints, fo);
    double mk = -INFINITY, mf = -INFINITY;
    for (const auto& m : fr.members) {
      Barrier bk{BarrierKind::Kernel, m.k, 1.0, &kern};
      mk = std::max(mk, barrier_check(m.checkpoints, P, bk).margin);
      Barrier bf{BarrierKind::Flat};
      mf = std::max(mf, barrier_check(m.checkpoints, P, bf).margin);
    }
    c.expect(at_most(label("kernel barrier margin p=%g", p), mk, 1e-3, "PAPER"));
    c.expect(at_most(label("flat barrier margin p=%g", p), mf, 1e-3, "PAPER"));
    c.info(label("monotone in k margin p=%g", p), fr.monotonicity.worst_margin);
  }
  return c;
}

// ---------------------------------------------------------------- 6
Check scaling(const AcceptanceOptions& opt) {
  Check c{"6 scaling covariance"};
  const double lam = 2.0;
  const ModelParams P{0.5, 0.0, 1.4, 2};
  const double a = P.decay_exponent();
  const double q = continuation_exponent(P);
  const double ts = std::pow(lam, 2.0 * P.alpha);
  const int M = 512;
  const Grid gA = build_grid(2, 60, M), gB = build_grid(2, 60 / lam, M);
  const double kA = 10.0, kB = kA * std::pow(lam, q);
  const std::vector<double> tB{0.25, 1.0};
  std::vector<double> tA;
  for (double t : tB) tA.push_back(ts * t);
  const TimeMesh mA = TimeMesh::graded(0.2, ts * 1.0, opt.quick ? 30 : 60, 2.0).with_breakpoints(tA);
  TimeMesh mB = mA;
  for (double& t : mB.nodes) t /= ts;
  mB.t0 /= ts;
  mB.T /= ts;
  EvolveOptions eo;
  eo.stepper.params = P;
  eo.snapshot_times = tA;
  const auto trA = evolve(dirac_initial(gA, kA, mA.nodes.front(), P), mA, eo);
  eo.snapshot_times = tB;
  const auto trB = evolve(dirac_initial(gB, kB, mB.nodes.front(), P), mB, eo);
  const double gain = std::pow(lam, 2.0 * P.alpha * a);
  for (std::size_t i = 0; i < tB.size(); ++i) {
    const Field& uA = trA.snapshot_at(tA[i]);
    const Field& uB = trB.snapshot_at(tB[i]);
    double d = 0.0;
    for (std::size_t n = 0; n < uB.values.size(); ++n) d = std::max(d, std::abs(gain * uA.values[n] - uB.values[n]));
    c.expect(at_most(label("rescaled max-norm rel t=%g", tB[i]), d / uB.max(), 1e-2, "PAPER"));
  }
  return c;
}

// ---------------------------------------------------------------- 7, 9
struct VssRun {
  ContinuationResult res;
  ModelParams params;
};

const VssRun& very_singular_run(const AcceptanceOptions& opt) {
  static std::mutex mu;
  static std::map<bool, std::unique_ptr<VssRun>> memo;
  std::lock_guard lock(mu);
  auto& slot = memo[opt.quick];
  if (!slot) {
    ContinuationOptions co;
    co.params = {0.5, 0.0, 1.4, 2};
    co.grid = build_grid(2, 60, 512);
    co.K0 = 0.1;
    co.zoom = 2.0;
    co.cycles = 37;
    co.steps_per_cycle = 40;
    slot = std::make_unique<VssRun>(VssRun{run_continuation(co), co.params});
  }
  return *slot;
}

Check trichotomy(const AcceptanceOptions& opt) {
  Check c{"7 regime trichotomy"};
  // (a) p < 1: no saturation
  {
    const ModelParams P{0.5, 0.0, 0.7, 1};
    const Grid g = build_grid(1, 200, 4096);
    std::vector<double> ks;
    for (double k = 1.0; k <= 128.0; k *= 2.0) ks.push_back(k);
    FamilyOptions fo;
    fo.workers = opt.workers;
    fo.evolve.stepper.params = P;
    const auto fr = dirac_family_run(ks, P, g, TimeMesh::graded(0.1, 1.0, 200, 2.0), {1.0}, fo);
    std::vector<double> u0;
    for (const auto& m : fr.members) u0.push_back(m.checkpoints.back().center());
    const std::size_t i16 = 4;  // k = 16
    c.expect(at_least("(a) u_64/u_16 at t=1", u0[i16 + 2] / u0[i16], 1.5, "PAPER"));
    double worst = INFINITY;
    for (std::size_t i = i16; i < i16 + 3; ++i) worst = std::min(worst, u0[i + 1] / u0[i]);
    c.expect(at_least("(a) min doubling ratio k=16..128", worst, 1.2));
  }
  // (b) flat regime, continuation in k
  {
    ContinuationOptions co;
    co.params = {0.5, 0.0, 1.2, 2};
    co.grid = build_grid(2, 60, 512);
    co.K0 = 0.1;
    co.zoom = zoom_for_doublings(co.params, 3.0);
    co.cycles = opt.quick ? 6 : 9;
    co.steps_per_cycle = 40;
    const double s1 = std::pow(2.0, -2.0 / 3.0), s2 = std::pow(2.0, -1.0 / 3.0);
    co.snapshot_times = {s1, s2};
    const Grid eta = build_grid(2, 32, 256);
    std::vector<std::pair<double, double>> series;  // (K, gap)
    const double q = continuation_exponent(co.params);
    run_continuation(co, [&](const CycleState& st, double t) {
      if (st.cycle + 2 < co.cycles) return;
      const double Keff = st.K * std::pow(t, q / (2.0 * co.params.alpha));
      series.emplace_back(Keff, flatness_gap(rescale_profile(*st.field, co.params, eta)));
    });
    std::sort(series.begin(), series.end());
    auto csv = plot_file(opt, "flat_gap.csv");
    if (csv) csv << "K,gap\n";
    for (auto [K, gap] : series)
      if (csv) csv << K << ',' << gap << '\n';
    const std::size_t n = series.size();
    bool decreasing = n >= 5;
    for (std::size_t i = n >= 5 ? n - 4 : 1; i < n; ++i)
      if (!(series[i].second < series[i - 1].second)) decreasing = false;
    c.expect(at_least("(b) gap strictly decreasing over 4 doublings", decreasing ? 1.0 : 0.0, 1.0, "PAPER"));
    c.expect(at_most(label("(b) final gap K=%.3g", series.back().first), series.back().second, 0.15, "PAPER"));
  }
  // (c) very singular regime
  {
    const auto& run = very_singular_run(opt);
    double min_gap = INFINITY;
    for (const auto& u : run.res.at_one) min_gap = std::min(min_gap, flatness_gap(rescale_profile(u, run.params)));
    c.expect(at_least("(c) min gap over k", min_gap, 0.2, "PAPER"));
    const auto prof = rescale_profile(run.res.at_one.back(), run.params);
    const auto fit = tail_fit(prof, 3.0, 12.0);
    const double target = -(run.params.dim + 2.0 * run.params.alpha);
    c.expect(within(label("(c) tail slope on [3,12] K=%.3g", run.res.K.back()), fit.slope, target, 0.15, "PAPER"));
    c.info("(c) slope with log factor", fit.slope_with_log);
    c.info("(c) log correction score", fit.log_correction_score);
  }
  return c;
}

Check selfsim_residual_check(const AcceptanceOptions& opt) {
  Check c{"9 self-similar residual"};
  const auto& run = very_singular_run(opt);
  const auto prof = rescale_profile(run.res.at_one.back(), run.params);
  const auto r = selfsim_residual(prof);
  c.expect(at_most(label("normalized residual K=%.3g", run.res.K.back()), r.normalized, 5e-2));
  c.info("nyquist fraction", r.nyquist_fraction);
  Profile flat;
  flat.params = run.params;
  flat.v = Field(build_grid(2, 60, 512), flat_profile_value(run.params));
  flat.v.time = 1.0;
  c.expect(at_most("flat constant residual", selfsim_residual(flat).normalized, 1e-12, "TRIVIAL"));
  if (opt.out) {
    auto csv = plot_file(opt, "vss_profile.csv");
    const auto fit = tail_fit(prof, 3.0, 12.0);
    csv << "eta,v,fit\n";
    const Field& v = prof.v;
    const int m = v.grid.points, ci = v.grid.center_index();
    for (int j = ci; j < m; ++j) {
      const double eta = v.grid.coord(j);
      const double fv = eta > 0.0 ? std::exp(fit.intercept + fit.slope * std::log(eta)) : NAN;
      csv << eta << ',' << v.at(ci, j) << ',' << fv << '\n';
    }
  }
  return c;
}

// ---------------------------------------------------------------- 8
Check short_time(const AcceptanceOptions& opt) {
  Check c{"8 short-time constant"};
  const ModelParams P{0.5, 0.0, 1.4, 1};
  const Grid g = build_grid(1, 50, opt.quick ? 16384 : 65536);
  std::vector<double> ts;
  for (double t = opt.quick ? 0.2 : 0.1; ts.size() < 4; t *= 0.5) ts.push_back(t);
  StepperConfig sc;
  sc.params = P;
  const auto t1 = short_time_constant(P, 1.0, ts, g, sc);
  const auto t8 = short_time_constant(P, 8.0, ts, g, sc);
  c.expect(at_most("extrapolated k=1 vs k=8", std::abs(t8.extrapolated / t1.extrapolated - 1.0), 0.05, "PAPER"));
  c.info("extrapolated k=1", t1.extrapolated);
  c.info("extrapolated k=8", t8.extrapolated);
  sc.absorption_coeff = 0.0;
  const auto off = short_time_constant(P, 1.0, ts, g, sc);
  c.expect(at_most("absorption off vs Gamma(1,0)", std::abs(off.extrapolated / kernel_center_value(0.5, 1) - 1.0), 1e-3));
  return c;
}

// ---------------------------------------------------------------- 10
Check barrier_threshold(const AcceptanceOptions& opt) {
  Check c{"10 barrier threshold"};
  const ModelParams P{0.5, 0.0, 1.4, 2};
  const int m = opt.quick ? 256 : 512;
  const double L = opt.quick ? 30.0 : 60.0;
  const auto r1 = find_barrier_threshold(P, build_grid(2, L, m));
  const auto r2 = find_barrier_threshold(P, build_grid(2, L, 2 * m));
  c.expect(at_least("threshold found on M and 2M", (r1.found && r2.found) ? 1.0 : 0.0, 1.0));
  c.expect(at_least("minimum monotone in lambda", (r1.monotone && r2.monotone) ? 1.0 : 0.0, 1.0, "PAPER"));
  c.expect(at_most("threshold change M->2M", std::abs(r2.lambda_hat / r1.lambda_hat - 1.0), 0.1));
  c.info("min at lambda=1e-6", r1.min_at_small);
  c.info("threshold", r1.lambda_hat);
  c.info("threshold 2M", r2.lambda_hat);
  return c;
}

// ---------------------------------------------------------------- 11
double rk4_absorb(double y, double ta, double tb, double beta, double p, int n) {
  auto f = [&](double t, double v) { return -std::pow(t, beta) * std::pow(std::max(v, 0.0), p); };
  const double h = (tb - ta) / n;
  double t = ta;
  for (int i = 0; i < n; ++i) {
    const double k1 = f(t, y), k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2), k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

Check splitting_order(const AcceptanceOptions& opt) {
  Check c{"11 splitting order"};
  const ModelParams P{0.5, 0.0, 1.4, 1};
  const Grid g = build_grid(1, 200, opt.quick ? 1024 : 4096);
  const Field init = dirac_initial(g, 1.0, 0.5, P);
  std::vector<Field> fin;
  for (int K : {10, 20, 40}) {
    EvolveOptions eo;
    eo.stepper.params = P;
    fin.push_back(evolve(init, TimeMesh::graded(0.5, 1.0, K, 1.0), eo).snapshots.back());
  }
  const double factor = max_abs_diff(fin[0], fin[1]) / max_abs_diff(fin[1], fin[2]);
  c.expect(within("Richardson factor", factor, 4.0, 0.5));

  for (double beta : {0.0, -0.5, 1.0}) {
    const ModelParams F{0.5, beta, 1.4, 1};
    Field u(g, maximal_flat_solution(F, 0.2));
    u.time = 0.2;
    StepperConfig sc;
    sc.params = F;
    Stepper st(g, sc);
    const auto mesh = TimeMesh::graded(0.2, 2.0, 25, 1.0);
    for (std::size_t j = 0; j + 1 < mesh.nodes.size(); ++j) st.step(u, mesh.nodes[j], mesh.nodes[j + 1]);
    const double ref = maximal_flat_solution(F, 2.0);
    double d = 0.0;
    for (double v : u.values) d = std::max(d, std::abs(v / ref - 1.0));
    c.expect(at_most(label("flat tracking beta=%g", beta), d, 1e-9, "TRIVIAL"));
  }
  double worst = 0.0;
  for (double beta : {-0.5, 0.0, 0.7})
    for (double p : {0.5, 1.0, 1.4, 3.0})
      for (double y0 : {0.3, 1.0, 7.0}) {
        const double exact = absorb_scalar(y0, 0.25, 0.75, beta, p);
        const double ref = rk4_absorb(y0, 0.25, 0.75, beta, p, 20000);
        worst = std::max(worst, std::abs(exact - ref) / std::max(std::abs(ref), 1e-300));
      }
  c.expect(at_most("absorption flow vs RK4", worst, 1e-9));
  return c;
}

// ---------------------------------------------------------------- 12
Check marcinkiewicz(const AcceptanceOptions& opt) {
  Check c{"12 Marcinkiewicz estimate"};
  const auto& kern = interpolant(0.5, 1, 100.0, opt);
  const Grid g = build_grid(1, 200, 4096);
  const ModelParams P{0.5, 0.0, 2.0, 1};
  const auto mesh = TimeMesh::graded(0.1, 1.0, opt.quick ? 50 : 200, 2.0);
  EvolveOptions eo;
  eo.stepper.params = P;
  eo.stepper.absorption_coeff = 0.0;
  eo.snapshot_every_step = true;
  for (double beta : {0.0, -0.5}) {
    const double kappa = critical_exponents(0.5, beta, 1).p_star;
    std::vector<double> meas, ref;
    for (std::size_t j = 0; j + 1 < mesh.nodes.size(); ++j) {
      const double ta = mesh.nodes[j], tb = mesh.nodes[j + 1];
      const double w = (std::pow(tb, beta + 1.0) - std::pow(ta, beta + 1.0)) / (beta + 1.0);
      for (int i = 0; i < g.points; ++i) {
        meas.push_back(w * g.spacing());
        ref.push_back(kern(0.5 * (ta + tb), std::abs(g.coord(i))).value);
      }
    }
    // cell [t_j, t_j+1] carries the state at its right node
    auto quasinorm = [&](double k) {
      const auto traj = evolve(dirac_initial(g, k, mesh.nodes.front(), P, 0.0), mesh, eo);
      std::vector<double> v;
      v.reserve(meas.size());
      for (std::size_t j = 1; j < traj.snapshots.size(); ++j)
        v.insert(v.end(), traj.snapshots[j].values.begin(), traj.snapshots[j].values.end());
      return marcinkiewicz_quasinorm(v, meas, kappa).quasinorm;
    };
    const double q1 = quasinorm(1.0);
    for (double k : {2.0, 4.0})
      c.expect(at_most(label("quasinorm/(k q1) - 1, beta=%g k=%g", beta, k), std::abs(quasinorm(k) / (k * q1) - 1.0), 0.05,
                       "PAPER"));
    c.info(label("quasinorm k=1 beta=%g", beta), q1);
    c.info(label("interpolated kernel quasinorm beta=%g", beta), marcinkiewicz_quasinorm(ref, meas, kappa).quasinorm);
  }
  return c;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list{
      {1, "kernel oracle", &kernel_oracle},
      {2, "kernel bound", &kernel_bound},
      {3, "mass and semigroup", &mass_semigroup},
      {4, "smoothing", &smoothing},
      {5, "comparison bounds", &comparison},
      {6, "scaling covariance", &scaling},
      {7, "regime trichotomy", &trichotomy},
      {8, "short-time constant", &short_time},
      {9, "self-similar residual", &selfsim_residual_check},
      {10, "barrier threshold", &barrier_threshold},
      {11, "splitting order", &splitting_order},
      {12, "Marcinkiewicz estimate", &marcinkiewicz},
  };
  return list;
}

Report run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids,
                      const std::function<void(const Check&, double)>& on_done) {
  Report rep;
  rep.kind = "verify";
  const auto start = std::chrono::steady_clock::now();
  for (const auto& cr : acceptance_criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), cr.id) == ids.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Check ch;
    try {
      ch = cr.run(opt);
    } catch (const std::exception& e) {
      ch = Check{std::to_string(cr.id) + " " + cr.title};
      ch.pass = false;
      ch.note = std::string("aborted: ") + e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_done) on_done(ch, sec);
    rep.checks.push_back(std::move(ch));
  }
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace fracheat::app
