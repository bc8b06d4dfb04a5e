#include "fracheat_app/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <fracheat/continuation.hpp>
#include <fracheat/evolve.hpp>
#include <fracheat/field_io.hpp>
#include <fracheat/kernel.hpp>
#include <fracheat/params.hpp>
#include <fracheat/selfsim.hpp>

#include "fracheat_app/acceptance.hpp"

namespace fracheat::app {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.precision(12);
  return f;
}

void close_csv(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string tag(const char* fmt, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string k_suffix(double k) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "k%g", k);
  return buf;
}

StepperConfig stepper_config(const ExperimentConfig& cfg) {
  StepperConfig sc;
  sc.params = cfg.params;
  sc.absorption_coeff = cfg.absorption_coeff;
  sc.order = cfg.split == "diffusion-outer" ? SplitOrder::DiffusionOuter : SplitOrder::AbsorptionOuter;
  sc.negativity_rel = cfg.tol.negativity;
  sc.rk_substeps = cfg.rk_substeps;
  if (cfg.general_absorption) {
    const double p = cfg.params.p;
    sc.general = AbsorptionSpec::callable(cfg.params.beta, [p](double r) { return std::pow(r, p); });
  }
  return sc;
}

// quick only shortens the time stepping
Grid config_grid(const ExperimentConfig& cfg) { return build_grid(cfg.params.dim, cfg.L, cfg.M); }

TimeMesh config_mesh(const ExperimentConfig& cfg) {
  const int K = cfg.quick ? std::max(10, cfg.K / 4) : cfg.K;
  return TimeMesh::graded(cfg.t0, cfg.T, K, cfg.mesh_gamma()).with_breakpoints(cfg.checkpoints);
}

ProfileOptions profile_options(const ExperimentConfig& cfg) {
  ProfileOptions po;
  po.tol_inner = cfg.tol.kernel_inner;
  po.tol_outer = cfg.tol.kernel_outer;
  po.workers = cfg.workers;
  po.cache_dir = default_cache_dir();
  return po;
}

KernelInterpolant make_kernel(const ExperimentConfig& cfg) {
  return KernelInterpolant(kernel_profile(cfg.params.alpha, cfg.params.dim, default_radii(cfg.r_max), profile_options(cfg)));
}

// positive half axis of a profile: (eta, v, fit)
void write_profile_axis(const Field& v, const TailFit* fit, const std::filesystem::path& path) {
  auto f = open_csv(path);
  f << "eta,v,fit\n";
  const Grid& g = v.grid;
  const int ci = g.center_index();
  for (int j = ci; j < g.points; ++j) {
    const double eta = g.coord(j);
    const double val = g.dim == 1 ? v.at(j) : v.at(ci, j);
    f << eta << ',' << val << ',';
    if (fit && eta > 0.0)
      f << std::exp(fit->intercept + fit->slope * std::log(eta));
    else
      f << "nan";
    f << '\n';
  }
  close_csv(f, path);
}

Report finish(Report rep, const ExperimentConfig& cfg) {
  write_json(rep.to_json(), cfg.out / "report.json");
  return rep;
}

}  // namespace

// ---------------------------------------------------------------- kernel
Report run_kernel(const ExperimentConfig& cfg) {
  Report rep;
  rep.kind = "kernel";
  const double alpha = cfg.params.alpha;
  const int dim = cfg.params.dim;
  const double r_max = cfg.quick ? std::min(cfg.r_max, 50.0) : cfg.r_max;
  const auto prof = kernel_profile(alpha, dim, default_radii(r_max), profile_options(cfg));
  write_profile_csv(prof, cfg.out / "kernel_profile.csv");

  const bool cauchy = alpha == 0.5, gauss = alpha == 1.0;
  const auto path = cfg.out / "kernel_oracle.csv";
  auto f = open_csv(path);
  f << "r,gamma,abserr,oracle,rel_err\n";
  double worst_in = 0.0, worst_out = 0.0;
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    const double r = prof.radii[i];
    double ref = NAN;
    if (cauchy) ref = cauchy_kernel(dim, 1.0, r);
    if (gauss) ref = gaussian_kernel(dim, 1.0, r);
    const double rel = std::abs(prof.values[i] / ref - 1.0);
    f << r << ',' << prof.values[i] << ',' << prof.errors[i] << ',' << ref << ',' << rel << '\n';
    if (std::isfinite(ref) && ref > 1e-250) (r <= 10.0 ? worst_in : worst_out) = std::max(r <= 10.0 ? worst_in : worst_out, rel);
  }
  close_csv(f, path);

  Check conv{"quadrature"};
  conv.expect(at_least("profile converged", prof.converged ? 1.0 : 0.0, 1.0));
  conv.info("worst estimated rel error", prof.worst_rel_error);
  rep.checks.push_back(conv);

  Check center{"center value"};
  center.expect(at_most("rel err vs closed form", std::abs(prof.values.front() / kernel_center_value(alpha, dim) - 1.0),
                        10.0 * cfg.tol.kernel_inner));
  rep.checks.push_back(center);

  if (cauchy || gauss) {
    Check oc{cauchy ? "cauchy oracle" : "gaussian oracle"};
    oc.expect(at_most("worst rel err r<=10", worst_in, 10.0 * cfg.tol.kernel_inner));
    if (cauchy) oc.expect(at_most("worst rel err r>10", worst_out, 10.0 * cfg.tol.kernel_outer));
    rep.checks.push_back(oc);
  }

  Check tail{"tail"};
  const auto b = kernel_bound_constant(prof);
  tail.info("bound constant", b.c_bound);
  tail.info("radius of sup", b.r_at_sup);
  if (alpha < 1.0) {
    const KernelInterpolant kern(prof);
    tail.info("tail slope", kern.tail_slope());
    tail.info("tail constant closed form", tail_constant(alpha, dim));
  }
  rep.checks.push_back(tail);
  return finish(std::move(rep), cfg);
}

// ---------------------------------------------------------------- evolve
Report run_evolve(const ExperimentConfig& cfg) {
  Report rep;
  rep.kind = "evolve";
  const Grid g = config_grid(cfg);
  const TimeMesh mesh = config_mesh(cfg);
  const StepperConfig sc = stepper_config(cfg);
  const auto kern = make_kernel(cfg);
  const bool every = g.dim == 1;

  std::vector<Trajectory> runs(cfg.k_list.size());
  parallel_for(cfg.k_list.size(), cfg.workers, [&](std::size_t i) {
    EvolveOptions eo;
    eo.stepper = sc;
    eo.snapshot_times = cfg.checkpoints;
    eo.snapshot_every_step = every;
    runs[i] = evolve(dirac_initial(g, cfg.k_list[i], mesh.nodes.front(), cfg.params, sc.absorption_coeff), mesh, eo);
  });

  const bool flat = cfg.params.p > 1.0 && cfg.absorption_coeff > 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double k = cfg.k_list[i];
    const auto& traj = runs[i];
    const auto path = cfg.out / ("trajectory_" + k_suffix(k) + ".csv");
    auto f = open_csv(path);
    f << "t,mass,max,min,absorbed,flat_margin\n";
    for (const auto& d : traj.diagnostics)
      f << d.t << ',' << d.mass << ',' << d.max << ',' << d.min << ',' << d.absorbed << ',' << d.flat_margin << '\n';
    close_csv(f, path);

    std::vector<Field> at_cp;
    for (double t : cfg.checkpoints) at_cp.push_back(traj.snapshot_at(t));
    const auto cpath = cfg.out / ("checkpoints_" + k_suffix(k) + ".csv");
    auto c = open_csv(cpath);
    c << "t,center,mass,kernel_margin,flat_margin,duhamel_rel\n";
    Check ch{"barriers " + k_suffix(k)};
    std::optional<DuhamelReport> duh;
    if (every && mesh.steps() >= 32) duh = duhamel_residual(traj, sc, cfg.checkpoints);
    for (std::size_t j = 0; j < at_cp.size(); ++j) {
      const std::vector<Field> one{at_cp[j]};
      const double km = barrier_check(one, cfg.params, Barrier{BarrierKind::Kernel, k, 1.0, &kern}).margin;
      const double fm = flat ? barrier_check(one, cfg.params, Barrier{BarrierKind::Flat}).margin : NAN;
      c << at_cp[j].time << ',' << at_cp[j].center() << ',' << at_cp[j].mass() << ',' << km << ',' << fm << ','
        << (duh ? duh->checkpoints[j].max_rel : NAN) << '\n';
      ch.expect(at_most(tag("kernel margin t=%g", at_cp[j].time), km, cfg.tol.margin, "PAPER"));
      if (flat) ch.expect(at_most(tag("flat margin t=%g", at_cp[j].time), fm, cfg.tol.margin, "PAPER"));
    }
    close_csv(c, cpath);
    if (duh) ch.info("duhamel worst change", duh->worst_change);
    ch.info("clamped nodes", static_cast<double>(traj.clamped));
    write_field_csv(traj.snapshots.back(), cfg.out / ("final_" + k_suffix(k) + ".csv"));

    double rise = 0.0;
    for (std::size_t j = 1; j < traj.diagnostics.size(); ++j)
      rise = std::max(rise, (traj.diagnostics[j].mass - traj.diagnostics[j - 1].mass) / traj.diagnostics[0].mass);
    ch.expect(at_most("mass increase per step", rise, 1e-10, "TRIVIAL"));
    rep.checks.push_back(std::move(ch));
  }
  return finish(std::move(rep), cfg);
}

// ---------------------------------------------------------------- dirac-limit
Report run_dirac_limit(const ExperimentConfig& cfg) {
  Report rep;
  rep.kind = "dirac-limit";
  const Grid g = config_grid(cfg);
  const TimeMesh mesh = config_mesh(cfg);
  std::vector<double> ks(cfg.k_list);
  std::sort(ks.begin(), ks.end());
  FamilyOptions fo;
  fo.workers = cfg.workers;
  fo.evolve.stepper = stepper_config(cfg);
  const auto fr = dirac_family_run(ks, cfg.params, g, mesh, cfg.checkpoints, fo);
  const auto kern = make_kernel(cfg);
  const Regime regime = classify_regime(cfg.params);
  const bool flat = cfg.params.p > 1.0;

  const auto path = cfg.out / "family.csv";
  auto f = open_csv(path);
  f << "k,t,center,mass,kernel_margin,flat_margin,gap\n";
  Check bars{"barriers"};
  double km_worst = -INFINITY, fm_worst = -INFINITY;
  std::vector<double> last_gap, last_center;
  for (const auto& m : fr.members) {
    for (const auto& u : m.checkpoints) {
      const std::vector<Field> one{u};
      const double km = barrier_check(one, cfg.params, Barrier{BarrierKind::Kernel, m.k, 1.0, &kern}).margin;
      const double fm = flat ? barrier_check(one, cfg.params, Barrier{BarrierKind::Flat}).margin : NAN;
      const double gap = flat ? flatness_gap(rescale_profile(u, cfg.params)) : NAN;
      f << m.k << ',' << u.time << ',' << u.center() << ',' << u.mass() << ',' << km << ',' << fm << ',' << gap << '\n';
      km_worst = std::max(km_worst, km);
      if (flat) fm_worst = std::max(fm_worst, fm);
    }
    const Field& end = m.checkpoints.back();
    last_center.push_back(end.center());
    last_gap.push_back(flat ? flatness_gap(rescale_profile(end, cfg.params)) : NAN);
  }
  close_csv(f, path);
  bars.expect(at_most("kernel margin", km_worst, cfg.tol.margin, "PAPER"));
  if (flat) bars.expect(at_most("flat margin", fm_worst, cfg.tol.margin, "PAPER"));
  rep.checks.push_back(bars);

  Check mono{"monotone in k"};
  mono.expect(at_most("worst margin", fr.monotonicity.worst_margin, 1e-6, "PAPER"));
  for (std::size_t i = 0; i < fr.saturation.size(); ++i) mono.info(tag("saturation after k=%g", ks[i]), fr.saturation[i]);
  rep.checks.push_back(mono);

  write_field_csv(fr.u_inf, cfg.out / "u_largest_k.csv");

  Check trend{std::string("regime ") + regime_name(regime)};
  if (regime == Regime::FlatAbsorption && last_gap.size() >= 2) {
    double worst = -INFINITY;
    for (std::size_t i = 1; i < last_gap.size(); ++i) worst = std::max(worst, last_gap[i] - last_gap[i - 1]);
    trend.expect(at_most("largest gap increase over k", worst, 0.0, "PAPER"));
    trend.info("final gap", last_gap.back());
  } else if (regime == Regime::Diffusive && last_center.size() >= 2) {
    trend.expect(at_least("center ratio largest/smallest k", last_center.back() / last_center.front(), 1.0, "PAPER"));
  } else {
    for (std::size_t i = 0; i < last_gap.size(); ++i) trend.info(tag("gap k=%g", ks[i]), last_gap[i]);
  }
  rep.checks.push_back(trend);
  return finish(std::move(rep), cfg);
}

// ---------------------------------------------------------------- selfsim
Report run_selfsim(const ExperimentConfig& cfg) {
  Report rep;
  rep.kind = "selfsim";
  ContinuationOptions co;
  co.params = cfg.params;
  co.grid = config_grid(cfg);
  co.K0 = cfg.K0;
  co.zoom = cfg.doublings_per_cycle > 0.0 ? zoom_for_doublings(cfg.params, cfg.doublings_per_cycle) : cfg.zoom;
  co.cycles = cfg.cycles;  // not reduced by quick
  co.steps_per_cycle = cfg.steps_per_cycle;
  co.stepper = stepper_config(cfg);
  const auto res = run_continuation(co);
  const Regime regime = classify_regime(cfg.params);

  const auto path = cfg.out / "cycles.csv";
  auto f = open_csv(path);
  f << "cycle,K,center,mass,gap,residual,tail_ratio\n";
  for (std::size_t i = 0; i < res.K.size(); ++i) {
    const auto prof = rescale_profile(res.at_one[i], cfg.params);
    f << i << ',' << res.K[i] << ',' << res.at_one[i].center() << ',' << res.mass[i] << ',' << flatness_gap(prof) << ','
      << selfsim_residual(prof).normalized << ',' << res.tail_ratio[i] << '\n';
  }
  close_csv(f, path);

  const auto prof = rescale_profile(res.at_one.back(), cfg.params);
  const auto r = selfsim_residual(prof);
  std::optional<TailFit> fit;
  try {
    fit = tail_fit(prof, cfg.fit_r1, cfg.fit_r2);
  } catch (const DomainError&) {
  }
  write_profile_axis(prof.v, fit ? &*fit : nullptr, cfg.out / "profile.csv");

  Check rc{"profile residual"};
  rc.info("K", res.K.back());
  if (regime == Regime::VerySingular)
    rc.expect(at_most("normalized residual", r.normalized, cfg.tol.residual));
  else
    rc.info("normalized residual", r.normalized);
  rc.info("nyquist fraction", r.nyquist_fraction);
  rc.info("flatness gap", flatness_gap(prof));
  rep.checks.push_back(rc);

  Check tc{"tail fit"};
  if (fit) {
    tc.info("slope", fit->slope);
    tc.info("slope with log factor", fit->slope_with_log);
    tc.info("log correction score", fit->log_correction_score);
  } else {
    tc.note = "fit window degenerate";
  }
  rep.checks.push_back(tc);

  if (regime == Regime::VerySingular) {
    Check bc{"barrier threshold"};
    const auto th = find_barrier_threshold(cfg.params, co.grid);
    bc.expect(at_least("threshold found", th.found ? 1.0 : 0.0, 1.0));
    bc.expect(at_least("minimum monotone in lambda", th.monotone ? 1.0 : 0.0, 1.0, "PAPER"));
    bc.info("threshold", th.lambda_hat);
    rep.checks.push_back(bc);
  }
  return finish(std::move(rep), cfg);
}

// ---------------------------------------------------------------- verify
Report run_verify(const ExperimentConfig& cfg, const std::function<void(const std::string&)>& progress) {
  AcceptanceOptions opt;
  opt.quick = cfg.quick;
  opt.workers = cfg.workers;
  opt.seed = cfg.seed;
  opt.cache_dir = default_cache_dir();
  opt.out = cfg.out;
  auto rep = run_acceptance(opt, {}, [&](const Check& c, double sec) {
    if (!progress) return;
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1f s)", sec);
    progress((c.pass ? "PASS " : "FAIL ") + c.name + buf);
  });
  write_json(rep.to_json(), cfg.out / "verify.json");
  return rep;
}

Report run_experiment(const ExperimentConfig& cfg, const std::function<void(const std::string&)>& progress) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  switch (cfg.kind) {
    case Kind::Kernel: rep = run_kernel(cfg); break;
    case Kind::Evolve: rep = run_evolve(cfg); break;
    case Kind::DiracLimit: rep = run_dirac_limit(cfg); break;
    case Kind::Selfsim: rep = run_selfsim(cfg); break;
    case Kind::Verify: rep = run_verify(cfg, progress); break;
  }
  rep.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace fracheat::app
