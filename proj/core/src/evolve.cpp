#include "fracheat/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace fracheat {

TimeMesh TimeMesh::graded(double t0, double T, int K, double gamma) {
  if (!(t0 > 0.0)) throw DomainError("mesh start must be positive");
  if (!(T > t0)) throw DomainError("mesh end must exceed start");
  if (K < 1) throw DomainError("mesh needs at least one step");
  if (!(gamma >= 1.0)) throw DomainError("grading exponent must be >= 1");
  TimeMesh m{t0, T, K, gamma, {}};
  m.nodes.resize(static_cast<std::size_t>(K) + 1);
  for (int j = 0; j <= K; ++j)
    m.nodes[j] = t0 + (T - t0) * std::pow(static_cast<double>(j) / K, gamma);
  m.nodes.back() = T;
  return m;
}

TimeMesh TimeMesh::with_breakpoints(const std::vector<double>& times) const {
  TimeMesh m = *this;
  for (double t : times) {
    if (t < t0 || t > T) throw DomainError("breakpoint outside the mesh interval");
    m.nodes.push_back(t);
  }
  std::sort(m.nodes.begin(), m.nodes.end());
  std::vector<double> out;
  for (double t : m.nodes) {
    if (!out.empty() && std::abs(t - out.back()) <= 1e-12 * std::max(1.0, t)) {
      // keep the requested value exactly
      if (std::find(times.begin(), times.end(), t) != times.end()) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  m.nodes = std::move(out);
  return m;
}

std::size_t TimeMesh::index_of(double t) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  throw DomainError("time is not a mesh node");
}

double absorb_scalar(double y, double ta, double tb, double beta, double p, double coeff) {
  if (y <= 0.0 || coeff == 0.0) return y < 0.0 ? 0.0 : y;
  const double D = coeff * (std::pow(tb, beta + 1.0) - std::pow(ta, beta + 1.0)) / (beta + 1.0);
  if (p == 1.0) return y * std::exp(-D);
  const double z = (p - 1.0) * D * std::pow(y, p - 1.0);
  if (1.0 + z <= 0.0) return 0.0;
  return y * std::pow(1.0 + z, -1.0 / (p - 1.0));
}

namespace {

// returns sum of y^p over the input
double absorb_field(Field& f, double ta, double tb, double beta, double p, double coeff) {
  if (tb < ta) throw DomainError("absorption step needs tb >= ta");
  if (ta < 0.0) throw DomainError("absorption step needs ta >= 0");
  double sum = 0.0;
  const double D = coeff * (std::pow(tb, beta + 1.0) - std::pow(ta, beta + 1.0)) / (beta + 1.0);
  if (p == 1.0) {
    const double e = std::exp(-D);
    for (double& y : f.values) {
      if (y < 0.0) throw DomainError("absorption step received a negative value");
      sum += y;
      y *= e;
    }
    return sum;
  }
  const double q = p - 1.0, inv = -1.0 / q;
  for (double& y : f.values) {
    if (y <= 0.0) {
      if (y < 0.0) throw DomainError("absorption step received a negative value");
      continue;
    }
    const double yq = std::pow(y, q);
    sum += y * yq;
    if (D == 0.0) continue;
    const double base = 1.0 + q * D * yq;
    y = base <= 0.0 ? 0.0 : y * std::pow(base, inv);
  }
  return sum;
}

}  // namespace

void absorption_step_inplace(Field& f, double ta, double tb, double beta, double p, double coeff) {
  absorb_field(f, ta, tb, beta, p, coeff);
}

Field absorption_step_exact(const Field& f, double ta, double tb, double beta, double p) {
  Field out = f;
  absorb_field(out, ta, tb, beta, p, 1.0);
  out.time = tb;
  return out;
}

Stepper::Stepper(const Grid& grid, StepperConfig cfg) : cfg_(std::move(cfg)), ops_(grid) {
  cfg_.params.validate();
}

void Stepper::absorb(Field& f, double ta, double tb) const {
  if (cfg_.absorption_coeff == 0.0 || tb == ta) return;
  if (!cfg_.general) {
    absorb_field(f, ta, tb, cfg_.params.beta, cfg_.params.p, cfg_.absorption_coeff);
    return;
  }
  const auto& g = *cfg_.general;
  const double c = cfg_.absorption_coeff, beta = g.beta();
  const int n = std::max(1, cfg_.rk_substeps);
  const double dt = (tb - ta) / n;
  auto rhs = [&](double t, double y) { return -c * std::pow(t, beta) * g.g(std::max(y, 0.0)); };
  for (double& y : f.values) {
    double t = ta;
    for (int i = 0; i < n; ++i) {
      const double k1 = rhs(t, y);
      const double k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
      const double k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
      const double k4 = rhs(t + dt, y + dt * k3);
      y = std::max(0.0, y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4));
      t += dt;
    }
  }
}

void Stepper::diffuse(Field& f, double tau) {
  if (cfg_.diffusion) ops_.apply_heat(f, tau, cfg_.params.alpha);
}

void Stepper::enforce_sign(Field& f, long index) {
  double mx = 0.0, mn = 0.0;
  for (double v : f.values) {
    if (!std::isfinite(v)) throw NonFiniteAbort("non-finite value at step " + std::to_string(index), index);
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  const double tol = cfg_.negativity_rel * mx;
  if (mn < -tol) {
    std::ostringstream os;
    os << "negativity " << mn << " below tolerance " << -tol << " at step " << index;
    throw NegativityAbort(os.str(), index);
  }
  for (double& v : f.values) {
    if (v < 0.0) {
      v = 0.0;
      ++clamped_;
    }
  }
}

void Stepper::step(Field& f, double ta, double tb, long index) {
  const double tm = 0.5 * (ta + tb);
  if (cfg_.order == SplitOrder::AbsorptionOuter) {
    absorb(f, ta, tm);
    diffuse(f, tb - ta);
    enforce_sign(f, index);
    absorb(f, tm, tb);
  } else {
    diffuse(f, tm - ta);
    enforce_sign(f, index);
    absorb(f, ta, tb);
    diffuse(f, tb - tm);
    enforce_sign(f, index);
  }
  f.time = tb;
}

Field strang_step(const Field& f, double ta, double tb, const StepperConfig& cfg) {
  Stepper s(f.grid, cfg);
  Field out = f;
  s.step(out, ta, tb);
  return out;
}

const Field& Trajectory::snapshot_at(double t) const {
  for (const auto& s : snapshots)
    if (std::abs(s.time - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s;
  throw DomainError("no snapshot at requested time");
}

std::vector<double> Trajectory::snapshot_times() const {
  std::vector<double> t;
  for (const auto& s : snapshots) t.push_back(s.time);
  return t;
}

namespace {

double power_sum(const Field& f, double p) {
  double s = 0.0;
  for (double v : f.values)
    if (v > 0.0) s += std::pow(v, p);
  return s;
}

StepDiagnostics diagnose(const Field& f, const ModelParams& params) {
  StepDiagnostics d{f.time, f.mass(), f.max(), f.min(), 0.0, NAN};
  if (params.p > 1.0 && d.max > 0.0)
    d.flat_margin = (d.max - maximal_flat_solution(params, f.time)) / d.max;
  return d;
}

}  // namespace

Trajectory evolve(const Field& initial, const TimeMesh& mesh, const EvolveOptions& opt) {
  const auto& params = opt.stepper.params;
  params.validate();
  if (initial.min() < 0.0) throw DomainError("initial data must be nonnegative");
  if (!initial.all_finite()) throw NonFiniteAbort("non-finite initial data", 0);
  if (mesh.nodes.size() < 2) throw DomainError("mesh has no steps");
  std::vector<char> want(mesh.nodes.size(), opt.snapshot_every_step ? 1 : 0);
  for (double t : opt.snapshot_times) want[mesh.index_of(t)] = 1;
  if (!want.empty()) want.back() = 1;

  Trajectory traj;
  traj.params = params;
  traj.mesh = mesh;
  Field u = initial;
  u.time = mesh.nodes.front();
  if (want[0]) traj.snapshots.push_back(u);
  traj.diagnostics.push_back(diagnose(u, params));

  Stepper stepper(u.grid, opt.stepper);
  const double c = opt.stepper.absorption_coeff;
  const double hN = u.grid.cell_volume();
  double P_prev = c != 0.0 ? power_sum(u, params.p) : 0.0;
  for (std::size_t j = 0; j + 1 < mesh.nodes.size(); ++j) {
    const double ta = mesh.nodes[j], tb = mesh.nodes[j + 1];
    stepper.step(u, ta, tb, static_cast<long>(j));
    auto d = diagnose(u, params);
    if (c != 0.0) {
      const double P = power_sum(u, params.p);
      d.absorbed = 0.5 * c * (std::pow(ta, params.beta) * P_prev + std::pow(tb, params.beta) * P) * hN * (tb - ta);
      P_prev = P;
    }
    traj.diagnostics.push_back(d);
    if (want[j + 1]) traj.snapshots.push_back(u);
  }
  traj.clamped = stepper.clamped();
  return traj;
}

Field dirac_initial(const Grid& grid, double k, double t0, const ModelParams& params,
                    double absorption_coeff) {
  Field f = periodized_kernel(grid, t0, params.alpha);
  for (double& v : f.values) v = std::max(0.0, k * v);
  if (absorption_coeff != 0.0) absorb_field(f, 0.0, t0, params.beta, params.p, absorption_coeff);
  f.time = t0;
  return f;
}

namespace {

ResidualStats residual_at(const Trajectory& traj, const StepperConfig& cfg,
                          const std::vector<std::size_t>& use, SpectralOps& ops) {
  const auto& snaps = traj.snapshots;
  const Field& u0 = snaps[use.front()];
  const Field& ut = snaps[use.back()];
  const double t = ut.time, t0 = u0.time;
  const double alpha = cfg.params.alpha, beta = cfg.params.beta, p = cfg.params.p;
  const double c = cfg.absorption_coeff;
  Field R = u0;
  if (cfg.diffusion) ops.apply_heat(R, t - t0, alpha);
  for (std::size_t n = 0; n < R.values.size(); ++n) R.values[n] = ut.values[n] - R.values[n];
  if (c != 0.0) {
    for (std::size_t i = 0; i < use.size(); ++i) {
      const Field& ui = snaps[use[i]];
      const double s = ui.time;
      const double left = i > 0 ? s - snaps[use[i - 1]].time : 0.0;
      const double right = i + 1 < use.size() ? snaps[use[i + 1]].time - s : 0.0;
      const double w = 0.5 * (left + right);
      if (w == 0.0) continue;
      Field g(ui.grid);
      const double sb = c * std::pow(s, beta);
      for (std::size_t n = 0; n < g.values.size(); ++n)
        g.values[n] = ui.values[n] > 0.0 ? sb * std::pow(ui.values[n], p) : 0.0;
      if (cfg.diffusion) ops.apply_heat(g, t - s, alpha);
      for (std::size_t n = 0; n < R.values.size(); ++n) R.values[n] += w * g.values[n];
    }
  }
  ResidualStats st{t, 0.0, 0.0, 0.0};
  for (double v : R.values) {
    st.max_abs = std::max(st.max_abs, std::abs(v));
    st.l1 += std::abs(v);
  }
  st.l1 *= R.grid.cell_volume();
  const double mu = ut.max();
  st.max_rel = mu > 0.0 ? st.max_abs / mu : st.max_abs;
  return st;
}

}  // namespace

DuhamelReport duhamel_residual(const Trajectory& traj, const StepperConfig& cfg,
                               const std::vector<double>& checkpoints) {
  if (traj.snapshots.size() < 32) throw DomainError("duhamel residual needs at least 32 snapshots");
  SpectralOps ops(traj.snapshots.front().grid);
  DuhamelReport rep;
  const auto times = traj.snapshot_times();
  for (double tc : checkpoints) {
    std::vector<std::size_t> fine;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] <= tc * (1 + 1e-12)) fine.push_back(i);
    if (fine.size() < 3 || std::abs(times[fine.back()] - tc) > 1e-12 * std::max(1.0, tc))
      throw DomainError("checkpoint is not a stored snapshot time");
    const auto st = residual_at(traj, cfg, fine, ops);
    std::vector<std::size_t> coarse;
    for (std::size_t i = 0; i < fine.size(); i += 2) coarse.push_back(fine[i]);
    if (coarse.back() != fine.back()) coarse.push_back(fine.back());
    const auto sc = residual_at(traj, cfg, coarse, ops);
    if (st.max_rel > 1e-10) {
      const double change = std::abs(sc.max_abs - st.max_abs) / st.max_abs;
      rep.worst_change = std::max(rep.worst_change, change);
      if (change > 0.25) rep.resolution_warning = true;
    }
    rep.checkpoints.push_back(st);
  }
  return rep;
}

Field duhamel_lower_correction(const Grid& grid, double t, const ModelParams& params, double k,
                               const KernelInterpolant& kern, int nodes) {
  const double alpha = params.alpha, beta = params.beta, p = params.p;
  const int N = grid.dim;
  const double sigma = 1.0 + beta - N * (p - 1.0) / (2.0 * alpha);
  if (!(sigma > 0.0)) throw DomainError("lower correction needs p < p*");
  // J_p = int Gamma(1, x)^p dx from the profile, power-law tail beyond r_max
  const auto& prof = kern.profile();
  const double omega = N == 1 ? 2.0 : 2.0 * std::numbers::pi;
  double J = 0.0;
  for (std::size_t i = 0; i + 1 < prof.radii.size(); ++i) {
    const double r0 = prof.radii[i], r1 = prof.radii[i + 1];
    const double f0 = std::pow(prof.values[i], p) * std::pow(r0, N - 1);
    const double f1 = std::pow(prof.values[i + 1], p) * std::pow(r1, N - 1);
    J += 0.5 * (f0 + f1) * (r1 - r0);
  }
  const double e = p * kern.tail_slope() + N;
  if (e < 0.0) J += std::pow(prof.values.back(), p) * std::pow(prof.radii.back(), N) / -e;
  J *= omega;

  const double cut = std::pow(std::numbers::pi * grid.points / grid.extent, 2.0 * alpha);
  const double h = grid.spacing();
  SpectralOps ops(grid);
  Field W(grid);
  // s = t u^{1/sigma}: s^{sigma-1} ds = t^sigma du / sigma, midpoint rule in u
  for (int i = 0; i < nodes; ++i) {
    const double uu = (i + 0.5) / nodes;
    const double s = t * std::pow(uu, 1.0 / sigma);
    const double jac = std::pow(t, sigma) / (sigma * nodes) * std::pow(s, 1.0 - sigma);
    const double sb = std::pow(s, beta);
    Field g(grid);
    const bool resolved = s * cut >= 30.0 && std::pow(s, 1.0 / (2.0 * alpha)) >= 2.0 * h;
    if (resolved) {
      g = periodized_kernel(grid, s, alpha);
      for (double& v : g.values) v = v > 0.0 ? std::pow(v, p) : 0.0;
      ops.apply_heat(g, t - s, alpha);
    } else {
      g = periodized_kernel(grid, t - s, alpha);
      const double m = std::pow(s, -N * (p - 1.0) / (2.0 * alpha)) * J;
      for (double& v : g.values) v *= m;
    }
    for (std::size_t n = 0; n < W.values.size(); ++n) W.values[n] += jac * sb * g.values[n];
  }
  const double kp = std::pow(k, p);
  for (double& v : W.values) v *= kp;
  W.time = t;
  return W;
}

double w_shape(double s, int dim, double alpha) {
  return std::log(std::numbers::e + s * s) / (1.0 + std::pow(s, dim + 2.0 * alpha));
}

BarrierResult barrier_check(const std::vector<Field>& snapshots, const ModelParams& params,
                            const Barrier& b) {
  BarrierResult res;
  res.margin = -INFINITY;
  const double alpha = params.alpha;
  switch (b.kind) {
    case BarrierKind::Kernel: res.name = "kernel"; break;
    case BarrierKind::Flat: res.name = "flat"; break;
    case BarrierKind::W: res.name = "w"; break;
    case BarrierKind::LowerEnvelope: res.name = "lower-envelope"; break;
  }
  if (b.kind == BarrierKind::Kernel && !b.kern) throw DomainError("kernel barrier needs a profile");
  for (const auto& u : snapshots) {
    const double t = u.time;
    const double mu = u.max();
    const double ia = 1.0 / (2.0 * alpha);
    if (b.kind == BarrierKind::LowerEnvelope) {
      const double a = params.decay_exponent();
      const double rmax = b.inner_fraction * 0.5 * u.grid.extent;
      double c = INFINITY;
      for (std::size_t n = 0; n < u.values.size(); ++n) {
        const double r = u.radius(n);
        if (r > rmax) continue;
        const double env = std::pow(t, -a) / (1.0 + std::pow(r * std::pow(t, -ia), u.grid.dim + 2 * alpha));
        c = std::min(c, u.values[n] / env);
      }
      res.fitted_constant.push_back(c);
      continue;
    }
    double worst = -INFINITY;
    if (b.kind == BarrierKind::Flat) {
      worst = mu - maximal_flat_solution(params, t);
    } else {
      for (std::size_t n = 0; n < u.values.size(); ++n) {
        const double r = u.radius(n);
        double B;
        if (b.kind == BarrierKind::Kernel) {
          B = b.k * (*b.kern)(t, r).value;
        } else {
          B = b.lambda * std::pow(t, -params.decay_exponent()) *
              w_shape(r * std::pow(t, -ia), u.grid.dim, alpha);
        }
        worst = std::max(worst, u.values[n] - B);
      }
    }
    res.margin = std::max(res.margin, mu > 0.0 ? worst / mu : worst);
  }
  return res;
}

BarrierResult barrier_check(const Trajectory& traj, const Barrier& barrier) {
  return barrier_check(traj.snapshots, traj.params, barrier);
}

MonotonicityReport check_monotone(const Field& lo, const Field& hi, double k_lo, double k_hi,
                                  double tol) {
  MonotonicityReport rep;
  rep.k_lo = k_lo;
  rep.k_hi = k_hi;
  rep.t = hi.time;
  const double mu = hi.max();
  rep.worst_margin = -INFINITY;
  std::size_t worst_n = 0;
  for (std::size_t n = 0; n < lo.values.size(); ++n) {
    const double d = (lo.values[n] - hi.values[n]) / (mu > 0.0 ? mu : 1.0);
    if (d > rep.worst_margin) {
      rep.worst_margin = d;
      worst_n = n;
    }
  }
  const Grid& g = hi.grid;
  if (g.dim == 1) {
    rep.x = g.coord(static_cast<int>(worst_n));
  } else {
    rep.x = g.coord(static_cast<int>(worst_n / g.points));
    rep.y = g.coord(static_cast<int>(worst_n % g.points));
  }
  rep.ok = rep.worst_margin <= tol;
  return rep;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::mutex mtx;
  std::size_t next = 0;
  auto work = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mtx);
        if (next >= n) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

FamilyResult dirac_family_run(const std::vector<double>& k_list, const ModelParams& params,
                              const Grid& grid, const TimeMesh& mesh,
                              const std::vector<double>& checkpoints, const FamilyOptions& opt) {
  if (k_list.size() < 4) throw DomainError("family needs at least 4 masses");
  for (std::size_t i = 1; i < k_list.size(); ++i)
    if (!(k_list[i] > k_list[i - 1])) throw DomainError("masses must increase strictly");
  if (!(k_list.front() > 0.0) || k_list.back() / k_list.front() < 100.0)
    throw DomainError("masses must span at least two decades");
  if (checkpoints.empty()) throw DomainError("family needs checkpoints");
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (!(checkpoints[i] > checkpoints[i - 1])) throw DomainError("checkpoints must increase strictly");

  FamilyResult res;
  res.checkpoint_times = checkpoints;
  res.members.resize(k_list.size());
  const TimeMesh m = mesh.with_breakpoints(checkpoints);
  parallel_for(k_list.size(), opt.workers, [&](std::size_t i) {
    EvolveOptions eo = opt.evolve;
    eo.stepper.params = params;
    eo.snapshot_times = checkpoints;
    eo.snapshot_every_step = false;
    const Field init = dirac_initial(grid, k_list[i], m.nodes.front(), params, eo.stepper.absorption_coeff);
    auto traj = evolve(init, m, eo);
    traj.snapshots.resize(checkpoints.size());
    res.members[i] = {k_list[i], std::move(traj.snapshots), std::move(traj.diagnostics)};
  });

  res.monotonicity.worst_margin = -INFINITY;
  for (std::size_t i = 0; i + 1 < res.members.size(); ++i) {
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const auto r = check_monotone(res.members[i].checkpoints[c], res.members[i + 1].checkpoints[c],
                                    res.members[i].k, res.members[i + 1].k);
      if (r.worst_margin > res.monotonicity.worst_margin) res.monotonicity = r;
      if (!r.ok && opt.throw_on_violation) {
        std::ostringstream os;
        os << "monotonicity violated between k=" << r.k_lo << " and k=" << r.k_hi << " at t=" << r.t;
        throw MonotonicityViolation(os.str(), r.k_lo, r.k_hi, r.x, r.y);
      }
    }
  }
  for (std::size_t i = 0; i + 1 < res.members.size(); ++i) {
    const Field& a = res.members[i].checkpoints.back();
    const Field& b = res.members[i + 1].checkpoints.back();
    double d = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) d = std::max(d, std::abs(b.values[n] - a.values[n]));
    res.saturation.push_back(d / b.max());
  }
  res.u_inf = res.members.back().checkpoints.back();
  return res;
}

ShortTimeTable short_time_constant(const ModelParams& params, double k,
                                   const std::vector<double>& t_list, const Grid& grid,
                                   const StepperConfig& cfg, int steps_per_unit) {
  if (t_list.size() < 2) throw DomainError("short-time table needs two times");
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] < t_list[i - 1])) throw DomainError("t_list must decrease");
  const double ia = 1.0 / (2.0 * params.alpha);
  for (double t : t_list)
    if (std::pow(t, ia) < 4.0 * grid.spacing()) throw DomainError("unresolved kernel: width below 4h");
  const double t0 = 0.5 * t_list.back();
  const double T = t_list.front();
  const int K = std::max(16, static_cast<int>(std::ceil(steps_per_unit * (T - t0))));
  StepperConfig sc = cfg;
  sc.params = params;
  const TimeMesh mesh = TimeMesh::graded(t0, T, K, TimeMesh::default_gamma(params.beta)).with_breakpoints(t_list);
  EvolveOptions eo{sc, t_list, false};
  const Field init = dirac_initial(grid, k, t0, params, sc.absorption_coeff);
  const auto traj = evolve(init, mesh, eo);
  ShortTimeTable tab;
  tab.sigma0 = 1.0 + params.beta - grid.dim * (params.p - 1.0) * ia;
  for (double t : t_list) {
    tab.t.push_back(t);
    tab.ratio.push_back(std::pow(t, grid.dim * ia) * traj.snapshot_at(t).center() / k);
  }
  const std::size_t n = tab.t.size();
  const double t1 = tab.t[n - 1], t2 = tab.t[n - 2], r1 = tab.ratio[n - 1], r2 = tab.ratio[n - 2];
  if (sc.absorption_coeff == 0.0) {
    tab.extrapolated = r1;
  } else if (tab.sigma0 > 0.0) {
    const double a1 = std::pow(t1, tab.sigma0), a2 = std::pow(t2, tab.sigma0);
    tab.extrapolated = (r1 * a2 - r2 * a1) / (a2 - a1);
  } else {
    tab.extrapolated = NAN;
  }
  return tab;
}

}  // namespace fracheat
