#include "fracheat/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracheat {

double continuation_exponent(const ModelParams& params) {
  return 2.0 * params.alpha * params.decay_exponent() - params.dim;
}

double zoom_for_doublings(const ModelParams& params, double d) {
  const double q = continuation_exponent(params);
  if (!(q > 0.0)) throw DomainError("continuation needs p < p*");
  return std::pow(2.0, d / q);
}

namespace {

std::vector<double> dirichlet_matrix(const Grid& src, const Grid& dst, double scale) {
  const int m = src.points, mt = dst.points;
  const double L = src.extent;
  std::vector<double> B(static_cast<std::size_t>(mt) * m);
  for (int t = 0; t < mt; ++t) {
    const double y = scale * dst.coord(t);
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * std::numbers::pi * (y - src.coord(k)) / L;
      const double sh = std::sin(0.5 * th);
      double D;
      if (std::abs(sh) < 1e-12) {
        D = m;
      } else {
        D = std::sin(0.5 * (m - 1) * th) / sh + std::cos(0.5 * m * th);
      }
      B[static_cast<std::size_t>(t) * m + k] = D / m;
    }
  }
  return B;
}

// sum over nonzero lattice images of |x + nL|^{-g}, far shells by the integral remainder
double image_sum(double x, double y, int dim, double L, double g, int R) {
  double s = 0.0;
  if (dim == 1) {
    for (int n = -R; n <= R; ++n)
      if (n != 0) s += std::pow(std::abs(x + n * L), -g);
    s += 2.0 * std::pow(L, -g) * std::pow(R + 0.5, 1.0 - g) / (g - 1.0);
  } else {
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        if (a != 0 || b != 0) s += std::pow(std::hypot(x + a * L, y + b * L), -g);
    s += 2.0 * std::numbers::pi * std::pow(L, -g) * std::pow(R + 0.5, 2.0 - g) / (g - 2.0);
  }
  return s;
}

// y' = A m(s) r^{-g} - c s^beta y^p from y(0) = 0 along the recorded mass history
double far_field(double r, const std::vector<double>& hs, const std::vector<double>& hm, double A, double g,
                 const ModelParams& P, double c) {
  const double src = A * std::pow(r, -g);
  double y = 0.0;
  for (std::size_t j = 0; j + 1 < hs.size(); ++j) {
    const double sa = hs[j], sb = hs[j + 1], sm = 0.5 * (sa + sb);
    y = absorb_scalar(y, sa, sm, P.beta, P.p, c);
    y += src * 0.5 * (hm[j] + hm[j + 1]) * (sb - sa);
    y = absorb_scalar(y, sm, sb, P.beta, P.p, c);
  }
  return y;
}

}  // namespace

Field resample_trig(const Field& f, const Grid& target, double scale) {
  if (f.grid.dim != target.dim) throw DomainError("resample needs matching dimension");
  const int m = f.grid.points, mt = target.points;
  const auto B = dirichlet_matrix(f.grid, target, scale);
  Field out(target);
  out.time = f.time;
  if (f.grid.dim == 1) {
    for (int t = 0; t < mt; ++t) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += B[static_cast<std::size_t>(t) * m + k] * f.values[k];
      out.values[t] = s;
    }
    return out;
  }
  std::vector<double> tmp(static_cast<std::size_t>(mt) * m, 0.0);
  for (int t = 0; t < mt; ++t) {
    double* row = &tmp[static_cast<std::size_t>(t) * m];
    for (int i = 0; i < m; ++i) {
      const double b = B[static_cast<std::size_t>(t) * m + i];
      const double* src = &f.values[static_cast<std::size_t>(i) * m];
      for (int k = 0; k < m; ++k) row[k] += b * src[k];
    }
  }
  for (int t = 0; t < mt; ++t) {
    const double* row = &tmp[static_cast<std::size_t>(t) * m];
    for (int s = 0; s < mt; ++s) {
      const double* b = &B[static_cast<std::size_t>(s) * m];
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += row[k] * b[k];
      out.values[static_cast<std::size_t>(t) * mt + s] = acc;
    }
  }
  return out;
}

ContinuationResult run_continuation(const ContinuationOptions& opt,
                                    const std::function<void(const CycleState&, double)>& on_snapshot) {
  const ModelParams& P = opt.params;
  P.validate();
  const Grid& grid = opt.grid;
  if (grid.dim != P.dim) throw DomainError("grid and params disagree on dimension");
  const double lam = opt.zoom;
  if (!(lam > 1.0)) throw DomainError("zoom must exceed 1");
  const double a = P.decay_exponent();
  const double q = continuation_exponent(P);
  const double gam = P.dim + 2.0 * P.alpha;
  const double A = tail_constant(P.alpha, P.dim);
  const double ts = std::pow(lam, -2.0 * P.alpha);
  const double gain = std::pow(lam, 2.0 * P.alpha * a);
  const double L = grid.extent, h = grid.spacing();
  const int M = grid.points;

  StepperConfig sc = opt.stepper;
  sc.params = P;
  Stepper stepper(grid, sc);

  // frame mesh shared by every cycle
  std::vector<double> nodes;
  for (int j = 0; j <= opt.steps_per_cycle; ++j)
    nodes.push_back(ts + (1.0 - ts) * j / opt.steps_per_cycle);
  for (double t : opt.snapshot_times) {
    if (!(t > ts && t < 1.0)) throw DomainError("snapshot time outside the cycle window");
    nodes.push_back(t);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // far-field model pieces
  const std::size_t n = grid.size();
  std::vector<double> r(n), img_new(n), img_old(n), box(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x, y = 0.0;
    if (grid.dim == 1) {
      x = grid.coord(static_cast<int>(i));
    } else {
      x = grid.coord(static_cast<int>(i / M));
      y = grid.coord(static_cast<int>(i % M));
    }
    r[i] = std::hypot(x, y);
    box[i] = std::max(std::abs(x), std::abs(y));
    img_new[i] = image_sum(x, y, grid.dim, L, gam, opt.image_range);
    img_old[i] = image_sum(lam * x, lam * y, grid.dim, L, gam, opt.image_range);
  }
  const double b1 = 0.5 * L / lam - h;
  const double b0 = b1 - (opt.blend_cells - 1) * h;

  const double c = sc.absorption_coeff;
  double rmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) rmax = std::max(rmax, r[i]);
  const double rmin = std::max(b0, h);
  const int nr = 256;
  std::vector<double> lr(nr), ly(nr);

  ContinuationResult res;
  Field u = dirac_initial(grid, opt.K0, ts, P, c);
  double K = opt.K0;
  double I = 0.5 * ts * (opt.K0 + u.mass());
  // mass history in frame units
  std::vector<double> hs{0.0, ts}, hm{opt.K0, u.mass()};
  for (int cyc = 0; cyc < opt.cycles; ++cyc) {
    double m_prev = u.mass();
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
      stepper.step(u, nodes[j], nodes[j + 1], static_cast<long>(j));
      const double m = u.mass();
      I += 0.5 * (m_prev + m) * (nodes[j + 1] - nodes[j]);
      m_prev = m;
      hs.push_back(nodes[j + 1]);
      hm.push_back(m);
      if (on_snapshot && j + 2 < nodes.size() &&
          std::find(opt.snapshot_times.begin(), opt.snapshot_times.end(), nodes[j + 1]) !=
              opt.snapshot_times.end()) {
        on_snapshot(CycleState{cyc, K, I, &u}, nodes[j + 1]);
      }
    }
    u.time = 1.0;
    res.K.push_back(K);
    res.at_one.push_back(u);
    res.mass.push_back(u.mass());
    {
      const int off = static_cast<int>(std::lround(L / 8.0 / h));
      const std::size_t idx = grid.center_offset() + off;  // along the last axis
      const double rr = off * h;
      res.tail_ratio.push_back(A * I / (u.values[idx] * std::pow(rr, gam)));
    }
    if (on_snapshot) on_snapshot(CycleState{cyc, K, I, &u}, 1.0);
    if (cyc + 1 == opt.cycles) break;

    // T_lambda: new(y) = gain * u(lam y) with images swapped and the outside refilled
    const double C_old = A * I;
    const double C_new = gain * std::pow(lam, -gam) * C_old;
    const double mscale = gain * std::pow(lam, -P.dim);
    for (std::size_t j = 0; j < hs.size(); ++j) {
      hs[j] *= ts;
      hm[j] *= mscale;
    }
    for (int k = 0; k < nr; ++k) {
      const double rk = rmin * std::pow(rmax * 1.01 / rmin, k / (nr - 1.0));
      lr[k] = std::log(rk);
      ly[k] = std::log(std::max(far_field(rk, hs, hm, A, gam, P, c), 1e-300));
    }
    auto outer_at = [&](double rr) {
      const double x = std::log(rr);
      const double f = std::clamp((x - lr[0]) / (lr[1] - lr[0]), 0.0, nr - 1.000001);
      const int k = static_cast<int>(f);
      return std::exp(ly[k] + (f - k) * (ly[k + 1] - ly[k]));
    };
    Field inner = resample_trig(u, grid, lam);
    Field next(grid);
    for (std::size_t i = 0; i < n; ++i) {
      const double core = gain * (inner.values[i] - C_old * img_old[i]) + C_new * img_new[i];
      double w = std::clamp((box[i] - b0) / std::max(b1 - b0, 1e-300), 0.0, 1.0);
      w = 0.5 - 0.5 * std::cos(std::numbers::pi * w);
      if (box[i] >= b1) w = 1.0;
      if (w == 0.0) {
        next.values[i] = std::max(0.0, core);
        continue;
      }
      const double outer = outer_at(r[i]) + C_new * img_new[i];
      next.values[i] = std::max(0.0, (1.0 - w) * core + w * outer);
    }
    if (!(A > 0.0)) {
      for (std::size_t i = 0; i < n; ++i)
        if (box[i] >= b1) next.values[i] = 0.0;
    }
    next.time = ts;
    u = std::move(next);
    I *= std::pow(lam, 2.0 * P.alpha * a - P.dim - 2.0 * P.alpha);
    K *= std::pow(lam, q);
  }
  res.clamped = stepper.clamped();
  return res;
}

}  // namespace fracheat
