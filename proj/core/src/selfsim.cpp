#include "fracheat/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracheat/evolve.hpp"

namespace fracheat {

namespace {

// Keys cubic convolution weights
double keys(double s) {
  s = std::abs(s);
  if (s < 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
  if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
  return 0.0;
}

double sample_cubic(const Field& u, double x, double y) {
  const Grid& g = u.grid;
  const double h = g.spacing();
  const int m = g.points;
  auto wrap = [m](int i) { return ((i % m) + m) % m; };
  const double fx = (x + 0.5 * g.extent) / h;
  const int ix = static_cast<int>(std::floor(fx));
  if (g.dim == 1) {
    double s = 0.0;
    for (int a = -1; a <= 2; ++a) s += keys(fx - (ix + a)) * u.values[wrap(ix + a)];
    return s;
  }
  const double fy = (y + 0.5 * g.extent) / h;
  const int iy = static_cast<int>(std::floor(fy));
  double s = 0.0;
  for (int a = -1; a <= 2; ++a) {
    const double wa = keys(fx - (ix + a));
    if (wa == 0.0) continue;
    for (int b = -1; b <= 2; ++b)
      s += wa * keys(fy - (iy + b)) * u.values[static_cast<std::size_t>(wrap(ix + a)) * m + wrap(iy + b)];
  }
  return s;
}

}  // namespace

Profile rescale_profile(const Field& u, const ModelParams& params, const std::optional<Grid>& eta_grid) {
  const double t = u.time;
  if (!(t > 0.0)) throw DomainError("rescale needs t > 0");
  const double a = params.decay_exponent();
  const double ta = std::pow(t, a);
  const double sx = std::pow(t, 1.0 / (2.0 * params.alpha));
  Profile prof;
  prof.params = params;
  prof.source_time = t;
  if (!eta_grid) {
    Grid g = u.grid;
    g.extent = u.grid.extent / sx;
    prof.v = Field(g);
    for (std::size_t i = 0; i < u.values.size(); ++i) prof.v.values[i] = ta * u.values[i];
  } else {
    const Grid& g = *eta_grid;
    if (g.dim != u.grid.dim) throw DomainError("eta grid dimension differs from the snapshot");
    if (sx * 0.5 * g.extent > 0.5 * u.grid.extent * (1.0 + 1e-12))
      throw OutOfBox("rescaled eta box exceeds the snapshot box");
    prof.v = Field(g);
    const int m = g.points;
    for (std::size_t i = 0; i < prof.v.values.size(); ++i) {
      double x, y = 0.0;
      if (g.dim == 1) {
        x = sx * g.coord(static_cast<int>(i));
      } else {
        x = sx * g.coord(static_cast<int>(i / m));
        y = sx * g.coord(static_cast<int>(i % m));
      }
      prof.v.values[i] = ta * sample_cubic(u, x, y);
    }
  }
  prof.v.time = t;
  return prof;
}

namespace {

std::vector<char> inner_mask(const Grid& g, double fraction) {
  std::vector<char> mask(g.size());
  const double lim = fraction * 0.5 * g.extent;
  const int m = g.points;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    double d;
    if (g.dim == 1) {
      d = std::abs(g.coord(static_cast<int>(i)));
    } else {
      d = std::max(std::abs(g.coord(static_cast<int>(i / m))), std::abs(g.coord(static_cast<int>(i % m))));
    }
    mask[i] = d <= lim + 1e-12;
  }
  return mask;
}

}  // namespace

SelfsimResidual selfsim_residual(const Profile& prof, double inner_fraction, bool with_absorption) {
  const auto& P = prof.params;
  const Field& v = prof.v;
  SpectralOps ops(v.grid);
  SelfsimResidual res;
  Field lap = ops.frac_laplacian(v, P.alpha);
  Field drift = ops.gradient_dot_x(v);
  res.nyquist_fraction = ops.last_nyquist_fraction();
  res.nyquist_warning = ops.nyquist_warning();
  const double a = with_absorption ? P.decay_exponent() : v.grid.dim / (2.0 * P.alpha);
  res.residual = Field(v.grid);
  res.residual.time = v.time;
  const auto mask = inner_mask(v.grid, inner_fraction);
  double vp_max = 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const double vi = std::max(v.values[i], 0.0);
    const double vp = with_absorption ? std::pow(vi, P.p) : 0.0;
    const double r = lap.values[i] - drift.values[i] / (2.0 * P.alpha) - a * v.values[i] + vp;
    res.residual.values[i] = r;
    vp_max = std::max(vp_max, with_absorption ? vp : vi);
    if (mask[i]) res.max_abs = std::max(res.max_abs, std::abs(r));
  }
  res.normalized = vp_max > 0.0 ? res.max_abs / vp_max : res.max_abs;
  return res;
}

TailFit tail_fit(const Field& v, double r1, double r2) {
  const Grid& g = v.grid;
  if (!(r1 > 0.0) || !(r2 >= 4.0 * r1)) throw DomainError("tail window degenerate: need r2/r1 >= 4");
  if (r2 > 0.9 * 0.5 * g.extent) throw DomainError("tail window reaches the outer 10% of the box");
  TailFit fit;
  fit.r1 = r1;
  fit.r2 = r2;
  std::vector<double> xs, ys, yl;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const double r = v.radius(i);
    if (r < r1 || r > r2) continue;
    if (!(v.values[i] > 0.0)) throw DomainError("tail window degenerate: nonpositive values");
    xs.push_back(std::log(r));
    ys.push_back(std::log(v.values[i]));
    yl.push_back(ys.back() - std::log(std::log(2.0 + r)));
  }
  if (xs.size() < 3) throw DomainError("tail window degenerate: too few samples");
  fit.samples = xs.size();
  auto lsq = [&](const std::vector<double>& y, double* slope, double* icpt) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) { sx += xs[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (y[i] - my);
    }
    *slope = sxy / sxx;
    *icpt = my - *slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = y[i] - (*icpt + *slope * xs[i]);
      rss += e * e;
    }
    return rss;
  };
  double ic2 = 0.0;
  const double rss_plain = lsq(ys, &fit.slope, &fit.intercept);
  const double rss_log = lsq(yl, &fit.slope_with_log, &ic2);
  fit.log_correction_score = rss_log > 0.0 ? rss_plain / rss_log : (rss_plain > 0.0 ? INFINITY : 1.0);
  return fit;
}

TailFit tail_fit(const Profile& prof, double r1, double r2) { return tail_fit(prof.v, r1, r2); }

double flatness_gap(const Profile& prof, double inner_fraction) {
  const double vf = flat_profile_value(prof.params);
  const auto mask = inner_mask(prof.v.grid, inner_fraction);
  double gap = 0.0;
  for (std::size_t i = 0; i < prof.v.values.size(); ++i)
    if (mask[i]) gap = std::max(gap, std::abs(prof.v.values[i] - vf) / vf);
  return gap;
}

double BarrierW::shape(double s) const { return w_shape(s, dim, alpha); }

Field BarrierW::sample(const Grid& eta_grid) const {
  Field f(eta_grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = (*this)(f.radius(i));
  return f;
}

SupersolutionOperator::SupersolutionOperator(const ModelParams& params, const Grid& eta_grid,
                                             double inner_fraction)
    : params_(params), grid_(eta_grid) {
  params_.validate();
  if (eta_grid.dim != params.dim) throw DomainError("eta grid dimension differs from params");
  const double alpha = params.alpha, a = params.decay_exponent();
  const double g = params.dim + 2.0 * alpha;
  BarrierW w{1.0, params.dim, alpha};
  w_ = w.sample(eta_grid);
  SpectralOps ops(eta_grid);
  bracket_ = ops.frac_laplacian(w_, alpha);
  for (std::size_t i = 0; i < w_.values.size(); ++i) {
    const double s = w_.radius(i);
    const double sg = std::pow(s, g);
    const double l = std::log(std::numbers::e + s * s);
    // -(1/2a) w'(s) s - a_p w in closed form
    const double drift = (g / (2.0 * alpha) * sg / (1.0 + sg) - a - s * s / ((std::numbers::e + s * s) * alpha * l)) *
                         w_.values[i];
    bracket_.values[i] += drift;
  }
  inner_ = inner_mask(eta_grid, inner_fraction);
}

Field SupersolutionOperator::field(double lambda) const {
  Field out = bracket_;
  const double lp = std::pow(lambda, params_.p - 1.0);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += lp * std::pow(w_.values[i], params_.p);
  return out;
}

SupersolutionReport SupersolutionOperator::evaluate(double lambda) const {
  const double lp = std::pow(lambda, params_.p - 1.0);
  SupersolutionReport rep{INFINITY, 0.0};
  for (std::size_t i = 0; i < w_.values.size(); ++i) {
    rep.max_w = std::max(rep.max_w, w_.values[i]);
    if (!inner_[i]) continue;
    rep.min_value = std::min(rep.min_value, bracket_.values[i] + lp * std::pow(w_.values[i], params_.p));
  }
  return rep;
}

SupersolutionReport supersolution_check_w(double lambda, const ModelParams& params, const Grid& eta_grid,
                                          double inner_fraction) {
  return SupersolutionOperator(params, eta_grid, inner_fraction).evaluate(lambda);
}

ThresholdReport find_barrier_threshold(const ModelParams& params, const Grid& eta_grid, double rel_tol,
                                       double inner_fraction) {
  const SupersolutionOperator op(params, eta_grid, inner_fraction);
  ThresholdReport rep;
  auto passes = [&](double lam) {
    const auto r = op.evaluate(lam);
    return r.min_value >= -rel_tol * r.max_w;
  };
  double lo = 1e-6;
  rep.min_at_small = op.evaluate(lo).min_value;
  if (passes(lo)) {
    rep.found = true;
    rep.lambda_hat = lo;
  } else {
    double hi = lo;
    while (!passes(hi) && hi < 1e15) hi *= 10.0;
    if (passes(hi)) {
      lo = hi / 10.0;
      while (hi / lo > 1.0 + 1e-6 && rep.iterations < 200) {
        const double mid = std::sqrt(lo * hi);
        (passes(mid) ? hi : lo) = mid;
        ++rep.iterations;
      }
      rep.found = true;
      rep.lambda_hat = hi;
    }
  }
  const double top = rep.found ? 10.0 * rep.lambda_hat : 1e15;
  double prev = -INFINITY;
  for (int i = 0; i <= 24; ++i) {
    const double lam = 1e-6 * std::pow(top / 1e-6, i / 24.0);
    const double m = op.evaluate(lam).min_value;
    rep.lambdas.push_back(lam);
    rep.minima.push_back(m);
    if (m < prev) rep.monotone = false;
    prev = m;
  }
  return rep;
}

}  // namespace fracheat
