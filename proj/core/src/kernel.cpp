#include "fracheat/kernel.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sum.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "fracheat/params.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_prefactor(int dim) { return dim == 1 ? 1.0 / kPi : 1.0 / (2.0 * kPi); }

struct RadialCtx {
  double two_alpha;
  int dim;
  double r;
};

double radial_integrand(double rho, void* raw) {
  const auto* c = static_cast<const RadialCtx*>(raw);
  const double env = std::exp(-std::pow(rho, c->two_alpha));
  if (c->dim == 1) return std::cos(rho * c->r) * env;
  return gsl_sf_bessel_J0(rho * c->r) * rho * env;
}

double envelope(const RadialCtx& c, double rho) {
  const double e = std::exp(-std::pow(rho, c.two_alpha));
  return c.dim == 1 ? e : std::sqrt(rho) * e;
}

// zeros of cos(rho r) or J0(rho r) in rho
double node(const RadialCtx& c, long j) {
  if (c.dim == 1) return (static_cast<double>(j) - 0.5) * kPi / c.r;
  return gsl_sf_bessel_zero_J0(static_cast<unsigned>(j)) / c.r;
}

using Workspace = std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>;
using LevinWs = std::unique_ptr<gsl_sum_levin_u_workspace, decltype(&gsl_sum_levin_u_free)>;

}  // namespace

double cauchy_kernel(int dim, double t, double r) {
  if (dim == 1) return t / (kPi * (t * t + r * r));
  return t / (2.0 * kPi * std::pow(t * t + r * r, 1.5));
}

double gaussian_kernel(int dim, double t, double r) {
  return std::pow(4.0 * kPi * t, -0.5 * dim) * std::exp(-r * r / (4.0 * t));
}

double kernel_center_value(double alpha, int dim) {
  if (dim == 1) return std::tgamma(1.0 + 1.0 / (2.0 * alpha)) / kPi;
  return std::tgamma(1.0 / alpha) / (2.0 * alpha) / (2.0 * kPi);
}

double tail_constant(double alpha, int dim) {
  if (alpha >= 1.0) return 0.0;
  return std::pow(4.0, alpha) * std::tgamma(0.5 * dim + alpha) /
         (std::pow(kPi, 0.5 * dim) * std::abs(std::tgamma(-alpha)));
}

QuadratureResult kernel_value(double alpha, int dim, double r, const QuadratureOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
  if (r < 0.0) throw DomainError("radius must be nonnegative");
  gsl_set_error_handler_off();
  Workspace ws(gsl_integration_workspace_alloc(1000), gsl_integration_workspace_free);
  RadialCtx ctx{2.0 * alpha, dim, r};
  const double pre = radial_prefactor(dim);
  QuadratureResult res;

  if (r == 0.0) {
    gsl_function f{&radial_integrand, &ctx};
    double v = 0.0, e = 0.0;
    const int st = gsl_integration_qagiu(&f, 0.0, 0.0, 1e-13, 1000, ws.get(), &v, &e);
    res.value = pre * v;
    res.abserr = pre * e;
    res.converged = st == GSL_SUCCESS || e <= opt.rel_tol * std::abs(v);
    res.intervals = 1;
    return res;
  }

  gsl_function f{&radial_integrand, &ctx};
  double sum = 0.0, err = 0.0;
  double prev_term = INFINITY;
  double a = 0.0;
  std::vector<double> tail;  // terms after the envelope peak
  double prefix_at_tail = 0.0;
  double last_levin = NAN;
  long j = 1;
  LevinWs lw(nullptr, gsl_sum_levin_u_free);
  constexpr std::size_t kWindow = 48;
  constexpr std::size_t kStride = 16;

  for (; j <= opt.max_intervals; ++j) {
    const double b = node(ctx, j);
    double v = 0.0, e = 0.0;
    if (j == 1) {
      gsl_integration_qags(&f, a, b, 0.0, 1e-13, 1000, ws.get(), &v, &e);
    } else {
      gsl_integration_qag(&f, a, b, 0.0, 1e-12, 1000, GSL_INTEG_GAUSS21, ws.get(), &v, &e);
    }
    sum += v;
    err += e;
    const bool past_peak = envelope(ctx, b) < envelope(ctx, a);
    a = b;
    const double mag = std::abs(v);
    const double target = 0.1 * opt.rel_tol * std::abs(sum);
    if (past_peak && mag <= prev_term && mag <= target) {
      res.converged = true;
      break;
    }
    prev_term = mag;
    if (!opt.accelerate || !past_peak) continue;
    if (tail.empty()) prefix_at_tail = sum - v;
    tail.push_back(v);
    if (tail.size() >= kWindow && tail.size() % kStride == 0) {
      const std::size_t start = tail.size() - kWindow;
      double prefix = prefix_at_tail;
      for (std::size_t i = 0; i < start; ++i) prefix += tail[i];
      if (!lw) lw.reset(gsl_sum_levin_u_alloc(kWindow));
      double acc = 0.0, acc_err = 0.0;
      gsl_sum_levin_u_accel(tail.data() + start, kWindow, lw.get(), &acc, &acc_err);
      const double est = prefix + acc;
      if (std::isfinite(est) && std::isfinite(last_levin) &&
          std::abs(est - last_levin) <= 0.01 * opt.rel_tol * std::abs(est) &&
          acc_err <= 0.1 * opt.rel_tol * std::abs(est)) {
        sum = est;
        err += std::abs(est - last_levin) + acc_err;
        res.accelerated = true;
        res.converged = true;
        break;
      }
      last_levin = est;
    }
  }
  res.intervals = std::min(j, opt.max_intervals);
  res.value = pre * sum;
  res.abserr = pre * err;
  return res;
}

std::vector<double> default_radii(double r_max) {
  std::vector<double> r;
  for (int i = 0; i < 100; ++i) r.push_back(0.02 * i);
  for (int i = 0; i < 80; ++i) r.push_back(2.0 + 0.1 * i);
  const double per_decade = 48.0;
  const int n = static_cast<int>(std::ceil(per_decade * std::log10(r_max / 10.0)));
  for (int i = 0; i <= n; ++i) {
    const double v = 10.0 * std::pow(r_max / 10.0, static_cast<double>(i) / std::max(n, 1));
    r.push_back(v);
  }
  r.back() = r_max;
  return r;
}

KernelProfile kernel_profile(double alpha, int dim, const std::vector<double>& radii,
                             const ProfileOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (radii.empty()) throw DomainError("no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0.0 || (i > 0 && !(radii[i] > radii[i - 1])))
      throw DomainError("radii must be sorted, distinct and nonnegative");
  }
  std::optional<ProfileCache> cache;
  if (opt.cache_dir) {
    cache.emplace(*opt.cache_dir);
    if (auto hit = cache->load(alpha, dim, radii, opt.tol_inner, opt.tol_outer)) return *hit;
  }

  KernelProfile prof;
  prof.alpha = alpha;
  prof.dim = dim;
  prof.tol_inner = opt.tol_inner;
  prof.tol_outer = opt.tol_outer;
  prof.radii = radii;
  prof.values.assign(radii.size(), 0.0);
  prof.errors.assign(radii.size(), 0.0);
  std::vector<char> ok(radii.size(), 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < radii.size(); i = next++) {
      QuadratureOptions q;
      q.rel_tol = radii[i] <= opt.inner_radius ? opt.tol_inner : opt.tol_outer;
      const auto r = kernel_value(alpha, dim, radii[i], q);
      prof.values[i] = r.value;
      prof.errors[i] = r.abserr;
      ok[i] = r.converged;
    }
  };
  const int nw = std::max(1, opt.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < radii.size(); ++i) {
    prof.converged = prof.converged && ok[i] && prof.values[i] > 0.0;
    if (prof.values[i] != 0.0)
      prof.worst_rel_error = std::max(prof.worst_rel_error, prof.errors[i] / std::abs(prof.values[i]));
  }
  if (cache && prof.converged) cache->store(prof);
  return prof;
}

void write_profile_csv(const KernelProfile& prof, const std::filesystem::path& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot open " + path.string());
  std::fprintf(out, "r,value,error\n");
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    std::fprintf(out, "%.17g,%.17g,%.6g\n", prof.radii[i], prof.values[i], prof.errors[i]);
  if (std::fclose(out) != 0) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("FRACHEAT_CACHE")) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return std::filesystem::path(xdg) / "fracheat";
  if (const char* home = std::getenv("HOME")) return std::filesystem::path(home) / ".cache" / "fracheat";
  return std::filesystem::temp_directory_path() / "fracheat";
}

std::filesystem::path ProfileCache::path_for(double alpha, int dim, double r_max, double tol_inner,
                                             double tol_outer, std::size_t n) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "kernel_a%.6f_N%d_r%g_t%g_%g_n%zu.v1.txt", alpha, dim, r_max,
                tol_inner, tol_outer, n);
  return dir_ / buf;
}

namespace {
constexpr const char* kCacheHeader = "fracheat-kernel-profile v1";
}

std::optional<KernelProfile> ProfileCache::load(double alpha, int dim,
                                                const std::vector<double>& radii,
                                                double tol_inner, double tol_outer) const {
  const auto path = path_for(alpha, dim, radii.back(), tol_inner, tol_outer, radii.size());
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line;
  if (!std::getline(is, line) || line != kCacheHeader) return std::nullopt;
  KernelProfile prof;
  std::size_t n = 0;
  if (!std::getline(is, line) ||
      std::sscanf(line.c_str(), "alpha=%lf dim=%d tol=%lf,%lf n=%zu", &prof.alpha, &prof.dim,
                  &prof.tol_inner, &prof.tol_outer, &n) != 5)
    return std::nullopt;
  if (prof.alpha != alpha || prof.dim != dim || prof.tol_inner != tol_inner ||
      prof.tol_outer != tol_outer || n != radii.size())
    return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    double r, v, e;
    if (!std::getline(is, line) || std::sscanf(line.c_str(), "%lf %lf %lf", &r, &v, &e) != 3)
      return std::nullopt;
    if (r != radii[i]) return std::nullopt;
    prof.radii.push_back(r);
    prof.values.push_back(v);
    prof.errors.push_back(e);
    if (v != 0.0) prof.worst_rel_error = std::max(prof.worst_rel_error, e / std::abs(v));
  }
  return prof;
}

void ProfileCache::store(const KernelProfile& prof) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const auto path = path_for(prof.alpha, prof.dim, prof.radii.back(), prof.tol_inner,
                             prof.tol_outer, prof.radii.size());
  std::ostringstream tag;
  tag << path.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const auto tmp = dir_ / tag.str();
  {
    std::FILE* out = std::fopen(tmp.c_str(), "w");
    if (!out) return;  // cache is best effort
    std::fprintf(out, "%s\nalpha=%.17g dim=%d tol=%.17g,%.17g n=%zu\n", kCacheHeader, prof.alpha,
                 prof.dim, prof.tol_inner, prof.tol_outer, prof.radii.size());
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
      std::fprintf(out, "%.17g %.17g %.17g\n", prof.radii[i], prof.values[i], prof.errors[i]);
    if (std::fclose(out) != 0) {
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

namespace {

// Fritsch-Butland derivatives
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y,
                                 std::size_t lo, std::size_t hi) {
  const std::size_t n = hi - lo;
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[lo + i + 1] - x[lo + i];
    del[i] = (y[lo + i + 1] - y[lo + i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = del[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) continue;
    const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
    d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) s = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(s) > 3 * std::abs(d0)) s = 3 * d0;
    return s;
  };
  d[0] = endpoint(h[0], h[1], del[0], del[1]);
  d[n - 1] = endpoint(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

}  // namespace

KernelInterpolant::KernelInterpolant(KernelProfile prof, double log_switch)
    : prof_(std::move(prof)), log_switch_(log_switch) {
  const auto& r = prof_.radii;
  const auto& v = prof_.values;
  if (r.size() < 4) throw DomainError("profile too short for interpolation");
  for (double x : v)
    if (!(x > 0.0)) throw DomainError("profile values must be positive");
  split_ = static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), log_switch_) - r.begin());
  if (split_ < 1 || split_ + 2 > r.size()) split_ = r.size();
  xs_.resize(r.size());
  ys_.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const bool lg = i >= split_;
    xs_[i] = lg ? std::log(r[i]) : r[i];
    ys_[i] = lg ? std::log(v[i]) : v[i];
  }
  // linear segment runs through the switch node so both pieces share it
  const std::size_t lin_hi = std::min(split_ + 1, r.size());
  ds_.assign(r.size(), 0.0);
  {
    std::vector<double> xl(r.begin(), r.begin() + lin_hi), yl(v.begin(), v.begin() + lin_hi);
    const auto d = pchip_slopes(xl, yl, 0, lin_hi);
    std::copy(d.begin(), d.begin() + std::min(split_, lin_hi), ds_.begin());
  }
  if (split_ < r.size()) {
    const auto d = pchip_slopes(xs_, ys_, split_, r.size());
    std::copy(d.begin(), d.end(), ds_.begin() + split_);
  }
  // tail power law from the last half of the radius range
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0.5 * r.back() || r[i] <= 0.0) continue;
    const double x = std::log(r[i]), y = std::log(v[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  tail_slope_ = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                       : std::log(v.back() / v[v.size() - 2]) / std::log(r.back() / r[r.size() - 2]);
}

double KernelInterpolant::pchip(std::size_t lo, std::size_t hi, bool loglog, double r) const {
  const auto& rr = prof_.radii;
  const auto& v = prof_.values;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(rr.begin() + lo, rr.begin() + hi, r) - rr.begin());
  i = std::clamp<std::size_t>(i, lo + 1, hi - 1) - 1;
  double x0, x1, y0, y1, d0, d1, x;
  if (loglog) {
    x0 = xs_[i]; x1 = xs_[i + 1]; y0 = ys_[i]; y1 = ys_[i + 1]; x = std::log(r);
  } else {
    x0 = rr[i]; x1 = rr[i + 1]; y0 = v[i]; y1 = v[i + 1]; x = r;
  }
  d0 = ds_[i];
  d1 = ds_[i + 1];
  if (!loglog && i + 1 == split_) {
    // derivative at the switch node expressed in linear coordinates
    d1 = ds_[split_] * v[split_] / rr[split_];
  }
  const double h = x1 - x0, s = (x - x0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double y = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  return loglog ? std::exp(y) : y;
}

ScaledValue KernelInterpolant::at_unit_time(double r) const {
  r = std::abs(r);
  const auto& rr = prof_.radii;
  if (r > rr.back()) return {prof_.values.back() * std::pow(r / rr.back(), tail_slope_), true};
  if (r < rr.front()) return {prof_.values.front(), rr.front() > 0.0};
  if (r < log_switch_ || split_ >= rr.size()) return {pchip(0, std::min(split_ + 1, rr.size()), false, r), false};
  return {pchip(split_, rr.size(), true, r), false};
}

ScaledValue KernelInterpolant::operator()(double t, double x) const {
  if (!(t > 0.0)) throw DomainError("scaled kernel needs t > 0");
  const double ia = 1.0 / (2.0 * prof_.alpha);
  const auto v = at_unit_time(std::abs(x) * std::pow(t, -ia));
  return {std::pow(t, -prof_.dim * ia) * v.value, v.extrapolated};
}

ScaledValue scaled_kernel(const KernelInterpolant& kern, double t, double x) { return kern(t, x); }

BoundReport kernel_bound_constant(const KernelProfile& prof) {
  const double e = prof.dim + 2.0 * prof.alpha;
  BoundReport b{0.0, 0.0};
  for (std::size_t i = 0; i < prof.radii.size(); ++i) {
    const double c = prof.values[i] * (1.0 + std::pow(prof.radii[i], e));
    if (c > b.c_bound) b = {c, prof.radii[i]};
  }
  return b;
}

double MeasureData::total_variation() const {
  double tv = 0.0;
  for (const auto& a : atoms) tv += std::abs(a.mass);
  if (density) {
    double s = 0.0;
    for (double v : density->values) s += std::abs(v);
    tv += s * density->grid.cell_volume();
  }
  return tv;
}

namespace {

double alias_sum(double xi_base, double shift, double t0, double alpha, long max_images,
                 bool* exhausted) {
  // sum over m of exp(-t0 |xi_base + m shift|^{2 alpha}), 1D
  double s = std::exp(-t0 * std::pow(std::abs(xi_base), 2 * alpha));
  for (int sign : {1, -1}) {
    for (long m = 1;; ++m) {
      if (m > max_images) {
        *exhausted = true;
        break;
      }
      const double term = std::exp(-t0 * std::pow(std::abs(xi_base + sign * m * shift), 2 * alpha));
      s += term;
      if (term < 1e-18 * s) break;
    }
  }
  return s;
}

}  // namespace

Field periodized_kernel(const Grid& grid, double t0, double alpha, const AliasOptions& opt) {
  if (!(t0 > 0.0)) throw DomainError("mollification time must be positive");
  const int m = grid.points;
  const int half = m / 2 + 1;
  const double shift = grid.wavenumber(m);
  const double scale = static_cast<double>(grid.size()) / std::pow(grid.extent, grid.dim);
  std::vector<std::complex<double>> spec(grid.spectrum_size());
  bool exhausted = false;
  if (grid.dim == 1) {
    for (int j = 0; j < half; ++j) {
      const double c = alias_sum(grid.wavenumber(j), shift, t0, alpha, opt.max_images, &exhausted);
      spec[j] = (j % 2 ? -1.0 : 1.0) * c * scale;
    }
  } else {
    const double two_a = 2 * alpha;
    for (int i = 0; i < m; ++i) {
      const double kx = grid.wavenumber(grid.signed_index(i));
      for (int j = 0; j < half; ++j) {
        const double ky = grid.wavenumber(j);
        double c = 0.0;
        // square shells of images until a shell adds nothing
        for (long R = 0;; ++R) {
          if (R > opt.max_images) {
            exhausted = true;
            break;
          }
          double shell = 0.0;
          for (long a = -R; a <= R; ++a) {
            for (long b = -R; b <= R; ++b) {
              if (std::max(std::labs(a), std::labs(b)) != R) continue;
              const double qx = kx + a * shift, qy = ky + b * shift;
              shell += std::exp(-t0 * std::pow(qx * qx + qy * qy, 0.5 * two_a));
            }
          }
          c += shell;
          if (R > 0 && shell < 1e-18 * c) break;
        }
        spec[static_cast<std::size_t>(i) * half + j] = ((i + j) % 2 ? -1.0 : 1.0) * c * scale;
      }
    }
  }
  SpectralOps ops(grid);
  Field f(grid);
  ops.backward(spec, f);
  f.time = t0;
  const double mass_err = std::abs(f.mass() - 1.0);
  if (exhausted || mass_err > opt.mass_tol)
    throw BoxTooSmall("periodized kernel mass error " + std::to_string(mass_err) +
                      " exceeds tolerance; refine M or increase t0");
  return f;
}

Field dirac_approx(const Grid& grid, double k, double t0, const KernelInterpolant& kern,
                   const AliasOptions& opt) {
  if (kern.profile().dim != grid.dim) throw DomainError("profile dimension does not match grid");
  const double edge = kern(t0, 0.5 * grid.extent).value;
  const double center = kern(t0, 0.0).value;
  if (edge > 1e-6 * center)
    throw BoxTooSmall("kernel tail at L/2 exceeds 1e-6 of the center value");
  Field f = periodized_kernel(grid, t0, kern.profile().alpha, opt);
  for (double& v : f.values) v *= k;
  return f;
}

Field measure_approx(const Grid& grid, const MeasureData& nu, double t0, double alpha,
                     const AliasOptions& opt) {
  const Field base = periodized_kernel(grid, t0, alpha, opt);
  Field out(grid);
  out.time = t0;
  const int m = grid.points;
  const double h = grid.spacing();
  for (const auto& a : nu.atoms) {
    if (std::abs(a.x) > 0.5 * grid.extent || std::abs(a.y) > 0.5 * grid.extent)
      throw DomainError("atom outside the box");
    const int si = static_cast<int>(std::lround(a.x / h));
    const int sj = grid.dim == 2 ? static_cast<int>(std::lround(a.y / h)) : 0;
    for (std::size_t n = 0; n < out.values.size(); ++n) {
      if (grid.dim == 1) {
        const int src = ((static_cast<int>(n) - si) % m + m) % m;
        out.values[n] += a.mass * base.values[src];
      } else {
        const int i = static_cast<int>(n) / m, j = static_cast<int>(n) % m;
        const int ii = ((i - si) % m + m) % m, jj = ((j - sj) % m + m) % m;
        out.values[n] += a.mass * base.values[static_cast<std::size_t>(ii) * m + jj];
      }
    }
  }
  if (nu.density) {
    if (!(nu.density->grid == grid)) throw DomainError("density grid does not match");
    SpectralOps ops(grid);
    const Field d = ops.heat_semigroup_step(*nu.density, t0, alpha);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += d.values[n];
  }
  return out;
}

MarcinkiewiczResult marcinkiewicz_quasinorm(const std::vector<double>& values,
                                            const std::vector<double>& measures, double kappa) {
  if (!(kappa > 1.0)) throw DomainError("kappa must exceed 1");
  if (values.size() != measures.size()) throw DomainError("values and measures differ in length");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(values[a]) > std::abs(values[b]); });
  MarcinkiewiczResult res{0.0, kappa / (kappa - 1.0), 0.0};
  double cum = 0.0;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    const double s = std::abs(values[idx[n]]);
    cum += measures[idx[n]];
    // all cells at this level enter before evaluating
    if (n + 1 < idx.size() && std::abs(values[idx[n + 1]]) == s) continue;
    if (s <= 0.0) break;
    const double q = s * std::pow(cum, 1.0 / kappa);
    if (q > res.quasinorm) res = {q, res.equivalence_factor, s};
  }
  return res;
}

}  // namespace fracheat
