#include "fracheat/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "fracheat/params.hpp"

namespace fracheat {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

}  // namespace

Grid build_grid(int dim, double extent, int points) {
  if (dim != 1 && dim != 2) throw DomainError("grid dim must be 1 or 2");
  if (!(extent > 0.0)) throw DomainError("grid extent must be positive");
  if (!is_pow2(points) || points < 64) throw DomainError("grid points must be a power of two >= 64");
  return Grid{dim, extent, points};
}

double Grid::cell_volume() const { return std::pow(spacing(), dim); }

std::size_t Grid::size() const {
  const auto m = static_cast<std::size_t>(points);
  return dim == 1 ? m : m * m;
}

double Grid::wavenumber(int j) const { return 2.0 * std::numbers::pi * j / extent; }

std::size_t Grid::spectrum_size() const {
  const auto half = static_cast<std::size_t>(points / 2 + 1);
  return dim == 1 ? half : static_cast<std::size_t>(points) * half;
}

std::size_t Grid::center_offset() const {
  const auto c = static_cast<std::size_t>(center_index());
  return dim == 1 ? c : c * points + c;
}

double Field::radius(std::size_t flat) const {
  if (grid.dim == 1) return std::abs(grid.coord(static_cast<int>(flat)));
  const int m = grid.points;
  const double x = grid.coord(static_cast<int>(flat / m));
  const double y = grid.coord(static_cast<int>(flat % m));
  return std::hypot(x, y);
}

double Field::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

namespace {

std::vector<double> k2_table(const Grid& g) {
  std::vector<double> k2(g.spectrum_size());
  const int m = g.points;
  const int half = m / 2 + 1;
  if (g.dim == 1) {
    for (int j = 0; j < half; ++j) k2[j] = std::pow(g.wavenumber(j), 2);
  } else {
    for (int i = 0; i < m; ++i) {
      const double kx = g.wavenumber(g.signed_index(i));
      for (int j = 0; j < half; ++j) {
        const double ky = g.wavenumber(j);
        k2[static_cast<std::size_t>(i) * half + j] = kx * kx + ky * ky;
      }
    }
  }
  return k2;
}

}  // namespace

SpectralMultiplier fractional_symbol(const Grid& grid, double alpha) {
  SpectralMultiplier m{grid, k2_table(grid)};
  for (double& s : m.symbol) s = s == 0.0 ? 0.0 : std::pow(s, alpha);
  return m;
}

SpectralMultiplier heat_symbol(const Grid& grid, double tau, double alpha) {
  if (tau < 0.0) throw DomainError("heat step needs tau >= 0");
  SpectralMultiplier m = fractional_symbol(grid, alpha);
  for (double& s : m.symbol) s = std::exp(-tau * s);
  return m;
}

SpectralOps::SpectralOps(const Grid& grid) : grid_(grid), k2_(k2_table(grid)) {
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(grid_.size());
  auto* spec = fftw_alloc_complex(grid_.spectrum_size());
  spec_ = spec;
  const unsigned flags = FFTW_ESTIMATE;
  if (grid_.dim == 1) {
    plan_fwd_ = fftw_plan_dft_r2c_1d(grid_.points, real_, spec, flags);
    plan_bwd_ = fftw_plan_dft_c2r_1d(grid_.points, spec, real_, flags);
  } else {
    plan_fwd_ = fftw_plan_dft_r2c_2d(grid_.points, grid_.points, real_, spec, flags);
    plan_bwd_ = fftw_plan_dft_c2r_2d(grid_.points, grid_.points, spec, real_, flags);
  }
}

SpectralOps::~SpectralOps() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void SpectralOps::load(const Field& f) {
  if (!(f.grid == grid_)) throw DomainError("field grid does not match spectral operator");
  std::copy(f.values.begin(), f.values.end(), real_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void SpectralOps::store(Field& f) {
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  const double norm = 1.0 / static_cast<double>(grid_.size());
  f.grid = grid_;
  f.values.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) f.values[i] = real_[i] * norm;
}

std::vector<std::complex<double>> SpectralOps::forward(const Field& f) {
  load(f);
  const auto* c = static_cast<const std::complex<double>*>(spec_);
  return {c, c + grid_.spectrum_size()};
}

void SpectralOps::backward(const std::vector<std::complex<double>>& spec, Field& out) {
  std::copy(spec.begin(), spec.end(), static_cast<std::complex<double>*>(spec_));
  store(out);
}

const std::vector<double>& SpectralOps::fractional_powers(double alpha) {
  if (alpha != cached_alpha_) {
    powers_.resize(k2_.size());
    for (std::size_t i = 0; i < k2_.size(); ++i)
      powers_[i] = k2_[i] == 0.0 ? 0.0 : std::pow(k2_[i], alpha);
    cached_alpha_ = alpha;
  }
  return powers_;
}

void SpectralOps::apply(Field& f, const SpectralMultiplier& m) {
  if (!(m.grid == grid_)) throw DomainError("multiplier grid does not match");
  load(f);
  auto* c = static_cast<std::complex<double>*>(spec_);
  for (std::size_t i = 0; i < m.symbol.size(); ++i) c[i] *= m.symbol[i];
  store(f);
}

void SpectralOps::apply_frac_laplacian(Field& f, double alpha) {
  const auto& pw = fractional_powers(alpha);
  load(f);
  auto* c = static_cast<std::complex<double>*>(spec_);
  for (std::size_t i = 0; i < pw.size(); ++i) c[i] *= pw[i];
  store(f);
}

void SpectralOps::apply_heat(Field& f, double tau, double alpha) {
  if (tau < 0.0) throw DomainError("heat step needs tau >= 0");
  if (tau == 0.0) return;
  const auto& pw = fractional_powers(alpha);
  load(f);
  auto* c = static_cast<std::complex<double>*>(spec_);
  for (std::size_t i = 0; i < pw.size(); ++i) c[i] *= std::exp(-tau * pw[i]);
  store(f);
}

Field SpectralOps::frac_laplacian(const Field& f, double alpha) {
  Field out = f;
  apply_frac_laplacian(out, alpha);
  return out;
}

Field SpectralOps::heat_semigroup_step(const Field& f, double tau, double alpha) {
  Field out = f;
  apply_heat(out, tau, alpha);
  return out;
}

Field SpectralOps::gradient_dot_x(const Field& f) {
  last_nyquist_ = nyquist_fraction(f);
  const auto spec = forward(f);
  const int m = grid_.points;
  const int half = m / 2 + 1;
  Field out(grid_);
  std::vector<std::complex<double>> d(spec.size());
  const std::complex<double> I(0.0, 1.0);
  for (int axis = 0; axis < grid_.dim; ++axis) {
    for (std::size_t s = 0; s < spec.size(); ++s) {
      int j;
      if (grid_.dim == 1 || axis == 1) {
        j = static_cast<int>(s % half);
      } else {
        j = grid_.signed_index(static_cast<int>(s / half));
      }
      if (j == m / 2 || j == -m / 2) j = 0;  // Nyquist derivative dropped
      d[s] = I * grid_.wavenumber(j) * spec[s];
    }
    Field deriv(grid_);
    backward(d, deriv);
    for (std::size_t n = 0; n < out.values.size(); ++n) {
      const int idx = grid_.dim == 1 ? static_cast<int>(n)
                      : axis == 0    ? static_cast<int>(n / m)
                                     : static_cast<int>(n % m);
      out.values[n] += grid_.coord(idx) * deriv.values[n];
    }
  }
  out.time = f.time;
  return out;
}

double SpectralOps::nyquist_fraction(const Field& f) {
  const auto spec = forward(f);
  const int m = grid_.points;
  const int half = m / 2 + 1;
  const int cut = 3 * m / 8;
  double total = 0.0, high = 0.0;
  for (std::size_t s = 0; s < spec.size(); ++s) {
    const int jy = static_cast<int>(s % half);
    const int jx = grid_.dim == 1 ? 0 : std::abs(grid_.signed_index(static_cast<int>(s / half)));
    // interior half-spectrum columns stand for two conjugate modes
    const double w = (jy == 0 || jy == m / 2) ? 1.0 : 2.0;
    const double e = w * std::norm(spec[s]);
    total += e;
    if (std::max(jx, jy) >= cut) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

Field frac_laplacian(const Field& f, double alpha) {
  SpectralOps ops(f.grid);
  return ops.frac_laplacian(f, alpha);
}

Field heat_semigroup_step(const Field& f, double tau, double alpha) {
  SpectralOps ops(f.grid);
  return ops.heat_semigroup_step(f, tau, alpha);
}

Field spectral_gradient_dot_x(const Field& f) {
  SpectralOps ops(f.grid);
  return ops.gradient_dot_x(f);
}

}  // namespace fracheat
