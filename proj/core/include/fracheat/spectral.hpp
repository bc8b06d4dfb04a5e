#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace fracheat {

struct Grid {
  int dim = 1;
  double extent = 1.0;
  int points = 64;

  double spacing() const { return extent / points; }
  double cell_volume() const;
  std::size_t size() const;
  double coord(int i) const { return -0.5 * extent + i * spacing(); }
  // signed index j in [-M/2, M/2) for storage slot i
  int signed_index(int i) const { return i < points / 2 ? i : i - points; }
  double wavenumber(int j) const;
  // number of complex coefficients in the real-to-complex half spectrum
  std::size_t spectrum_size() const;
  int center_index() const { return points / 2; }
  std::size_t center_offset() const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && extent == o.extent && points == o.points;
  }
};

Grid build_grid(int dim, double extent, int points);

struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double& at(int i, int j = 0) { return values[index(i, j)]; }
  double at(int i, int j = 0) const { return values[index(i, j)]; }
  std::size_t index(int i, int j = 0) const {
    return grid.dim == 1 ? static_cast<std::size_t>(i)
                         : static_cast<std::size_t>(i) * grid.points + j;
  }
  double radius(std::size_t flat) const;

  double mass() const;
  double max() const;
  double min() const;
  double center() const { return values[grid.center_offset()]; }
  bool all_finite() const;
};

// Real symbol over the half spectrum, indexed like the r2c output.
struct SpectralMultiplier {
  Grid grid;
  std::vector<double> symbol;
};

SpectralMultiplier fractional_symbol(const Grid& grid, double alpha);
SpectralMultiplier heat_symbol(const Grid& grid, double tau, double alpha);

// Owns FFTW plans and scratch for one grid; not shareable across threads.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const { return grid_; }
  // |xi|^2 per half-spectrum slot
  const std::vector<double>& k2() const { return k2_; }

  std::vector<std::complex<double>> forward(const Field& f);
  void backward(const std::vector<std::complex<double>>& spec, Field& out);

  void apply(Field& f, const SpectralMultiplier& m);
  void apply_frac_laplacian(Field& f, double alpha);
  void apply_heat(Field& f, double tau, double alpha);

  Field frac_laplacian(const Field& f, double alpha);
  Field heat_semigroup_step(const Field& f, double tau, double alpha);
  // sum over axes of x_axis * d_axis f
  Field gradient_dot_x(const Field& f);
  // spectral energy share of modes with max_axis |j| >= 3M/8
  double nyquist_fraction(const Field& f);
  // fraction seen by the last gradient_dot_x call
  double last_nyquist_fraction() const { return last_nyquist_; }
  bool nyquist_warning() const { return last_nyquist_ > kNyquistThreshold; }

  static constexpr double kNyquistThreshold = 1e-6;

 private:
  void load(const Field& f);
  void store(Field& f);
  const std::vector<double>& fractional_powers(double alpha);

  Grid grid_;
  std::vector<double> k2_;
  double cached_alpha_ = -1.0;
  std::vector<double> powers_;
  double last_nyquist_ = 0.0;
  double* real_ = nullptr;
  void* spec_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

Field frac_laplacian(const Field& f, double alpha);
Field heat_semigroup_step(const Field& f, double tau, double alpha);
Field spectral_gradient_dot_x(const Field& f);

}  // namespace fracheat
