#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracheat/spectral.hpp"

namespace fracheat {

class BoxTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double abserr = 0.0;
  bool converged = false;
  long intervals = 0;
  bool accelerated = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-6;
  long max_intervals = 4'000'000;
  bool accelerate = true;
};

// Gamma_alpha(1, r) from the radial inverse Fourier integral of exp(-rho^{2 alpha}).
QuadratureResult kernel_value(double alpha, int dim, double r, const QuadratureOptions& opt = {});

// (2pi)^-N normalised closed forms used as oracles
double cauchy_kernel(int dim, double t, double r);
double gaussian_kernel(int dim, double t, double r);
// Gamma_alpha(1, 0) in closed form
double kernel_center_value(double alpha, int dim);
// A with Gamma_alpha(1, r) ~ A r^{-N-2 alpha}; zero for alpha = 1
double tail_constant(double alpha, int dim);

struct KernelProfile {
  double alpha = 0.5;
  int dim = 1;
  double tol_inner = 1e-6;
  double tol_outer = 1e-4;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> errors;
  bool converged = true;
  double worst_rel_error = 0.0;
};

struct ProfileOptions {
  double tol_inner = 1e-6;
  double tol_outer = 1e-4;
  double inner_radius = 10.0;
  int workers = 1;
  std::optional<std::filesystem::path> cache_dir;
};

std::vector<double> default_radii(double r_max);
KernelProfile kernel_profile(double alpha, int dim, const std::vector<double>& radii,
                             const ProfileOptions& opt = {});

void write_profile_csv(const KernelProfile& prof, const std::filesystem::path& path);

// Versioned text cache; writes go through a temp file and rename.
class ProfileCache {
 public:
  explicit ProfileCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::filesystem::path path_for(double alpha, int dim, double r_max, double tol_inner,
                                 double tol_outer, std::size_t n) const;
  std::optional<KernelProfile> load(double alpha, int dim, const std::vector<double>& radii,
                                    double tol_inner, double tol_outer) const;
  void store(const KernelProfile& prof) const;

 private:
  std::filesystem::path dir_;
};

std::filesystem::path default_cache_dir();

struct ScaledValue {
  double value;
  bool extrapolated;
};

// Monotone cubic (PCHIP) interpolant of a profile; log-log beyond inner_radius,
// fitted power law beyond the last radius.
class KernelInterpolant {
 public:
  explicit KernelInterpolant(KernelProfile prof, double log_switch = 2.0);

  const KernelProfile& profile() const { return prof_; }
  ScaledValue at_unit_time(double r) const;
  // Gamma_alpha(t, x) = t^{-N/2a} Gamma_alpha(1, t^{-1/2a}|x|)
  ScaledValue operator()(double t, double x) const;
  double tail_slope() const { return tail_slope_; }
  double r_max() const { return prof_.radii.back(); }

 private:
  double pchip(std::size_t lo, std::size_t hi, bool loglog, double r) const;

  KernelProfile prof_;
  double log_switch_;
  std::size_t split_;
  std::vector<double> xs_, ys_, ds_;
  double tail_slope_ = 0.0;
};

ScaledValue scaled_kernel(const KernelInterpolant& kern, double t, double x);

struct BoundReport {
  double c_bound;
  double r_at_sup;
};

BoundReport kernel_bound_constant(const KernelProfile& prof);

struct Atom {
  double x;
  double y;
  double mass;
};

struct MeasureData {
  std::vector<Atom> atoms;
  std::optional<Field> density;

  double total_variation() const;
};

struct AliasOptions {
  double mass_tol = 1e-4;
  long max_images = 200000;
};

// k * periodized kernel Gamma_alpha(t0, .) sampled at nodes (aliased spectral sum).
Field periodized_kernel(const Grid& grid, double t0, double alpha, const AliasOptions& opt = {});
Field dirac_approx(const Grid& grid, double k, double t0, const KernelInterpolant& kern,
                   const AliasOptions& opt = {});
// atoms snapped to the nearest node; density smoothed by the semigroup over t0
Field measure_approx(const Grid& grid, const MeasureData& nu, double t0, double alpha,
                     const AliasOptions& opt = {});

struct MarcinkiewiczResult {
  double quasinorm;
  double equivalence_factor;
  double level_at_sup;
};

// sup_s s * mu{|u| > s}^{1/kappa} over weighted sample cells
MarcinkiewiczResult marcinkiewicz_quasinorm(const std::vector<double>& values,
                                            const std::vector<double>& measures, double kappa);

}  // namespace fracheat
