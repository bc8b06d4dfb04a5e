#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracheat/kernel.hpp"
#include "fracheat/params.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class NegativityAbort : public NumericalAbort {
 public:
  using NumericalAbort::NumericalAbort;
};

class NonFiniteAbort : public NumericalAbort {
 public:
  using NumericalAbort::NumericalAbort;
};

class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(const std::string& what, double k_lo, double k_hi, double x, double y)
      : std::runtime_error(what), k_lo(k_lo), k_hi(k_hi), x(x), y(y) {}
  double k_lo, k_hi, x, y;
};

struct TimeMesh {
  double t0 = 0.1;
  double T = 1.0;
  int K = 100;
  double gamma = 1.0;
  std::vector<double> nodes;

  static TimeMesh graded(double t0, double T, int K, double gamma);
  static double default_gamma(double beta) { return beta < 1.0 ? 2.0 / (1.0 + beta) : 1.0; }
  // adds exact nodes (checkpoints) without moving the graded ones
  TimeMesh with_breakpoints(const std::vector<double>& times) const;
  std::size_t steps() const { return nodes.size() - 1; }
  std::size_t index_of(double t) const;
};

enum class SplitOrder { AbsorptionOuter, DiffusionOuter };

struct StepperConfig {
  ModelParams params;
  double absorption_coeff = 1.0;  // 0 disables the absorption term
  bool diffusion = true;
  SplitOrder order = SplitOrder::AbsorptionOuter;
  double negativity_rel = 1e-10;
  // non-power-law absorption, integrated by RK4 substeps
  std::optional<AbsorptionSpec> general;
  int rk_substeps = 16;
};

double absorb_scalar(double y, double ta, double tb, double beta, double p, double coeff = 1.0);
void absorption_step_inplace(Field& f, double ta, double tb, double beta, double p, double coeff = 1.0);
Field absorption_step_exact(const Field& f, double ta, double tb, double beta, double p);

class Stepper {
 public:
  Stepper(const Grid& grid, StepperConfig cfg);
  const StepperConfig& config() const { return cfg_; }
  SpectralOps& ops() { return ops_; }

  void absorb(Field& f, double ta, double tb) const;
  void diffuse(Field& f, double tau);
  // one Strang step; applies the negativity policy after diffusion
  void step(Field& f, double ta, double tb, long index = 0);
  long clamped() const { return clamped_; }

 private:
  void enforce_sign(Field& f, long index);

  StepperConfig cfg_;
  SpectralOps ops_;
  long clamped_ = 0;
};

Field strang_step(const Field& f, double ta, double tb, const StepperConfig& cfg);

struct StepDiagnostics {
  double t;
  double mass;
  double max;
  double min;
  double absorbed;     // trapezoidal integral of c t^beta sum u^p h^N over the step
  double flat_margin;  // (max u - U_p)/max u, NaN when p <= 1
};

struct Trajectory {
  ModelParams params;
  TimeMesh mesh;
  std::vector<Field> snapshots;
  std::vector<StepDiagnostics> diagnostics;  // entry 0 is the initial state
  long clamped = 0;

  const Field& snapshot_at(double t) const;
  std::vector<double> snapshot_times() const;
};

struct EvolveOptions {
  StepperConfig stepper;
  std::vector<double> snapshot_times;  // must be mesh nodes; the final state is always kept
  bool snapshot_every_step = false;
};

Trajectory evolve(const Field& initial, const TimeMesh& mesh, const EvolveOptions& opt);

// Pre-absorbed Dirac datum A(0 -> t0)[k Gamma(t0)]; keeps u <= min(k Gamma, U_p) from the start.
Field dirac_initial(const Grid& grid, double k, double t0, const ModelParams& params,
                    double absorption_coeff = 1.0);

struct ResidualStats {
  double t;
  double max_abs;
  double l1;
  double max_rel;  // max_abs / max u(t)
};

struct DuhamelReport {
  std::vector<ResidualStats> checkpoints;
  bool resolution_warning = false;
  double worst_change = 0.0;
};

// R(t) = u(t) - S(t-t0)u(t0) + int_{t0}^t S(t-s)[c s^beta u^p(s)] ds over stored snapshots
DuhamelReport duhamel_residual(const Trajectory& traj, const StepperConfig& cfg,
                               const std::vector<double>& checkpoints);

// k^p * int_0^t S(t-s)[s^beta Gamma(s)^p] ds, the lower sandwich correction
Field duhamel_lower_correction(const Grid& grid, double t, const ModelParams& params, double k,
                               const KernelInterpolant& kern, int nodes = 64);

// w(s) = ln(e + s^2)/(1 + s^{N+2 alpha})
double w_shape(double s, int dim, double alpha);

struct BarrierResult {
  std::string name;
  double margin;                       // upper barriers: max (u - B)/max u
  std::vector<double> fitted_constant;  // lower envelope: largest c per snapshot
};

enum class BarrierKind { Kernel, Flat, W, LowerEnvelope };

struct Barrier {
  BarrierKind kind;
  double k = 1.0;       // Kernel: mass
  double lambda = 1.0;  // W: amplitude
  const KernelInterpolant* kern = nullptr;
  double inner_fraction = 0.5;  // LowerEnvelope fit region |x| <= fraction * L/2
};

BarrierResult barrier_check(const Trajectory& traj, const Barrier& barrier);
BarrierResult barrier_check(const std::vector<Field>& snapshots, const ModelParams& params,
                            const Barrier& barrier);

struct MonotonicityReport {
  bool ok = true;
  double worst_margin = 0.0;  // max (u_lo - u_hi)/max u_hi
  double k_lo = 0.0, k_hi = 0.0;
  double x = 0.0, y = 0.0;
  double t = 0.0;
};

MonotonicityReport check_monotone(const Field& lo, const Field& hi, double k_lo, double k_hi,
                                  double tol = 1e-6);

struct FamilyMember {
  double k;
  std::vector<Field> checkpoints;
  std::vector<StepDiagnostics> diagnostics;
};

struct FamilyResult {
  std::vector<FamilyMember> members;
  std::vector<double> checkpoint_times;
  MonotonicityReport monotonicity;
  std::vector<double> saturation;  // s_i between consecutive k at the last checkpoint
  Field u_inf;
};

struct FamilyOptions {
  EvolveOptions evolve;
  int workers = 1;
  bool throw_on_violation = false;
};

FamilyResult dirac_family_run(const std::vector<double>& k_list, const ModelParams& params,
                              const Grid& grid, const TimeMesh& mesh,
                              const std::vector<double>& checkpoints, const FamilyOptions& opt);

struct ShortTimeTable {
  std::vector<double> t;
  std::vector<double> ratio;
  double sigma0;
  double extrapolated;
};

ShortTimeTable short_time_constant(const ModelParams& params, double k,
                                   const std::vector<double>& t_list, const Grid& grid,
                                   const StepperConfig& cfg, int steps_per_unit = 400);

// runs fn(i) for i in [0, n) on up to `workers` threads; exceptions rethrown in index order
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace fracheat
