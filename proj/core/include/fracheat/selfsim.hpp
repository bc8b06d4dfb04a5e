#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracheat/params.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

class OutOfBox : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_with_log = 0.0;
  // RSS(plain) / RSS(with ln(2+r) factor); > 1 means the log factor helps
  double log_correction_score = 1.0;
  double r1 = 0.0, r2 = 0.0;
  std::size_t samples = 0;
};

struct Profile {
  ModelParams params;
  Field v;           // on the eta grid, v.time = source time t
  double source_time = 1.0;
};

// v(eta) = t^{(1+beta)/(p-1)} u(t, t^{1/2a} eta); default eta grid maps nodes exactly
Profile rescale_profile(const Field& u, const ModelParams& params,
                        const std::optional<Grid>& eta_grid = std::nullopt);

struct SelfsimResidual {
  double max_abs = 0.0;
  double normalized = 0.0;  // max |R| / max v^p over the inner region (max v without absorption)
  double nyquist_fraction = 0.0;
  bool nyquist_warning = false;
  Field residual;
};

// with_absorption = false: linear profile equation, a = N/(2 alpha), solved by Gamma_alpha(1, .)
SelfsimResidual selfsim_residual(const Profile& prof, double inner_fraction = 0.8,
                                 bool with_absorption = true);

TailFit tail_fit(const Field& v, double r1, double r2);
TailFit tail_fit(const Profile& prof, double r1, double r2);

double flatness_gap(const Profile& prof, double inner_fraction = 0.5);

struct BarrierW {
  double lambda = 1.0;
  int dim = 2;
  double alpha = 0.5;

  double shape(double s) const;
  double operator()(double s) const { return lambda * shape(s); }
  Field sample(const Grid& eta_grid) const;
};

struct SupersolutionReport {
  double min_value;
  double max_w;
};

// min over the inner region of S[w_lambda] = (-D)^a w - w's/(2a) - a_p w + lambda^{p-1} w^p
class SupersolutionOperator {
 public:
  SupersolutionOperator(const ModelParams& params, const Grid& eta_grid, double inner_fraction = 0.8);
  SupersolutionReport evaluate(double lambda) const;
  Field field(double lambda) const;

 private:
  ModelParams params_;
  Grid grid_;
  Field w_, bracket_;
  std::vector<char> inner_;
};

SupersolutionReport supersolution_check_w(double lambda, const ModelParams& params,
                                          const Grid& eta_grid, double inner_fraction = 0.8);

struct ThresholdReport {
  bool found = false;
  double lambda_hat = NAN;
  int iterations = 0;
  double min_at_small = 0.0;  // min at lambda = 1e-6
  std::vector<double> lambdas;
  std::vector<double> minima;
  bool monotone = true;
};

ThresholdReport find_barrier_threshold(const ModelParams& params, const Grid& eta_grid,
                                       double rel_tol = 1e-8, double inner_fraction = 0.8);

}  // namespace fracheat
