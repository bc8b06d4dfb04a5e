#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fracheat {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kRegimeEps = 1e-12;

struct ModelParams {
  double alpha = 0.5;
  double beta = 0.0;
  double p = 1.4;
  int dim = 2;

  void validate() const;
  double p_star() const;
  double p_dstar() const;
  // (1+beta)/(p-1), the similarity exponent a.
  double decay_exponent() const;
};

struct CriticalExponents {
  double p_star;
  double p_dstar;
};

CriticalExponents critical_exponents(double alpha, double beta, int dim);

enum class Regime { Diffusive, FlatAbsorption, Borderline, VerySingular, Supercritical };

const char* regime_name(Regime r);
Regime classify_regime(const ModelParams& params);

double maximal_flat_solution(const ModelParams& params, double t);
double flat_profile_value(const ModelParams& params);

struct PowerLaw {
  double beta;
  double p;
};

struct GeneralAbsorption {
  double beta;
  std::function<double(double)> g;
};

class AbsorptionSpec {
 public:
  static AbsorptionSpec power_law(double beta, double p);
  // g sampled on increasing nodes; linear interpolation, power-law extrapolation.
  static AbsorptionSpec sampled(double beta, std::vector<double> r, std::vector<double> g);
  static AbsorptionSpec callable(double beta, std::function<double(double)> g);

  double beta() const;
  double g(double r) const;
  double h(double t, double r) const;
  bool is_power_law() const { return std::holds_alternative<PowerLaw>(kind_); }

 private:
  std::variant<PowerLaw, GeneralAbsorption> kind_;
};

enum class Verdict { Converges, Diverges, Inconclusive };

const char* verdict_name(Verdict v);

struct SubcriticalReport {
  Verdict verdict;
  double partial_integral;
  double quadrature_error;
  double tail_log_slope;
  double tail_bound;
};

SubcriticalReport check_subcritical(const AbsorptionSpec& absorption, const ModelParams& params,
                                    double t_max, double tolerance);

}  // namespace fracheat
