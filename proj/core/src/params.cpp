#include "fracheat/params.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>

namespace fracheat {

namespace {

void check_alpha_beta(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(beta > -1.0)) throw DomainError("beta must exceed -1");
}

}  // namespace

void ModelParams::validate() const {
  check_alpha_beta(alpha, beta);
  if (!(p > 0.0)) throw DomainError("p must be positive");
  if (dim != 1 && dim != 2) throw DomainError("dim must be 1 or 2");
}

double ModelParams::p_star() const { return critical_exponents(alpha, beta, dim).p_star; }
double ModelParams::p_dstar() const { return critical_exponents(alpha, beta, dim).p_dstar; }

double ModelParams::decay_exponent() const {
  if (p == 1.0) throw DomainError("decay exponent undefined for p = 1");
  return (1.0 + beta) / (p - 1.0);
}

CriticalExponents critical_exponents(double alpha, double beta, int dim) {
  check_alpha_beta(alpha, beta);
  if (dim < 1) throw DomainError("dim must be at least 1");
  const double s = 2.0 * alpha * (1.0 + beta);
  return {1.0 + s / dim, 1.0 + s / (dim + 2.0 * alpha)};
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Diffusive: return "Diffusive";
    case Regime::FlatAbsorption: return "FlatAbsorption";
    case Regime::Borderline: return "Borderline";
    case Regime::VerySingular: return "VerySingular";
    case Regime::Supercritical: return "Supercritical";
  }
  return "?";
}

Regime classify_regime(const ModelParams& params) {
  params.validate();
  const auto [ps, pds] = critical_exponents(params.alpha, params.beta, params.dim);
  const double p = params.p;
  if (p <= 1.0) return Regime::Diffusive;
  if (std::abs(p - pds) <= kRegimeEps) return Regime::Borderline;
  if (p < pds) return Regime::FlatAbsorption;
  if (p < ps - kRegimeEps) return Regime::VerySingular;
  return Regime::Supercritical;
}

double flat_profile_value(const ModelParams& params) {
  if (!(params.p > 1.0)) throw DomainError("no maximal flat solution for p <= 1");
  if (!(params.beta > -1.0)) throw DomainError("beta must exceed -1");
  return std::pow((1.0 + params.beta) / (params.p - 1.0), 1.0 / (params.p - 1.0));
}

double maximal_flat_solution(const ModelParams& params, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double c = flat_profile_value(params);
  return c * std::pow(t, -(1.0 + params.beta) / (params.p - 1.0));
}

AbsorptionSpec AbsorptionSpec::power_law(double beta, double p) {
  if (!(beta > -1.0) || !(p > 0.0)) throw DomainError("invalid power-law absorption");
  AbsorptionSpec s;
  s.kind_ = PowerLaw{beta, p};
  return s;
}

AbsorptionSpec AbsorptionSpec::sampled(double beta, std::vector<double> r, std::vector<double> g) {
  if (r.size() != g.size() || r.size() < 2) throw DomainError("sampled g needs matching nodes");
  if (r.front() != 0.0 || g.front() != 0.0) throw DomainError("sampled g must start at g(0) = 0");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw DomainError("sample nodes must increase");
    if (g[i] < g[i - 1]) throw DomainError("g must be nondecreasing");
  }
  auto fn = [r = std::move(r), g = std::move(g)](double x) {
    x = std::abs(x);
    if (x >= r.back()) {
      const std::size_t n = r.size();
      if (g[n - 2] > 0.0 && r[n - 2] > 0.0) {
        const double s = std::log(g[n - 1] / g[n - 2]) / std::log(r[n - 1] / r[n - 2]);
        return g[n - 1] * std::pow(x / r[n - 1], s);
      }
      return g.back();
    }
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double w = (x - r[i]) / (r[i + 1] - r[i]);
    return (1.0 - w) * g[i] + w * g[i + 1];
  };
  return callable(beta, fn);
}

AbsorptionSpec AbsorptionSpec::callable(double beta, std::function<double(double)> g) {
  if (!(beta > -1.0)) throw DomainError("beta must exceed -1");
  if (g(0.0) != 0.0) throw DomainError("g(0) must vanish");
  AbsorptionSpec s;
  s.kind_ = GeneralAbsorption{beta, std::move(g)};
  return s;
}

double AbsorptionSpec::beta() const {
  return std::visit([](const auto& k) { return k.beta; }, kind_);
}

double AbsorptionSpec::g(double r) const {
  if (const auto* pl = std::get_if<PowerLaw>(&kind_)) return std::pow(std::abs(r), pl->p);
  return std::get<GeneralAbsorption>(kind_).g(r);
}

double AbsorptionSpec::h(double t, double r) const { return std::pow(t, beta()) * g(r); }

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converges: return "converges";
    case Verdict::Diverges: return "diverges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct IntegrandCtx {
  const AbsorptionSpec* a;
  double ps;
};

// s = e^u: g(s) s^{-1-p*} ds = g(e^u) e^{-p* u} du
double log_integrand(double u, void* raw) {
  const auto* c = static_cast<const IntegrandCtx*>(raw);
  return c->a->g(std::exp(u)) * std::exp(-c->ps * u);
}

double log_slope(const AbsorptionSpec& a, double ps, double s0, double s1, int n, bool loglog) {
  // least squares of ln phi against ln s (or ln ln s)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int i = 0; i < n; ++i) {
    const double s = s0 * std::pow(s1 / s0, static_cast<double>(i) / (n - 1));
    const double phi = a.g(s) * std::pow(s, -ps);
    if (!(phi > 0.0)) continue;
    const double x = loglog ? std::log(std::log(s)) : std::log(s);
    const double y = std::log(phi);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  if (m < 2) return -INFINITY;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

SubcriticalReport check_subcritical(const AbsorptionSpec& absorption, const ModelParams& params,
                                    double t_max, double tolerance) {
  params.validate();
  if (!(t_max >= 1e3)) throw DomainError("t_max must be at least 1e3");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  const double ps = params.p_star();

  gsl_set_error_handler_off();
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(2000), gsl_integration_workspace_free);
  IntegrandCtx ctx{&absorption, ps};
  gsl_function f{&log_integrand, &ctx};
  double value = 0.0, err = 0.0;
  gsl_integration_qag(&f, 0.0, std::log(t_max), 0.0, 1e-10, 2000, GSL_INTEG_GAUSS41, ws.get(),
                      &value, &err);

  SubcriticalReport rep{Verdict::Inconclusive, value, err, 0.0, INFINITY};
  // phi(s) = g(s) s^{-p*}; the integrand is phi(s)/s
  const double s0 = t_max / 10.0;
  const double sigma = log_slope(absorption, ps, s0, t_max, 33, false);
  rep.tail_log_slope = sigma + ps;
  const double phi_t = absorption.g(t_max) * std::pow(t_max, -ps);
  if (phi_t == 0.0 || sigma < -tolerance) {
    rep.verdict = Verdict::Converges;
    rep.tail_bound = phi_t == 0.0 ? 0.0 : phi_t / -sigma;
    return rep;
  }
  if (sigma > tolerance) {
    rep.verdict = Verdict::Diverges;
    return rep;
  }
  // phi ~ (ln s)^{-gamma}: tail ~ (ln T)^{1-gamma}/(gamma-1)
  const double gamma = -log_slope(absorption, ps, s0, t_max, 33, true);
  if (gamma > 1.0 + tolerance) {
    rep.verdict = Verdict::Converges;
    rep.tail_bound = phi_t * std::log(t_max) / (gamma - 1.0);
  } else if (gamma < 1.0 - tolerance) {
    rep.verdict = Verdict::Diverges;
  }
  return rep;
}

}  // namespace fracheat
