#include <doctest.h>

#include <cmath>

#include <fracheat/params.hpp>

using namespace fracheat;

TEST_CASE("critical exponents") {
  // 1 + 2a(1+b)/N and 1 + 2a(1+b)/(N+2a) by hand
  auto ce = critical_exponents(0.5, 0.0, 2);
  CHECK(ce.p_star == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(ce.p_dstar == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  ce = critical_exponents(0.5, 0.0, 1);
  CHECK(ce.p_star == doctest::Approx(2.0));
  CHECK(ce.p_dstar == doctest::Approx(1.5));
  ce = critical_exponents(0.75, -0.5, 1);
  CHECK(ce.p_star == doctest::Approx(1.75));
  CHECK(ce.p_dstar == doctest::Approx(1.0 + 0.75 / 2.5));
}

TEST_CASE("regime classification") {
  CHECK(classify_regime({0.5, 0.0, 0.7, 1}) == Regime::Diffusive);
  CHECK(classify_regime({0.5, 0.0, 1.2, 2}) == Regime::FlatAbsorption);
  CHECK(classify_regime({0.5, 0.0, 4.0 / 3.0, 2}) == Regime::Borderline);
  CHECK(classify_regime({0.5, 0.0, 1.4, 2}) == Regime::VerySingular);
  CHECK(classify_regime({0.5, 0.0, 1.6, 2}) == Regime::Supercritical);
}

TEST_CASE("flat solution") {
  const ModelParams P{0.5, 0.0, 1.2, 2};
  CHECK(flat_profile_value(P) == doctest::Approx(3125.0).epsilon(1e-12));
  CHECK(P.decay_exponent() == doctest::Approx(5.0));
  for (double beta : {-0.5, 0.0, 1.0}) {
    const ModelParams F{0.5, beta, 1.4, 1};
    for (double t : {0.1, 1.0, 3.0}) {
      const double h = 1e-5 * t;
      const double d = (maximal_flat_solution(F, t + h) - maximal_flat_solution(F, t - h)) / (2 * h);
      const double y = maximal_flat_solution(F, t);
      CHECK(d + std::pow(t, beta) * std::pow(y, F.p) == doctest::Approx(0.0).scale(std::abs(d)).epsilon(1e-7));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams({0.0, 0.0, 1.4, 1}).validate(), DomainError);
  CHECK_THROWS_AS(ModelParams({1.5, 0.0, 1.4, 1}).validate(), DomainError);
  CHECK_THROWS_AS(ModelParams({0.5, -1.0, 1.4, 1}).validate(), DomainError);
  CHECK_THROWS_AS(ModelParams({0.5, 0.0, 1.4, 3}).validate(), DomainError);
  CHECK_NOTHROW(ModelParams({0.5, 0.0, 1.4, 2}).validate());
}

TEST_CASE("subcritical condition") {
  const ModelParams P{0.5, 0.0, 1.4, 1};  // p* = 2
  auto below = check_subcritical(AbsorptionSpec::power_law(0.0, 1.5), P, 1e6, 1e-6);
  CHECK(below.verdict == Verdict::Converges);
  auto above = check_subcritical(AbsorptionSpec::power_law(0.0, 2.5), P, 1e6, 1e-6);
  CHECK(above.verdict == Verdict::Diverges);
  auto spec = AbsorptionSpec::sampled(0.0, {0.0, 1.0, 10.0}, {0.0, 1.0, 10.0});
  CHECK(spec.g(5.0) == doctest::Approx(5.0));
  CHECK(spec.h(4.0, 1.0) == doctest::Approx(1.0));
}
