#include <doctest.h>

#include <cmath>

#include <fracheat/continuation.hpp>
#include <fracheat/kernel.hpp>
#include <fracheat/selfsim.hpp>

using namespace fracheat;

TEST_CASE("rescaled flat solution is the flat profile") {
  const ModelParams P{0.5, 0.0, 1.4, 2};
  const Grid g = build_grid(2, 20.0, 64);
  Field u(g, maximal_flat_solution(P, 0.5));
  u.time = 0.5;
  const auto prof = rescale_profile(u, P);
  CHECK(prof.v.max() == doctest::Approx(flat_profile_value(P)).epsilon(1e-12));
  CHECK(flatness_gap(prof) < 1e-12);
  CHECK(selfsim_residual(prof).normalized < 1e-12);
}

TEST_CASE("kernel profile solves the linear profile equation") {
  const int dim = 1;
  const double alpha = 0.5;
  const Grid g = build_grid(dim, 3200.0, 32768);
  Profile prof;
  prof.params = {alpha, 0.0, 2.0, dim};
  prof.v = periodized_kernel(g, 1.0, alpha);
  prof.v.time = 1.0;
  const auto r = selfsim_residual(prof, 0.1, false);
  CHECK(r.normalized < 1e-6);
}

TEST_CASE("tail fit of an exact power law") {
  const Grid g = build_grid(1, 100.0, 1024);
  Field v(g);
  for (int i = 0; i < g.points; ++i) v.at(i) = std::pow(std::max(std::abs(g.coord(i)), 0.1), -2.5);
  const auto fit = tail_fit(v, 4.0, 30.0);
  CHECK(fit.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK_THROWS_AS(tail_fit(v, 4.0, 8.0), DomainError);
  CHECK_THROWS_AS(tail_fit(v, 4.0, 48.0), DomainError);
}

TEST_CASE("barrier shape and threshold") {
  const BarrierW w{2.0, 2, 0.5};
  CHECK(w(0.0) == doctest::Approx(2.0));
  CHECK(w_shape(3.0, 2, 0.5) == doctest::Approx(std::log(std::exp(1.0) + 9.0) / (1.0 + 27.0)));
  const ModelParams P{0.5, 0.0, 1.4, 2};
  const auto th = find_barrier_threshold(P, build_grid(2, 30.0, 128));
  CHECK(th.found);
  CHECK(th.monotone);
  CHECK(th.min_at_small < 0.0);
  const SupersolutionOperator op(P, build_grid(2, 30.0, 128));
  CHECK(op.evaluate(2.0 * th.lambda_hat).min_value >= 0.0);
}

TEST_CASE("trigonometric resampling is exact for band-limited data") {
  const Grid g = build_grid(1, 10.0, 64);
  Field f(g);
  for (int i = 0; i < g.points; ++i) f.at(i) = std::cos(2 * M_PI * 2 * g.coord(i) / 10.0);
  const Grid h = build_grid(1, 5.0, 64);
  const Field r = resample_trig(f, h, 1.0);
  for (int i = 0; i < h.points; ++i) CHECK(r.at(i) == doctest::Approx(std::cos(2 * M_PI * 2 * h.coord(i) / 10.0)).epsilon(1e-10));
}

TEST_CASE("continuation zoom and linear consistency") {
  const ModelParams P{0.5, 0.0, 1.4, 2};
  CHECK(continuation_exponent(P) == doctest::Approx(0.5));
  const double lam = zoom_for_doublings(P, 1.0);
  CHECK(std::pow(lam, continuation_exponent(P)) == doctest::Approx(2.0));

  ContinuationOptions co;
  co.params = P;
  co.grid = build_grid(2, 60.0, 256);
  co.K0 = 0.1;
  co.zoom = 2.0;
  co.cycles = 3;
  co.steps_per_cycle = 20;
  co.stepper.absorption_coeff = 0.0;
  const auto res = run_continuation(co);
  REQUIRE(res.K.size() == 3);
  CHECK(res.K[1] / res.K[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(res.at_one.back().center() == doctest::Approx(res.K.back() * kernel_center_value(0.5, 2)).epsilon(2e-3));
}

TEST_CASE("tail fit ignores the amplitude") {
  const Grid g = build_grid(2, 60.0, 256);
  const BarrierW w{1.0, 2, 0.5};
  Field v = w.sample(g);
  const auto a = tail_fit(v, 3.0, 20.0);
  for (double& x : v.values) x *= 37.5;
  const auto b = tail_fit(v, 3.0, 20.0);
  CHECK(std::abs(a.slope - b.slope) < 1e-12);
  CHECK(a.log_correction_score > 1.0);
}

TEST_CASE("w tail: slope just above -(N+2 alpha)") {
  // w ~ 2 ln(s) s^{-3}; the log shifts the local slope by 2/ln(s^2)
  const BarrierW w{1.0, 2, 0.5};
  const Field v = w.sample(build_grid(1, 1e9, 1 << 16));
  const auto fit = tail_fit(v, 1e7, 4e8);
  CHECK(fit.slope > -3.0);
  CHECK(fit.slope < -2.9);
  CHECK(fit.log_correction_score > 1.0);
}
