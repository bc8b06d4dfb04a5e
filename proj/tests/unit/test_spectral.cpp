#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <fracheat/spectral.hpp>

using namespace fracheat;
using std::numbers::pi;

namespace {

Field cosine(const Grid& g, int mode) {
  Field f(g);
  const double k = 2 * pi * mode / g.extent;
  for (int i = 0; i < g.points; ++i)
    for (int j = 0; j < (g.dim == 2 ? g.points : 1); ++j) f.at(i, j) = std::cos(k * g.coord(i));
  return f;
}

}  // namespace

TEST_CASE("fractional laplacian of a Fourier mode") {
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, 10.0, 64);
    const Field f = cosine(g, 3);
    const double k = 2 * pi * 3 / 10.0;
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
      const Field l = frac_laplacian(f, alpha);
      double err = 0.0;
      for (std::size_t n = 0; n < f.values.size(); ++n)
        err = std::max(err, std::abs(l.values[n] - std::pow(k, 2 * alpha) * f.values[n]));
      CHECK(err < 1e-11);
      const Field h = heat_semigroup_step(f, 0.3, alpha);
      err = 0.0;
      for (std::size_t n = 0; n < f.values.size(); ++n)
        err = std::max(err, std::abs(h.values[n] - std::exp(-0.3 * std::pow(k, 2 * alpha)) * f.values[n]));
      CHECK(err < 1e-13);
    }
  }
}

TEST_CASE("heat step conserves mass and composes") {
  const Grid g = build_grid(2, 20.0, 64);
  Field f(g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double& v : f.values) v = U(rng);
  SpectralOps ops(g);
  const double m0 = f.mass();
  Field a = f, b = f;
  ops.apply_heat(a, 0.2, 0.6);
  ops.apply_heat(a, 0.5, 0.6);
  ops.apply_heat(b, 0.7, 0.6);
  CHECK(a.mass() == doctest::Approx(m0).epsilon(1e-13));
  for (std::size_t n = 0; n < a.values.size(); ++n) CHECK(a.values[n] == doctest::Approx(b.values[n]).epsilon(1e-12));
}

TEST_CASE("x . grad of a gaussian") {
  const Grid g = build_grid(1, 40.0, 512);
  Field f(g);
  for (int i = 0; i < g.points; ++i) f.at(i) = std::exp(-g.coord(i) * g.coord(i));
  const Field d = spectral_gradient_dot_x(f);
  double err = 0.0;
  for (int i = 0; i < g.points; ++i) {
    const double x = g.coord(i);
    err = std::max(err, std::abs(d.at(i) + 2 * x * x * std::exp(-x * x)));
  }
  CHECK(err < 1e-10);
  SpectralOps ops(g);
  CHECK(ops.nyquist_fraction(f) < 1e-20);
}

TEST_CASE("grid geometry") {
  const Grid g = build_grid(2, 32.0, 64);
  CHECK(g.spacing() == 0.5);
  CHECK(g.cell_volume() == 0.25);
  CHECK(g.size() == 4096);
  CHECK(g.coord(g.center_index()) == 0.0);
  Field f(g, 1.0);
  CHECK(f.mass() == doctest::Approx(1024.0));
  CHECK(f.radius(g.center_offset()) == 0.0);
  CHECK_THROWS(build_grid(1, 1.0, 3));
}
