#include <doctest.h>

#include <cmath>

#include <fracheat/evolve.hpp>

using namespace fracheat;

namespace {

double rk4(double y, double ta, double tb, double beta, double p, int n) {
  auto f = [&](double t, double v) { return -std::pow(t, beta) * std::pow(std::max(v, 0.0), p); };
  const double h = (tb - ta) / n;
  for (int i = 0; i < n; ++i) {
    const double t = ta + i * h;
    const double k1 = f(t, y), k2 = f(t + h / 2, y + h / 2 * k1), k3 = f(t + h / 2, y + h / 2 * k2), k4 = f(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

}  // namespace

TEST_CASE("exact absorption flow") {
  for (double p : {0.5, 1.0, 1.4, 2.0})
    for (double beta : {-0.5, 0.0, 1.0})
      CHECK(absorb_scalar(2.0, 0.3, 1.1, beta, p) == doctest::Approx(rk4(2.0, 0.3, 1.1, beta, p, 20000)).epsilon(1e-10));
  // p < 1 reaches zero in finite time: y^{1-p}/(1-p) = 2 for y = 1, p = 0.5
  CHECK(absorb_scalar(1.0, 0.0, 3.0, 0.0, 0.5) == 0.0);
  CHECK(absorb_scalar(1.0, 0.3, 1.1, 0.0, 1.4, 0.0) == 1.0);
}

TEST_CASE("graded mesh") {
  const auto m = TimeMesh::graded(0.1, 1.0, 10, 2.0);
  CHECK(m.nodes.size() == 11);
  CHECK(m.nodes[1] - m.nodes[0] < m.nodes[10] - m.nodes[9]);
  CHECK(TimeMesh::default_gamma(-0.5) == doctest::Approx(4.0));
  const auto b = m.with_breakpoints({0.5, 1.0});
  CHECK(b.index_of(0.5) > 0);
  CHECK(b.nodes.back() == 1.0);
  CHECK_THROWS_AS(m.index_of(0.123456), DomainError);
  CHECK_THROWS_AS(TimeMesh::graded(0.0, 1.0, 10, 1.0), DomainError);
}

TEST_CASE("flat data tracks the maximal flat solution") {
  const ModelParams P{0.5, -0.5, 1.4, 2};
  const Grid g = build_grid(2, 10.0, 64);
  Field u(g, maximal_flat_solution(P, 0.1));
  StepperConfig sc;
  sc.params = P;
  Stepper st(g, sc);
  const auto m = TimeMesh::graded(0.1, 1.0, 7, 2.0);
  for (std::size_t j = 0; j < m.steps(); ++j) st.step(u, m.nodes[j], m.nodes[j + 1]);
  CHECK(u.max() == doctest::Approx(maximal_flat_solution(P, 1.0)).epsilon(1e-12));
  CHECK(u.min() == doctest::Approx(maximal_flat_solution(P, 1.0)).epsilon(1e-12));
}

TEST_CASE("Strang splitting is second order") {
  const ModelParams P{0.5, 0.0, 1.4, 1};
  const Grid g = build_grid(1, 100.0, 1024);
  const Field init = dirac_initial(g, 1.0, 0.5, P);
  EvolveOptions eo;
  eo.stepper.params = P;
  std::vector<Field> fin;
  for (int K : {8, 16, 32}) fin.push_back(evolve(init, TimeMesh::graded(0.5, 1.0, K, 1.0), eo).snapshots.back());
  auto diff = [](const Field& a, const Field& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
  };
  CHECK(diff(fin[0], fin[1]) / diff(fin[1], fin[2]) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("linear evolution conserves mass") {
  const ModelParams P{0.75, 0.0, 2.0, 1};
  const Grid g = build_grid(1, 200.0, 4096);
  EvolveOptions eo;
  eo.stepper.params = P;
  eo.stepper.absorption_coeff = 0.0;
  const auto tr = evolve(dirac_initial(g, 3.0, 0.1, P, 0.0), TimeMesh::graded(0.1, 1.0, 20, 1.0), eo);
  CHECK(tr.diagnostics.back().mass == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(tr.snapshots.size() == 1);
}

TEST_CASE("absorption never adds mass and respects barriers") {
  const ModelParams P{0.5, 0.0, 1.2, 2};
  const Grid g = build_grid(2, 30.0, 256);
  EvolveOptions eo;
  eo.stepper.params = P;
  eo.snapshot_times = {0.5};
  const auto tr = evolve(dirac_initial(g, 50.0, 0.3, P), TimeMesh::graded(0.3, 1.0, 20, 1.0).with_breakpoints({0.5}), eo);
  for (std::size_t j = 1; j < tr.diagnostics.size(); ++j) CHECK(tr.diagnostics[j].mass <= tr.diagnostics[j - 1].mass);
  CHECK(barrier_check(tr, Barrier{BarrierKind::Flat}).margin <= 1e-12);
  CHECK(tr.snapshot_at(0.5).time == 0.5);
}

TEST_CASE("family is monotone in k") {
  const ModelParams P{0.5, 0.0, 1.4, 1};
  const Grid g = build_grid(1, 100.0, 1024);
  FamilyOptions fo;
  fo.workers = 2;
  const auto fr = dirac_family_run({1.0, 4.0, 16.0, 128.0}, P, g, TimeMesh::graded(0.2, 1.0, 20, 1.0), {0.5, 1.0}, fo);
  CHECK(fr.monotonicity.ok);
  CHECK(fr.members.size() == 4);
  CHECK(fr.members[0].checkpoints.size() == 2);
  CHECK(fr.saturation.size() == 3);
  CHECK_THROWS_AS(dirac_family_run({1.0, 4.0, 16.0, 128.0}, P, g, TimeMesh::graded(0.2, 1.0, 20, 1.0), {1.0, 0.5}, fo), DomainError);
}

TEST_CASE("negative data aborts") {
  const ModelParams P{0.5, 0.0, 1.4, 1};
  const Grid g = build_grid(1, 10.0, 64);
  Field u(g, 1.0);
  u.at(3) = -1.0;
  StepperConfig sc;
  sc.params = P;
  sc.order = SplitOrder::DiffusionOuter;
  Stepper st(g, sc);
  CHECK_THROWS_AS(st.step(u, 0.5, 0.6), NegativityAbort);
}

TEST_CASE("parallel_for rethrows in index order") {
  std::vector<int> hit(5, 0);
  parallel_for(5, 3, [&](std::size_t i) { hit[i] = 1; });
  CHECK(hit == std::vector<int>(5, 1));
  CHECK_THROWS_WITH(parallel_for(4, 2, [](std::size_t i) { if (i >= 1) throw std::runtime_error(std::to_string(i)); }), "1");
}
