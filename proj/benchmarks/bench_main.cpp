#include <benchmark/benchmark.h>

#include <fracheat/evolve.hpp>
#include <fracheat/kernel.hpp>
#include <fracheat/selfsim.hpp>
#include <fracheat/spectral.hpp>

using namespace fracheat;

static void BM_HeatStep(benchmark::State& st) {
  const int dim = static_cast<int>(st.range(0));
  const Grid g = dim == 1 ? build_grid(1, 200, 4096) : build_grid(2, 60, 512);
  SpectralOps ops(g);
  Field f(g, 1.0);
  f.values[g.center_offset()] = 2.0;
  for (auto _ : st) {
    ops.apply_heat(f, 1e-3, 0.5);
    benchmark::DoNotOptimize(f.values.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_HeatStep)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_StrangStep(benchmark::State& st) {
  const int dim = static_cast<int>(st.range(0));
  const ModelParams P{0.5, 0.0, 1.4, dim};
  const Grid g = dim == 1 ? build_grid(1, 200, 4096) : build_grid(2, 60, 512);
  StepperConfig sc;
  sc.params = P;
  Stepper stepper(g, sc);
  double t = dim == 1 ? 0.1 : 0.3;
  Field f = dirac_initial(g, 10.0, t, P);
  for (auto _ : st) {
    stepper.step(f, t, t + 1e-3);
    t += 1e-3;
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_StrangStep)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

static void BM_KernelValue(benchmark::State& st) {
  const double r = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernel_value(0.75, 1, r).value);
}
BENCHMARK(BM_KernelValue)->Arg(0)->Arg(5)->Arg(50)->Unit(benchmark::kMicrosecond);

static void BM_SelfsimResidual(benchmark::State& st) {
  const ModelParams P{0.5, 0.0, 1.4, 2};
  Profile prof;
  prof.params = P;
  prof.v = Field(build_grid(2, 60, 512), flat_profile_value(P));
  prof.v.time = 1.0;
  for (auto _ : st) benchmark::DoNotOptimize(selfsim_residual(prof).normalized);
}
BENCHMARK(BM_SelfsimResidual)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
