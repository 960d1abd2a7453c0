#include <benchmark/benchmark.h>

#include "acsplit/problems.hpp"
#include "acsplit/solver.hpp"
#include "acsplit/spectral.hpp"

using namespace acsplit;

static void BM_CosineTransform3D(benchmark::State& state) {
  const GridSpec g = GridSpec::cube(static_cast<std::size_t>(state.range(0)), 1.0);
  const Field f = uniform_noise(g, 1);
  const CosineTransform t(g);
  std::vector<double> buf(f.values().begin(), f.values().end());
  for (auto _ : state) {
    t.forward(buf, buf);
    t.inverse(buf, buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.total_cells()));
}
BENCHMARK(BM_CosineTransform3D)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_CosineTransform1D(benchmark::State& state) {
  const GridSpec g = GridSpec::line(static_cast<std::size_t>(state.range(0)), 4.0);
  const Field f = uniform_noise(g, 1);
  const CosineTransform t(g);
  std::vector<double> buf(f.values().begin(), f.values().end());
  for (auto _ : state) {
    t.forward(buf, buf);
    t.inverse(buf, buf);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(BM_CosineTransform1D)->Arg(128)->Arg(1024);

static void BM_SchemeStep(benchmark::State& state, const char* scheme) {
  SpinodalSpec spec;
  spec.cells = static_cast<std::size_t>(state.range(0));
  const Field f0 = spinodal_initial(spec);
  Stepper stepper(f0.grid(), named_scheme(SchemeId::parse(scheme)), ModelParams(spec.epsilon), CutoffPolicy());
  std::vector<double> v(f0.values().begin(), f0.values().end());
  for (auto _ : state) {
    stepper.step(v, 1e-6);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK_CAPTURE(BM_SchemeStep, S1, "S1")->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_SchemeStep, S2, "S2")->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_SchemeStep, S3X, "S3X")->Arg(32)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_SchemeStep, S4V, "S4V")->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
