#include <benchmark/benchmark.h>

#include "meshsrr/flow.hpp"
#include "meshsrr/phantoms.hpp"

using namespace meshsrr;

static void BM_HornSchunck(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SceneSpec spec;
  spec.frames = 2;
  GridImage a = difference_image(render_tshape(spec, 0, n, n), spec.background);
  GridImage b = difference_image(render_tshape(spec, 1, n, n), spec.background);
  HornSchunckReport report;
  report.record_energy = false;
  for (auto _ : state) benchmark::DoNotOptimize(horn_schunck(b, a, FlowParams{}, &report));
}
BENCHMARK(BM_HornSchunck)->Arg(64)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
