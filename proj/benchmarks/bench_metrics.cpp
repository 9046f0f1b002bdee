#include <benchmark/benchmark.h>

#include "meshsrr/metrics.hpp"
#include "meshsrr/phantoms.hpp"

using namespace meshsrr;

static void BM_CompareImages(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SceneSpec spec;
  spec.kind = SceneKind::Lung;
  spec.frames = 4;
  GridImage a = difference_image(render_lung(spec, 0, n, n), spec.background);
  GridImage b = difference_image(render_lung(spec, 2, n, n), spec.background);
  for (auto _ : state) benchmark::DoNotOptimize(compare_images(a, b));
}
BENCHMARK(BM_CompareImages)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);
