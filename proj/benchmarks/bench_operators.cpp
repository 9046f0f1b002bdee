#include <memory>

#include <benchmark/benchmark.h>

#include "meshsrr/kernel.hpp"
#include "meshsrr/operators.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/resample.hpp"

using namespace meshsrr;

namespace {

GridImage test_image(std::size_t n) {
  SceneSpec spec;
  spec.kind = SceneKind::Lung;
  return difference_image(render_lung(spec, 0, n, n), spec.background);
}

}  // namespace

// Separable Gaussian at the auto-scaled size for the grid.
static void BM_BlurSeparable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Kernel k = gaussian_kernel(nearest_odd(60 * n / 200), 20.0 * static_cast<double>(n) / 200.0);
  GridImage img = test_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_neumann(img, k));
}
BENCHMARK(BM_BlurSeparable)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// Same mask without its 1-D factor, convolved directly.
static void BM_BlurDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Kernel g = gaussian_kernel(nearest_odd(60 * n / 200), 20.0 * static_cast<double>(n) / 200.0);
  Kernel k = Kernel::from_taps(g.size(), {g.taps().begin(), g.taps().end()});
  GridImage img = test_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_neumann(img, k));
}
BENCHMARK(BM_BlurDirect)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PixelAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto mesh = std::make_shared<const FemMesh>(disc_mesh(MeshDensity::Fine));
  for (auto _ : state) benchmark::DoNotOptimize(build_pixel_assignment(mesh, n, n));
}
BENCHMARK(BM_PixelAssignment)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_AveragingProjection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto mesh = std::make_shared<const FemMesh>(disc_mesh(MeshDensity::Fine));
  PixelAssignment asg = build_pixel_assignment(mesh, n, n);
  GridImage img = test_image(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply_hd(img, asg));
}
BENCHMARK(BM_AveragingProjection)->Arg(200)->Unit(benchmark::kMicrosecond);

static void BM_Warp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  GridImage img = test_image(n);
  FlowField f = FlowField::constant(n, n, 1.3, -0.7);
  for (auto _ : state) benchmark::DoNotOptimize(warp_image(img, f));
}
BENCHMARK(BM_Warp)->Arg(200)->Unit(benchmark::kMicrosecond);
