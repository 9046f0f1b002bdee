#include <memory>

#include <benchmark/benchmark.h>

#include "meshsrr/config.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/srr.hpp"

using namespace meshsrr;

// One frame update (K = 100 corrections) on the ex2b setup.
static void BM_SrrStep(benchmark::State& state) {
  ExperimentConfig cfg = preset_config("ex2b");
  cfg.grid = static_cast<std::size_t>(state.range(0));
  SrrConfig srr = cfg.srr_config();
  auto mesh = std::make_shared<const FemMesh>(disc_mesh(cfg.mesh));
  PixelAssignment asg = build_pixel_assignment(mesh, cfg.grid, cfg.grid);
  GridImage x = difference_image(render_frame(cfg.scene, 0, cfg.grid, cfg.grid), cfg.scene.background);
  GridImage y = upsample(degrade(x, {mesh, srr.kernel, cfg.snr_db, cfg.noise_seed}, asg, 0), asg);
  SrrState s0 = srr_init(y, srr);
  FlowField zero(cfg.grid, cfg.grid);
  for (auto _ : state) benchmark::DoNotOptimize(srr_step(s0, y, zero, asg, srr));
}
BENCHMARK(BM_SrrStep)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Lipschitz(benchmark::State& state) {
  ExperimentConfig cfg = preset_config("ex2b");
  cfg.grid = 100;
  auto mesh = std::make_shared<const FemMesh>(disc_mesh(cfg.mesh));
  PixelAssignment asg = build_pixel_assignment(mesh, cfg.grid, cfg.grid);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lipschitz(asg, cfg.kernel(), cfg.alpha));
}
BENCHMARK(BM_Lipschitz)->Unit(benchmark::kMillisecond);
