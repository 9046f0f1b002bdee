#include "meshsrr/experiment.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>

#include "meshsrr/flow_field.hpp"
#include "meshsrr/image_io.hpp"
#include "meshsrr/mesh_io.hpp"
#include "meshsrr/phantoms.hpp"
#include "meshsrr/resample.hpp"

namespace meshsrr {

namespace fs = std::filesystem;

namespace {

MetricsReport score(const std::vector<GridImage>& truth, const std::vector<GridImage>& frames,
                    std::string_view variant, Warnings& warnings) {
  MetricsReport report;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    Warnings local;
    try {
      report.frames.push_back(compare_images(truth[t], frames[t], &local));
    } catch (const std::invalid_argument&) {
      // Hausdorff is undefined for an empty mask; a blank estimate means the
      // reconstruction collapsed.
      throw NumericalError(
          fmt::format("{}: frame {} has no inclusion above threshold, cannot score it", variant, t));
    }
    for (auto& m : local.messages) warnings.add(fmt::format("{} frame {}: {}", variant, t, m));
  }
  return report;
}

VariantResult reconstruct(std::string name, const std::vector<GridImage>& y_up,
                          std::vector<FlowField> flows, const PixelAssignment& assignment,
                          const SrrConfig& srr, const std::vector<GridImage>& truth,
                          Warnings& warnings) {
  VariantResult v;
  v.name = std::move(name);
  v.frames = run_sequence_upsampled(y_up, flows, assignment, srr, &v.trace);
  v.metrics = score(truth, v.frames, v.name, warnings);
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

std::string frame_name(std::size_t t, std::string_view ext) {
  return fmt::format("frame_{:03}.{}", t, ext);
}

void write_frames(const fs::path& dir, const std::vector<GridImage>& frames) {
  fs::create_directories(dir);
  for (std::size_t t = 0; t < frames.size(); ++t) save_grid_image(dir / frame_name(t, "pgm"), frames[t]);
}

void write_artifacts(const fs::path& dir, const ExperimentConfig& cfg, const FemMesh& mesh,
                     const std::vector<FemImage>& observations, const ExperimentResult& r) {
  fs::create_directories(dir);
  write_text(dir / "config.txt", format_config(cfg));
  save_mesh(dir / "mesh.femesh", mesh);

  fs::create_directories(dir / "lr");
  for (std::size_t t = 0; t < observations.size(); ++t) {
    save_fem_image(dir / "lr" / frame_name(t, "femvals"), observations[t]);
  }
  write_text(dir / "metrics_lr.csv", r.lr_metrics.to_csv());

  std::vector<const VariantResult*> variants{&r.estimated};
  if (r.known) variants.push_back(&*r.known);
  for (const VariantResult* v : variants) {
    write_text(dir / fmt::format("metrics_{}.csv", v->name), v->metrics.to_csv());
    fs::create_directories(dir / v->name / "flows");
    for (std::size_t t = 1; t < v->trace.flows.size(); ++t) {
      save_flow(dir / v->name / "flows" / frame_name(t, "flow"), v->trace.flows[t]);
    }
  }
  write_text(dir / "summary.csv", summary_csv(r));

  if (cfg.write_images) {
    write_frames(dir / "hr", r.hr);
    write_frames(dir / "lr", r.lr_up);
    for (const VariantResult* v : variants) write_frames(dir / v->name, v->frames);
  }
}

void publish(const ExperimentConfig& cfg, const FemMesh& mesh,
             const std::vector<FemImage>& observations, const ExperimentResult& r) {
  fs::path target = cfg.output_dir;
  fs::path partial = target;
  partial += ".partial";
  try {
    fs::remove_all(partial);
    write_artifacts(partial, cfg, mesh, observations, r);
    fs::remove_all(target);
    fs::rename(partial, target);
  } catch (const fs::filesystem_error& err) {
    throw IoError(fmt::format("writing '{}': {}", target.string(), err.what()));
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_artifacts_flag) {
  cfg.validate();
  const std::size_t n = cfg.grid;
  const SrrConfig srr = cfg.srr_config();
  auto mesh = std::make_shared<const FemMesh>(disc_mesh(cfg.mesh));
  const PixelAssignment assignment = build_pixel_assignment(mesh, n, n);

  ExperimentResult r;
  DegradeSpec degrade_spec{mesh, srr.kernel, cfg.snr_db, cfg.noise_seed};
  std::vector<FemImage> observations;
  for (std::size_t t = 0; t < cfg.scene.frames; ++t) {
    r.hr.push_back(difference_image(render_frame(cfg.scene, t, n, n), cfg.scene.background));
    Warnings local;
    observations.push_back(degrade(r.hr.back(), degrade_spec, assignment, t, &local));
    for (auto& m : local.messages) r.warnings.add(fmt::format("degrade frame {}: {}", t, m));
    r.lr_up.push_back(upsample(observations.back(), assignment));
  }
  r.lr_metrics = score(r.hr, r.lr_up, "lr", r.warnings);
  r.lipschitz = estimate_lipschitz(assignment, srr.kernel, srr.alpha);
  if (cfg.mu * r.lipschitz >= 1.0) {
    r.warnings.add(fmt::format("mu * L = {:.3f} >= 1: monotone descent is not guaranteed",
                               cfg.mu * r.lipschitz));
  }

  auto estimated_flows = estimate_sequence_flows(r.lr_up, cfg.flow, &r.warnings);
  r.estimated = reconstruct("srr_estimated", r.lr_up, std::move(estimated_flows), assignment, srr,
                            r.hr, r.warnings);

  if (cfg.known_motion) {
    // the T-shape motion is analytic; the lung is registered on the clean HR frames
    std::vector<FlowField> known_flows = cfg.scene.kind == SceneKind::TShape
                                             ? tshape_true_flows(cfg.scene, n, n)
                                             : estimate_sequence_flows(r.hr, cfg.flow, &r.warnings);
    r.known = reconstruct("srr_known", r.lr_up, std::move(known_flows), assignment, srr, r.hr,
                          r.warnings);
  }

  if (write_artifacts_flag) publish(cfg, *mesh, observations, r);
  return r;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out = "variant,overlap,hausdorff,masd\n";
  auto row = [&out](std::string_view name, const MetricsReport& m) {
    FrameMetrics a = m.average();
    out += fmt::format("{},{:.9f},{:.9f},{:.9f}\n", name, a.overlap, a.hausdorff, a.masd);
  };
  row("lr", result.lr_metrics);
  if (result.known) row("srr_known", result.known->metrics);
  row("srr_estimated", result.estimated.metrics);
  return out;
}

bool descent_holds(const SequenceTrace& trace, double rel_tol) {
  for (const SrrStepTrace& step : trace.steps) {
    for (std::size_t k = 1; k < step.cost.size(); ++k) {
      if (step.cost[k] > step.cost[k - 1] * (1.0 + rel_tol)) return false;
    }
  }
  return true;
}

}  // namespace meshsrr
