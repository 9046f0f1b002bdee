#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meshsrr/config.hpp"
#include "meshsrr/error.hpp"
#include "meshsrr/grid_image.hpp"
#include "meshsrr/metrics.hpp"
#include "meshsrr/srr.hpp"

namespace meshsrr {

struct VariantResult {
  std::string name;
  std::vector<GridImage> frames;
  MetricsReport metrics;
  SequenceTrace trace;
};

struct ExperimentResult {
  std::vector<GridImage> hr;     // ground truth conductivity change
  std::vector<GridImage> lr_up;  // upsampled observations
  MetricsReport lr_metrics;
  std::optional<VariantResult> known;
  VariantResult estimated;
  double lipschitz = 0.0;  // of the correction operator, for the mu bound
  Warnings warnings;
};

/// Renders the scene, degrades every frame onto the mesh, upsamples, registers,
/// reconstructs and scores LR and SRR sequences against ground truth.
///
/// Images are conductivity changes relative to the homogeneous background.
/// When write_artifacts is set, outputs go to `<output_dir>.partial` and are
/// renamed to output_dir only once everything succeeded; a failed run leaves
/// the `.partial` directory behind.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_artifacts = true);

// "variant,overlap,hausdorff,masd" with rows lr, srr_known, srr_estimated.
std::string summary_csv(const ExperimentResult& result);

// True when no cost in any step rises above its predecessor by more than
// `rel_tol` relative.
bool descent_holds(const SequenceTrace& trace, double rel_tol = 1e-12);

}  // namespace meshsrr
