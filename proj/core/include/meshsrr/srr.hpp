#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "meshsrr/flow.hpp"
#include "meshsrr/flow_field.hpp"
#include "meshsrr/grid_image.hpp"
#include "meshsrr/kernel.hpp"
#include "meshsrr/mesh.hpp"
#include "meshsrr/resample.hpp"

namespace meshsrr {

struct SrrConfig {
  double mu = 0.01;
  std::size_t k_iters = 100;
  double alpha = 1.0;
  std::size_t width = 200;
  std::size_t height = 200;
  Kernel kernel = Kernel::identity();

  void validate() const;  // throws ConfigError
};

struct SrrState {
  GridImage x_hat;
  std::size_t frame_index = 0;
  double last_cost = 0.0;
};

// Per-step diagnostics: cost before the first correction and after each of
// the K iterations (K + 1 entries).
struct SrrStepTrace {
  std::vector<double> cost;
};

// x_hat starts at the first upsampled observation.
SrrState srr_init(const GridImage& y_up0, const SrrConfig& cfg);

// ||y_up - H_D H_B x||^2 over assigned pixels + alpha ||S x||^2
double srr_cost(const GridImage& x, const GridImage& y_up, const PixelAssignment& assignment,
                const Kernel& kernel, double alpha);

// Gradient of srr_cost: 2 [H_B^T H_D (H_D H_B x - y_up) + alpha S^T S x].
GridImage srr_gradient(const GridImage& x, const GridImage& y_up,
                       const PixelAssignment& assignment, const Kernel& kernel, double alpha);

/// One LMS frame update: predict x~ = warp(x_hat, flow) with OUTSIDE pixels
/// zeroed, then K iterations of
///   x <- x - mu [H_B^T H_D (H_D H_B x - y_up) + alpha S^T S x]
/// each followed by zeroing OUTSIDE pixels.
///
/// Throws NumericalError on a non-finite iterate or when the cost exceeds
/// ten times its value at the start of the step.
SrrState srr_step(const SrrState& state, const GridImage& y_up, const FlowField& flow,
                  const PixelAssignment& assignment, const SrrConfig& cfg,
                  SrrStepTrace* trace = nullptr);

// Largest eigenvalue of H_B^T H_D H_B + alpha S^T S by power iteration.
// Descent is guaranteed when mu times this value is below one.
double estimate_lipschitz(const PixelAssignment& assignment, const Kernel& kernel, double alpha,
                          std::size_t iterations = 30);

struct SequenceTrace {
  std::vector<SrrStepTrace> steps;
  std::vector<FlowField> flows;
};

/// Folds srr_step over IHR observations. flows[t] must register frame t-1
/// to frame t (warp_image(x_{t-1}, flows[t]) ~ x_t); flows[0] is ignored and
/// the first frame is corrected with zero flow.
std::vector<GridImage> run_sequence_upsampled(const std::vector<GridImage>& y_up,
                                              const std::vector<FlowField>& flows,
                                              const PixelAssignment& assignment,
                                              const SrrConfig& cfg,
                                              SequenceTrace* trace = nullptr);

// Estimates frame-to-frame flows on the IHR images with Horn-Schunck:
// flows[t] = horn_schunck(y_up[t], y_up[t-1]) and flows[0] is zero.
std::vector<FlowField> estimate_sequence_flows(const std::vector<GridImage>& y_up,
                                               const FlowParams& params,
                                               Warnings* warnings = nullptr);

// Full pipeline from FEM observations: upsample, register, reconstruct.
std::vector<GridImage> run_sequence(const std::vector<FemImage>& observations,
                                    const PixelAssignment& assignment, const SrrConfig& cfg,
                                    const FlowParams& flow_params, SequenceTrace* trace = nullptr);

}  // namespace meshsrr
