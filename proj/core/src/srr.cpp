#include "meshsrr/srr.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "meshsrr/operators.hpp"
#include "meshsrr/rng.hpp"

namespace meshsrr {

namespace {

constexpr double kDivergenceFactor = 10.0;

struct CostAndGradient {
  double cost;
  GridImage half_gradient;  // H_B^T H_D (H_D H_B x - y) + alpha S^T S x
};

CostAndGradient evaluate(const GridImage& x, const GridImage& y_up,
                         const PixelAssignment& assignment, const Kernel& kernel, double alpha) {
  GridImage residual = forward_observe(x, assignment, kernel);
  for (std::size_t p = 0; p < residual.size(); ++p) residual[p] -= y_up[p];
  // forward_observe is zero on OUTSIDE pixels; y_up must be ignored there
  double data = 0.0;
  for (std::size_t p = 0; p < residual.size(); ++p) {
    if (assignment.is_outside(p)) {
      residual[p] = 0.0;
    } else {
      data += residual[p] * residual[p];
    }
  }
  GridImage grad = adjoint_observe(residual, assignment, kernel);
  double reg = 0.0;
  if (alpha != 0.0) {
    GridImage sx = laplacian_apply(x);
    reg = squared_norm(sx);
    GridImage ssx = laplacian_apply(sx);
    for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += alpha * ssx[p];
  }
  return {data + alpha * reg, std::move(grad)};
}

void check_inputs(const GridImage& x, const GridImage& y_up, const PixelAssignment& assignment,
                  const char* what) {
  require_same_shape(x, y_up, what);
  if (x.width() != assignment.width() || x.height() != assignment.height()) {
    throw std::invalid_argument(fmt::format("{}: image does not match the pixel assignment", what));
  }
}

}  // namespace

void SrrConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError(fmt::format("srr mu must be positive, got {}", mu));
  if (k_iters < 1) throw ConfigError("srr k_iters must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError(fmt::format("srr alpha must be non-negative, got {}", alpha));
  }
  if (width < 3 || height < 3) throw ConfigError("srr grid must be at least 3x3");
  if (kernel.size() + 1 > 2 * std::min(width, height)) {
    throw ConfigError(fmt::format("srr kernel {} does not fit a {}x{} grid", kernel.size(), width, height));
  }
}

SrrState srr_init(const GridImage& y_up0, const SrrConfig& cfg) {
  cfg.validate();
  if (y_up0.width() != cfg.width || y_up0.height() != cfg.height) {
    throw std::invalid_argument("srr_init: observation does not match the configured grid");
  }
  if (!all_finite(y_up0)) throw NumericalError("srr_init: observation contains non-finite values");
  return SrrState{y_up0, 0, 0.0};
}

double srr_cost(const GridImage& x, const GridImage& y_up, const PixelAssignment& assignment,
                const Kernel& kernel, double alpha) {
  check_inputs(x, y_up, assignment, "srr_cost");
  GridImage residual = forward_observe(x, assignment, kernel);
  double data = 0.0;
  for (std::size_t p = 0; p < residual.size(); ++p) {
    if (assignment.is_outside(p)) continue;
    double r = residual[p] - y_up[p];
    data += r * r;
  }
  double reg = alpha != 0.0 ? squared_norm(laplacian_apply(x)) : 0.0;
  return data + alpha * reg;
}

GridImage srr_gradient(const GridImage& x, const GridImage& y_up,
                       const PixelAssignment& assignment, const Kernel& kernel, double alpha) {
  check_inputs(x, y_up, assignment, "srr_gradient");
  GridImage g = evaluate(x, y_up, assignment, kernel, alpha).half_gradient;
  for (double& v : g.values()) v *= 2.0;
  return g;
}

SrrState srr_step(const SrrState& state, const GridImage& y_up, const FlowField& flow,
                  const PixelAssignment& assignment, const SrrConfig& cfg, SrrStepTrace* trace) {
  check_inputs(state.x_hat, y_up, assignment, "srr_step");

  GridImage x = warp_image(state.x_hat, flow);
  assignment.mask_outside(x);

  if (trace) trace->cost.clear();
  double initial_cost = 0.0;
  for (std::size_t k = 0; k < cfg.k_iters; ++k) {
    CostAndGradient cg = evaluate(x, y_up, assignment, cfg.kernel, cfg.alpha);
    if (!std::isfinite(cg.cost)) {
      throw NumericalError(fmt::format("srr_step: non-finite cost at frame {} iteration {}",
                                       state.frame_index + 1, k));
    }
    if (k == 0) {
      initial_cost = cg.cost;
    } else if (cg.cost > kDivergenceFactor * initial_cost && cg.cost > 0.0) {
      throw NumericalError(fmt::format(
          "srr_step: diverging at frame {} iteration {} (cost {} vs initial {}); reduce mu",
          state.frame_index + 1, k, cg.cost, initial_cost));
    }
    if (trace) trace->cost.push_back(cg.cost);
    for (std::size_t p = 0; p < x.size(); ++p) x[p] -= cfg.mu * cg.half_gradient[p];
    assignment.mask_outside(x);
  }
  double final_cost = srr_cost(x, y_up, assignment, cfg.kernel, cfg.alpha);
  if (!all_finite(x) || !std::isfinite(final_cost)) {
    throw NumericalError(fmt::format("srr_step: non-finite estimate at frame {} iteration {}",
                                     state.frame_index + 1, cfg.k_iters));
  }
  if (final_cost > kDivergenceFactor * initial_cost && final_cost > 0.0) {
    throw NumericalError(fmt::format("srr_step: diverging at frame {} (cost {} vs initial {}); reduce mu",
                                     state.frame_index + 1, final_cost, initial_cost));
  }
  if (trace) trace->cost.push_back(final_cost);
  return SrrState{std::move(x), state.frame_index + 1, final_cost};
}

double estimate_lipschitz(const PixelAssignment& assignment, const Kernel& kernel, double alpha,
                          std::size_t iterations) {
  GridImage v(assignment.width(), assignment.height());
  CounterRng rng(0x4c6970ULL, 0);
  for (double& x : v.values()) x = rng.uniform() - 0.5;
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    double n = norm(v);
    if (n == 0.0) return 0.0;
    for (double& x : v.values()) x /= n;
    GridImage av = adjoint_observe(forward_observe(v, assignment, kernel), assignment, kernel);
    if (alpha != 0.0) {
      GridImage ssv = laplacian_apply(laplacian_apply(v));
      for (std::size_t p = 0; p < av.size(); ++p) av[p] += alpha * ssv[p];
    }
    estimate = dot(v, av);
    v = std::move(av);
  }
  return estimate;
}

std::vector<GridImage> run_sequence_upsampled(const std::vector<GridImage>& y_up,
                                              const std::vector<FlowField>& flows,
                                              const PixelAssignment& assignment,
                                              const SrrConfig& cfg, SequenceTrace* trace) {
  if (y_up.empty()) throw std::invalid_argument("run_sequence: no observations");
  if (flows.size() != y_up.size()) {
    throw std::invalid_argument("run_sequence: need one flow per observation");
  }
  std::vector<GridImage> out;
  out.reserve(y_up.size());
  SrrState state = srr_init(y_up.front(), cfg);
  const FlowField zero(cfg.width, cfg.height);
  for (std::size_t t = 0; t < y_up.size(); ++t) {
    SrrStepTrace step_trace;
    state = srr_step(state, y_up[t], t == 0 ? zero : flows[t], assignment, cfg,
                     trace ? &step_trace : nullptr);
    if (trace) trace->steps.push_back(std::move(step_trace));
    out.push_back(state.x_hat);
  }
  if (trace) trace->flows = flows;
  return out;
}

std::vector<FlowField> estimate_sequence_flows(const std::vector<GridImage>& y_up,
                                               const FlowParams& params, Warnings* warnings) {
  std::vector<FlowField> flows;
  flows.reserve(y_up.size());
  for (std::size_t t = 0; t < y_up.size(); ++t) {
    if (t == 0) {
      flows.emplace_back(y_up[0].width(), y_up[0].height());
      continue;
    }
    HornSchunckReport report;
    report.record_energy = false;
    flows.push_back(horn_schunck(y_up[t], y_up[t - 1], params, warnings ? &report : nullptr));
    if (warnings) {
      for (auto& m : report.warnings.messages) warnings->add(fmt::format("frame {}: {}", t, m));
    }
  }
  return flows;
}

std::vector<GridImage> run_sequence(const std::vector<FemImage>& observations,
                                    const PixelAssignment& assignment, const SrrConfig& cfg,
                                    const FlowParams& flow_params, SequenceTrace* trace) {
  std::vector<GridImage> y_up;
  y_up.reserve(observations.size());
  for (const FemImage& obs : observations) y_up.push_back(upsample(obs, assignment));
  auto flows = estimate_sequence_flows(y_up, flow_params);
  return run_sequence_upsampled(y_up, flows, assignment, cfg, trace);
}

}  // namespace meshsrr
