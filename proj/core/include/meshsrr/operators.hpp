#pragma once

#include <functional>
#include <string>

#include "meshsrr/flow_field.hpp"
#include "meshsrr/grid_image.hpp"
#include "meshsrr/kernel.hpp"
#include "meshsrr/resample.hpp"

namespace meshsrr {

// 2-D correlation with whole-sample symmetric extension: the padded sample
// at index -k reads pixel k-1, and at W-1+k reads W-k. Requires
// size <= 2 * min(W, H) - 1.
GridImage convolve_neumann(const GridImage& img, const Kernel& k);

// Exact transpose of convolve_neumann, computed by scattering.
GridImage blur_adjoint(const GridImage& img, const Kernel& k);

// Graph Laplacian of the 4-neighbour grid: interior rows are the 5-point
// stencil [0 -1 0; -1 4 -1; 0 -1 0]; missing neighbours at the border drop
// out (Neumann). Symmetric, rows and columns sum to zero. Requires W, H >= 3.
GridImage laplacian_apply(const GridImage& img);

// Backward bilinear warp out(p) = img(p + flow(p)); sample positions are
// clamped to the grid.
GridImage warp_image(const GridImage& img, const FlowField& flow);

// Transpose of warp_image: every input pixel deposits into the four source
// pixels with the gather weights.
GridImage warp_adjoint(const GridImage& img, const FlowField& flow);

// y_up = H_D H_B x
GridImage forward_observe(const GridImage& x, const PixelAssignment& assignment, const Kernel& k);
// H_B^T H_D^T r, using H_D^T = H_D
GridImage adjoint_observe(const GridImage& r, const PixelAssignment& assignment, const Kernel& k);

/// Type-erased linear operator on grid images with its transpose.
struct LinearOp {
  std::function<GridImage(const GridImage&)> apply;
  std::function<GridImage(const GridImage&)> adjoint_apply;
  std::string descriptor;
};

// The returned operators keep their own copies of kernel, flow and assignment.
LinearOp make_blur_op(Kernel k);
LinearOp make_hd_op(PixelAssignment assignment);
LinearOp make_laplacian_op();
LinearOp make_warp_op(FlowField flow);
LinearOp make_observe_op(PixelAssignment assignment, Kernel k);

}  // namespace meshsrr
