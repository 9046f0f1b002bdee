#pragma once

#include <cstddef>
#include <vector>

#include "meshsrr/error.hpp"
#include "meshsrr/flow_field.hpp"
#include "meshsrr/grid_image.hpp"

namespace meshsrr {

/// Horn-Schunck settings. lambda weights the smoothness term of the
/// textbook energy
///   sum_p (Ix u + Iy v + It)^2 + lambda * sum_edges |grad u|^2 + |grad v|^2
/// evaluated on intensities rescaled jointly to [0, 1].
struct FlowParams {
  double lambda = 0.002;
  std::size_t pyramid_levels = 4;
  double pyramid_spacing = 2.0;
  std::size_t iterations_per_level = 100;
  std::size_t warps_per_level = 3;

  // Throws ConfigError on lambda <= 0, levels < 1, spacing <= 1 or zero
  // iteration counts.
  void validate() const;
};

// Smallest pyramid level side that horn_schunck will use.
inline constexpr std::size_t kMinPyramidSide = 8;

struct HornSchunckReport {
  bool record_energy = true;
  std::size_t levels_used = 0;
  // energy[stage][iteration]: one stage per (level, warp), coarse to fine;
  // entry 0 is the energy before the first sweep of that stage.
  std::vector<std::vector<double>> energy;
  Warnings warnings;
};

// Level 0 is the input; level k+1 is level k smoothed with a Gaussian of
// sigma 0.8 * spacing and resampled bilinearly to round(size / spacing).
std::vector<GridImage> build_pyramid(const GridImage& img, std::size_t levels, double spacing);

// Bilinear resize; sample centers are mapped between grids, clamped at the
// border.
GridImage resize_bilinear(const GridImage& img, std::size_t width, std::size_t height);

// Resizes a flow field and rescales its vectors to the new pixel pitch.
FlowField resize_flow(const FlowField& flow, std::size_t width, std::size_t height);

/// Coarse-to-fine Horn-Schunck. The returned flow f satisfies
/// next(p + f(p)) ~ prev(p), so warp_image(next, f) approximates prev.
///
/// Each (level, warp) stage linearizes the data term around the current flow
/// and runs red-black Gauss-Seidel sweeps. Every pixel update is the exact
/// minimizer of the energy in (u_p, v_p), so the stage energy never
/// increases. Levels that would be smaller than kMinPyramidSide are dropped
/// with a warning.
FlowField horn_schunck(const GridImage& prev, const GridImage& next, const FlowParams& params,
                       HornSchunckReport* report = nullptr);

// f_ac(p) = f_bc(p) + f_ab(p + f_bc(p)), bilinear sampling of f_ab with
// clamped borders.
FlowField compose_flows(const FlowField& f_ab, const FlowField& f_bc);

}  // namespace meshsrr
