#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "meshsrr/flow_field.hpp"
#include "meshsrr/grid_image.hpp"
#include "meshsrr/kernel.hpp"
#include "meshsrr/mesh.hpp"
#include "meshsrr/resample.hpp"

namespace meshsrr {

enum class SceneKind { TShape, Lung };

// T made of a vertical stem and a horizontal bar flush with the top of the
// stem; the stem center is the object position.
struct TShapeGeometry {
  double stem_width = 0.12;
  double stem_height = 0.5;
  double bar_width = 0.5;
  double bar_height = 0.12;
};

// Two ellipses mirrored about x = 0 and a static spine circle. Ellipse area
// follows 1 + area_swing * cos(2 pi t / period) with period = frames / 2.
struct LungGeometry {
  double center_x = 0.4;
  double center_y = 0.1;
  double semi_x = 0.22;
  double semi_y = 0.38;
  double area_swing = 0.3;
  double spine_radius = 0.08;
  double spine_y = -0.6;
};

struct SceneSpec {
  SceneKind kind = SceneKind::TShape;
  std::size_t frames = 20;
  double background = 1.0;
  double inclusion = 2.0;
  // Per-axis Gaussian step variance of the T-shape walk and the symmetric
  // bound on each position coordinate.
  double motion_variance = 0.3;
  double motion_bound = 0.15;
  std::uint64_t rng_seed = 1;
  TShapeGeometry tshape;
  LungGeometry lung;

  void validate() const;  // throws ConfigError
};

// T-shape centers for every frame. Frame 0 sits at the origin; each later
// coordinate adds a N(0, variance) step, redrawn until the result lies in
// [-bound, bound].
std::vector<Point2> tshape_positions(const SceneSpec& spec);

// Hard-edged frames: 0 outside the unit disc, background inside, inclusion
// on the objects. Throw std::out_of_range when t >= frames.
GridImage render_tshape(const SceneSpec& spec, std::size_t t, std::size_t width,
                        std::size_t height);
GridImage render_lung(const SceneSpec& spec, std::size_t t, std::size_t width, std::size_t height);
GridImage render_frame(const SceneSpec& spec, std::size_t t, std::size_t width,
                       std::size_t height);

// Area scale factor of the lung ellipses at (possibly fractional) time t.
double lung_area_scale(const SceneSpec& spec, double t);

// Exact frame-to-frame motion of the T-shape in the flow convention used by
// srr_step: flows[t] = c_{t-1} - c_t in pixels, flows[0] = 0.
std::vector<FlowField> tshape_true_flows(const SceneSpec& spec, std::size_t width,
                                         std::size_t height);

// Conductivity change relative to the homogeneous background: frame minus
// background inside the unit disc.
GridImage difference_image(const GridImage& frame, double background);

enum class MeshDensity { Fine, Coarse };

// Concentric-ring triangulation of the unit disc. Ring k (k = 1..R) holds
// 4k nodes on radius k/R, giving 4R^2 counter-clockwise triangles:
// R = 16 (1024 elements) for Fine and R = 8 (256) for Coarse.
FemMesh disc_mesh(MeshDensity density);
FemMesh disc_mesh_rings(std::size_t rings);

struct DegradeSpec {
  std::shared_ptr<const FemMesh> mesh;
  Kernel kernel = Kernel::identity();
  double snr_db = 10.0;
  std::uint64_t rng_seed = 7;
};

/// Stand-in for the tomographic inverse problem:
///   y = downsample(convolve_neumann(x_hr, kernel)) + e.
/// e is white Gaussian drawn from stream (rng_seed, frame) and scaled so that
/// 10 log10(||signal||^2 / ||e||^2) equals snr_db over the element values.
FemImage degrade(const GridImage& x_hr, const DegradeSpec& spec, const PixelAssignment& assignment,
                 std::size_t frame, Warnings* warnings = nullptr);

}  // namespace meshsrr
