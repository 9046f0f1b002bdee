#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "meshsrr/error.hpp"
#include "meshsrr/grid_image.hpp"
#include "meshsrr/mesh.hpp"

namespace meshsrr {

inline constexpr std::int32_t kOutside = -1;

/// Map between IHR pixels and the mesh elements whose closed triangle holds
/// the pixel center. Immutable once built; safe to share between threads.
///
/// A center on a shared edge goes to the lowest-index element containing it.
/// Member lists are stored in ascending pixel order, which fixes the
/// summation order of every per-element reduction.
class PixelAssignment {
 public:
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return owner_.size(); }
  std::size_t element_count() const { return offsets_.size() - 1; }

  std::int32_t element_of(std::size_t pixel) const { return owner_[pixel]; }
  bool is_outside(std::size_t pixel) const { return owner_[pixel] == kOutside; }
  std::span<const std::size_t> members(std::size_t element) const {
    return {members_.data() + offsets_[element], offsets_[element + 1] - offsets_[element]};
  }
  std::size_t member_count(std::size_t element) const {
    return offsets_[element + 1] - offsets_[element];
  }
  std::size_t outside_count() const { return outside_count_; }

  const std::shared_ptr<const FemMesh>& mesh() const { return mesh_; }

  // Zero out OUTSIDE pixels in place.
  void mask_outside(GridImage& img) const;

  friend PixelAssignment build_pixel_assignment(std::shared_ptr<const FemMesh> mesh,
                                                std::size_t width, std::size_t height);

 private:
  std::shared_ptr<const FemMesh> mesh_;
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::int32_t> owner_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> members_;
  std::size_t outside_count_ = 0;
};

PixelAssignment build_pixel_assignment(std::shared_ptr<const FemMesh> mesh, std::size_t width,
                                       std::size_t height);

// y_up(i) = y(element of i); OUTSIDE pixels are zero.
GridImage upsample(const FemImage& img, const PixelAssignment& assignment);

// Per-element mean over member pixels. Elements with no member pixel get 0
// and one warning each.
FemImage downsample(const GridImage& img, const PixelAssignment& assignment,
                    Warnings* warnings = nullptr);

// Averaging projection H_D = upsample(downsample(.)). Idempotent and
// self-adjoint.
GridImage apply_hd(const GridImage& img, const PixelAssignment& assignment);

}  // namespace meshsrr
