#include "meshsrr/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace meshsrr {

namespace {

double pixel_center(std::size_t i, std::size_t n) {
  return -1.0 + (static_cast<double>(i) + 0.5) * (2.0 / static_cast<double>(n));
}

// Index range of pixel centers that can fall inside [lo, hi], padded by one
// pixel on each side.
std::pair<std::size_t, std::size_t> center_range(double lo, double hi, std::size_t n) {
  double scale = static_cast<double>(n) / 2.0;
  long first = static_cast<long>(std::floor((lo + 1.0) * scale - 0.5)) - 1;
  long last = static_cast<long>(std::ceil((hi + 1.0) * scale - 0.5)) + 1;
  first = std::clamp<long>(first, 0, static_cast<long>(n) - 1);
  last = std::clamp<long>(last, 0, static_cast<long>(n) - 1);
  return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

void check_grid(const GridImage& img, const PixelAssignment& assignment, const char* what) {
  if (img.width() != assignment.width() || img.height() != assignment.height()) {
    throw std::invalid_argument(fmt::format("{}: image is {}x{} but the assignment is {}x{}", what,
                                            img.width(), img.height(), assignment.width(),
                                            assignment.height()));
  }
}

// Per-element means summed in ascending member order; empty elements get 0.
std::vector<double> element_means(const GridImage& img, const PixelAssignment& assignment) {
  std::vector<double> means(assignment.element_count(), 0.0);
  for (std::size_t e = 0; e < means.size(); ++e) {
    auto members = assignment.members(e);
    if (members.empty()) continue;
    double sum = 0.0;
    for (std::size_t p : members) sum += img[p];
    means[e] = sum / static_cast<double>(members.size());
  }
  return means;
}

}  // namespace

PixelAssignment build_pixel_assignment(std::shared_ptr<const FemMesh> mesh, std::size_t width,
                                       std::size_t height) {
  if (!mesh) throw std::invalid_argument("build_pixel_assignment: null mesh");
  if (width == 0 || height == 0) {
    throw std::invalid_argument("build_pixel_assignment: grid dimensions must be at least 1");
  }
  if (mesh->element_count() == 0) {
    throw std::invalid_argument("build_pixel_assignment: mesh has no elements");
  }

  PixelAssignment out;
  out.width_ = width;
  out.height_ = height;
  out.owner_.assign(width * height, kOutside);

  // Visiting elements in index order and never overwriting gives every
  // boundary pixel to the lowest-index containing element.
  const std::size_t n_elements = mesh->element_count();
  for (std::size_t e = 0; e < n_elements; ++e) {
    const Point2& a = mesh->vertex(e, 0);
    const Point2& b = mesh->vertex(e, 1);
    const Point2& c = mesh->vertex(e, 2);
    auto [i0, i1] = center_range(std::min({a.x, b.x, c.x}), std::max({a.x, b.x, c.x}), width);
    auto [j0, j1] = center_range(std::min({a.y, b.y, c.y}), std::max({a.y, b.y, c.y}), height);
    for (std::size_t j = j0; j <= j1; ++j) {
      double y = pixel_center(j, height);
      for (std::size_t i = i0; i <= i1; ++i) {
        std::size_t p = j * width + i;
        if (out.owner_[p] != kOutside) continue;
        if (triangle_contains(a, b, c, Point2{pixel_center(i, width), y})) {
          out.owner_[p] = static_cast<std::int32_t>(e);
        }
      }
    }
  }

  std::vector<std::size_t> counts(n_elements, 0);
  for (std::int32_t owner : out.owner_) {
    if (owner == kOutside) {
      ++out.outside_count_;
    } else {
      ++counts[static_cast<std::size_t>(owner)];
    }
  }
  out.offsets_.assign(n_elements + 1, 0);
  for (std::size_t e = 0; e < n_elements; ++e) out.offsets_[e + 1] = out.offsets_[e] + counts[e];
  out.members_.assign(out.offsets_.back(), 0);
  std::vector<std::size_t> cursor(out.offsets_.begin(), out.offsets_.end() - 1);
  for (std::size_t p = 0; p < out.owner_.size(); ++p) {
    if (out.owner_[p] != kOutside) out.members_[cursor[static_cast<std::size_t>(out.owner_[p])]++] = p;
  }
  out.mesh_ = std::move(mesh);
  return out;
}

void PixelAssignment::mask_outside(GridImage& img) const {
  check_grid(img, *this, "mask_outside");
  for (std::size_t p = 0; p < owner_.size(); ++p) {
    if (owner_[p] == kOutside) img[p] = 0.0;
  }
}

GridImage upsample(const FemImage& img, const PixelAssignment& assignment) {
  if (img.mesh_ptr() != assignment.mesh() &&
      (img.mesh().element_count() != assignment.element_count() ||
       img.mesh().fingerprint() != assignment.mesh()->fingerprint())) {
    throw std::invalid_argument("upsample: FemImage mesh does not match the pixel assignment");
  }
  GridImage out(assignment.width(), assignment.height(), 0.0);
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::int32_t e = assignment.element_of(p);
    if (e != kOutside) out[p] = img[static_cast<std::size_t>(e)];
  }
  return out;
}

FemImage downsample(const GridImage& img, const PixelAssignment& assignment, Warnings* warnings) {
  check_grid(img, assignment, "downsample");
  if (warnings) {
    for (std::size_t e = 0; e < assignment.element_count(); ++e) {
      if (assignment.member_count(e) == 0) {
        warnings->add(fmt::format("downsample: element {} contains no pixel centers; value set to 0", e));
      }
    }
  }
  return FemImage(assignment.mesh(), element_means(img, assignment));
}

GridImage apply_hd(const GridImage& img, const PixelAssignment& assignment) {
  check_grid(img, assignment, "apply_hd");
  std::vector<double> means = element_means(img, assignment);
  GridImage out(assignment.width(), assignment.height(), 0.0);
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::int32_t e = assignment.element_of(p);
    if (e != kOutside) out[p] = means[static_cast<std::size_t>(e)];
  }
  return out;
}

}  // namespace meshsrr
