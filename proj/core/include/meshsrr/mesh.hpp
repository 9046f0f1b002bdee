#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace meshsrr {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

using Element = std::array<std::size_t, 3>;

// Tolerance on the cross-product sign test used for point location.
inline constexpr double kPointInTriangleTolerance = 1e-12;

// Closed-triangle containment with the cross-product sign test; works for
// either orientation.
bool triangle_contains(const Point2& a, const Point2& b, const Point2& c, const Point2& p,
                       double tolerance = kPointInTriangleTolerance);

// Twice the signed area (positive for counter-clockwise).
double signed_double_area(const Point2& a, const Point2& b, const Point2& c);

/// Triangular mesh over the normalized domain [-1,1]^2.
///
/// Construction validates the invariants: element indices in range, no
/// degenerate elements, all nodes inside [-1,1]^2, and a sampled
/// non-overlap check (interior points of every element must not lie strictly
/// inside any other element). Meshes in other units are rejected, never
/// rescaled. A mesh with zero elements is representable but cannot be
/// rasterized.
class FemMesh {
 public:
  FemMesh() = default;
  FemMesh(std::vector<Point2> nodes, std::vector<Element> elements);

  std::span<const Point2> nodes() const { return nodes_; }
  std::span<const Element> elements() const { return elements_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t element_count() const { return elements_.size(); }

  const Point2& vertex(std::size_t element, std::size_t corner) const {
    return nodes_[elements_[element][corner]];
  }
  double element_area(std::size_t element) const;
  double total_area() const;
  bool contains(std::size_t element, const Point2& p) const;

  // Content hash of nodes and elements; two meshes with equal geometry share it.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::vector<Point2> nodes_;
  std::vector<Element> elements_;
  std::uint64_t fingerprint_ = 0;
};

/// One scalar per mesh element (an LR image on the nonuniform grid).
class FemImage {
 public:
  FemImage(std::shared_ptr<const FemMesh> mesh, std::vector<double> values);

  const FemMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const FemMesh>& mesh_ptr() const { return mesh_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t e) const { return values_[e]; }

 private:
  std::shared_ptr<const FemMesh> mesh_;
  std::vector<double> values_;
};

}  // namespace meshsrr
