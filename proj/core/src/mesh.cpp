#include "meshsrr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "meshsrr/rng.hpp"

namespace meshsrr {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::uint64_t fnv1a(std::uint64_t h, const void* bytes, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t k = 0; k < n; ++k) {
    h ^= p[k];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Point strictly inside (away from every edge by more than the tolerance).
bool strictly_inside(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
  double s = signed_double_area(a, b, c) > 0.0 ? 1.0 : -1.0;
  return s * cross(a, b, p) > kPointInTriangleTolerance &&
         s * cross(b, c, p) > kPointInTriangleTolerance &&
         s * cross(c, a, p) > kPointInTriangleTolerance;
}

struct Box {
  double x0, y0, x1, y1;
};

// Sampled non-overlap check. Each element contributes its centroid and a few
// random interior points; none of them may fall strictly inside another
// element. Elements are bucketed on a uniform grid so the check is roughly
// linear in the element count.
void check_non_overlapping(const std::vector<Point2>& nodes, const std::vector<Element>& elements) {
  const std::size_t n = elements.size();
  if (n < 2) return;
  const std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n)));
  auto cell_of = [cells](double v) {
    auto c = static_cast<long>((v + 1.0) * 0.5 * static_cast<double>(cells));
    return static_cast<std::size_t>(std::clamp<long>(c, 0, static_cast<long>(cells) - 1));
  };

  std::vector<Box> boxes(n);
  std::vector<std::vector<std::size_t>> buckets(cells * cells);
  for (std::size_t e = 0; e < n; ++e) {
    const Point2& a = nodes[elements[e][0]];
    const Point2& b = nodes[elements[e][1]];
    const Point2& c = nodes[elements[e][2]];
    Box box{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y}), std::max({a.x, b.x, c.x}),
            std::max({a.y, b.y, c.y})};
    boxes[e] = box;
    for (std::size_t cy = cell_of(box.y0); cy <= cell_of(box.y1); ++cy)
      for (std::size_t cx = cell_of(box.x0); cx <= cell_of(box.x1); ++cx)
        buckets[cy * cells + cx].push_back(e);
  }

  CounterRng rng(0x6d657368ULL, 0);
  for (std::size_t e = 0; e < n; ++e) {
    const Point2& a = nodes[elements[e][0]];
    const Point2& b = nodes[elements[e][1]];
    const Point2& c = nodes[elements[e][2]];
    for (int s = 0; s < 3; ++s) {
      double w0 = 1.0 / 3.0, w1 = 1.0 / 3.0;
      if (s > 0) {
        double r1 = rng.uniform(), r2 = rng.uniform();
        if (r1 + r2 > 1.0) {
          r1 = 1.0 - r1;
          r2 = 1.0 - r2;
        }
        // keep samples off the edges
        w0 = 0.05 + 0.85 * r1;
        w1 = 0.05 + 0.85 * r2;
        if (w0 + w1 > 0.95) {
          double scale = 0.9 / (w0 + w1);
          w0 *= scale;
          w1 *= scale;
        }
      }
      double w2 = 1.0 - w0 - w1;
      Point2 p{w0 * a.x + w1 * b.x + w2 * c.x, w0 * a.y + w1 * b.y + w2 * c.y};
      for (std::size_t other : buckets[cell_of(p.y) * cells + cell_of(p.x)]) {
        if (other == e) continue;
        const Box& box = boxes[other];
        if (p.x < box.x0 || p.x > box.x1 || p.y < box.y0 || p.y > box.y1) continue;
        if (strictly_inside(nodes[elements[other][0]], nodes[elements[other][1]],
                            nodes[elements[other][2]], p)) {
          throw std::invalid_argument(
              fmt::format("FemMesh: elements {} and {} overlap near ({}, {})", e, other, p.x, p.y));
        }
      }
    }
  }
}

}  // namespace

double signed_double_area(const Point2& a, const Point2& b, const Point2& c) {
  return cross(a, b, c);
}

bool triangle_contains(const Point2& a, const Point2& b, const Point2& c, const Point2& p,
                       double tolerance) {
  double d1 = cross(a, b, p);
  double d2 = cross(b, c, p);
  double d3 = cross(c, a, p);
  if (signed_double_area(a, b, c) > 0.0) {
    return d1 >= -tolerance && d2 >= -tolerance && d3 >= -tolerance;
  }
  return d1 <= tolerance && d2 <= tolerance && d3 <= tolerance;
}

FemMesh::FemMesh(std::vector<Point2> nodes, std::vector<Element> elements)
    : nodes_(std::move(nodes)), elements_(std::move(elements)) {
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Point2& p = nodes_[k];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || std::abs(p.x) > 1.0 ||
        std::abs(p.y) > 1.0) {
      throw std::invalid_argument(fmt::format(
          "FemMesh: node {} at ({}, {}) lies outside the normalized domain [-1,1]^2", k, p.x, p.y));
    }
  }
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (std::size_t idx : elements_[e]) {
      if (idx >= nodes_.size()) {
        throw std::invalid_argument(fmt::format(
            "FemMesh: element {} references node {} but only {} nodes exist", e, idx,
            nodes_.size()));
      }
    }
    if (signed_double_area(vertex(e, 0), vertex(e, 1), vertex(e, 2)) == 0.0) {
      throw std::invalid_argument(fmt::format("FemMesh: element {} has zero area", e));
    }
  }
  check_non_overlapping(nodes_, elements_);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Point2& p : nodes_) {
    h = fnv1a(h, &p.x, sizeof(double));
    h = fnv1a(h, &p.y, sizeof(double));
  }
  for (const Element& el : elements_) {
    for (std::size_t idx : el) {
      auto v = static_cast<std::uint64_t>(idx);
      h = fnv1a(h, &v, sizeof(v));
    }
  }
  fingerprint_ = h;
}

double FemMesh::element_area(std::size_t element) const {
  return 0.5 * std::abs(signed_double_area(vertex(element, 0), vertex(element, 1),
                                           vertex(element, 2)));
}

double FemMesh::total_area() const {
  double s = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) s += element_area(e);
  return s;
}

bool FemMesh::contains(std::size_t element, const Point2& p) const {
  return triangle_contains(vertex(element, 0), vertex(element, 1), vertex(element, 2), p);
}

FemImage::FemImage(std::shared_ptr<const FemMesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw std::invalid_argument("FemImage: null mesh");
  if (values_.size() != mesh_->element_count()) {
    throw std::invalid_argument(fmt::format("FemImage: {} values for a mesh with {} elements",
                                            values_.size(), mesh_->element_count()));
  }
  for (std::size_t e = 0; e < values_.size(); ++e) {
    if (!std::isfinite(values_[e])) {
      throw std::invalid_argument(fmt::format("FemImage: value of element {} is not finite", e));
    }
  }
}

}  // namespace meshsrr
