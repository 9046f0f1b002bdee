#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "meshsrr/error.hpp"
#include "meshsrr/grid_image.hpp"

namespace meshsrr {

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(std::size_t width, std::size_t height);
  BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool get(std::size_t i, std::size_t j) const { return bits_[j * width_ + i] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true) { bits_[j * width_ + i] = on ? 1 : 0; }
  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  std::size_t count() const;
  bool empty_set() const { return count() == 0; }

  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

inline constexpr double kDefaultThresholdFraction = 0.25;

struct Binarized {
  BinaryMask mask;
  bool degenerate = false;  // max(img) <= 0: mask left empty
};

// Pixel set iff value >= fraction * max(img).
Binarized binarize(const GridImage& img, double fraction = kDefaultThresholdFraction);

// |a & b| / |a | b|. Both empty -> 1 (with a warning); exactly one empty -> 0.
double overlap(const BinaryMask& a, const BinaryMask& b, Warnings* warnings = nullptr);

struct BoundaryPoint {
  std::size_t i = 0;
  std::size_t j = 0;
  double x = 0.0;  // normalized domain coordinates of the pixel center
  double y = 0.0;
};

// Set pixels with an unset 4-neighbour or lying on the image border, in
// row-major order.
std::vector<BoundaryPoint> boundary(const BinaryMask& mask);

// Distances are in normalized domain units: a step of one pixel along x is
// 2 / width, along y 2 / height. Both throw std::invalid_argument when either
// boundary is empty. Computed with an exact separable distance transform.
double hausdorff(const BinaryMask& a, const BinaryMask& b);
// 1/2 [mean_{p in dA} d(p, dB) + mean_{q in dB} d(q, dA)]
double masd(const BinaryMask& a, const BinaryMask& b);

struct FrameMetrics {
  double overlap = 0.0;
  double hausdorff = 0.0;
  double masd = 0.0;
};

struct MetricsReport {
  std::vector<FrameMetrics> frames;

  FrameMetrics average() const;
  // "frame,overlap,hausdorff,masd", one row per frame, then "avg,...".
  std::string to_csv() const;
};

// Binarizes both images at the default fraction and scores the estimate
// against the reference.
FrameMetrics compare_images(const GridImage& reference, const GridImage& estimate,
                            Warnings* warnings = nullptr);

}  // namespace meshsrr
