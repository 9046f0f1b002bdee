#include "meshsrr/grid_image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace meshsrr {

GridImage::GridImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

GridImage::GridImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width_ * height_) {
    throw std::invalid_argument("GridImage: data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width_) + "x" +
                                std::to_string(height_));
  }
}

double GridImage::center_x(std::size_t i) const {
  return -1.0 + (static_cast<double>(i) + 0.5) * (2.0 / static_cast<double>(width_));
}

double GridImage::center_y(std::size_t j) const {
  return -1.0 + (static_cast<double>(j) + 0.5) * (2.0 / static_cast<double>(height_));
}

void require_same_shape(const GridImage& a, const GridImage& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": image shapes differ (" +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
  }
}

double dot(const GridImage& a, const GridImage& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_norm(const GridImage& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return s;
}

double norm(const GridImage& a) { return std::sqrt(squared_norm(a)); }

double max_abs_diff(const GridImage& a, const GridImage& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_value(const GridImage& a) {
  if (a.empty()) throw std::invalid_argument("max_value: empty image");
  return *std::max_element(a.values().begin(), a.values().end());
}

double min_value(const GridImage& a) {
  if (a.empty()) throw std::invalid_argument("min_value: empty image");
  return *std::min_element(a.values().begin(), a.values().end());
}

bool all_finite(const GridImage& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace meshsrr
