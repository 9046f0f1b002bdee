#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace meshsrr {

/// Uniform W x H raster over the normalized domain [-1,1]^2.
///
/// Pixel (i, j) lives at data[j * width + i]; its center is
/// x_i = -1 + (i + 0.5) * 2 / W and y_j = -1 + (j + 0.5) * 2 / H, so row j
/// grows with the y coordinate.
class GridImage {
 public:
  GridImage() = default;
  GridImage(std::size_t width, std::size_t height, double fill = 0.0);
  GridImage(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * width_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * width_ + i]; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  double center_x(std::size_t i) const;
  double center_y(std::size_t j) const;

  bool same_shape(const GridImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const GridImage&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

double dot(const GridImage& a, const GridImage& b);
double squared_norm(const GridImage& a);
double norm(const GridImage& a);
double max_abs_diff(const GridImage& a, const GridImage& b);
double max_value(const GridImage& a);
double min_value(const GridImage& a);
bool all_finite(const GridImage& a);

// Throws std::invalid_argument naming `what` when shapes differ.
void require_same_shape(const GridImage& a, const GridImage& b, const char* what);

}  // namespace meshsrr
