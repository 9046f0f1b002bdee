#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace meshsrr {

/// Dense per-pixel displacement in pixel units. u runs along the width
/// (index i), v along the height (index j). A flow f relates two images by
/// backward warping: warped(p) = source(p + f(p)).
class FlowField {
 public:
  FlowField() = default;
  FlowField(std::size_t width, std::size_t height);
  FlowField(std::size_t width, std::size_t height, std::vector<double> u, std::vector<double> v);

  static FlowField constant(std::size_t width, std::size_t height, double u, double v);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return u_.size(); }

  double& u(std::size_t i, std::size_t j) { return u_[j * width_ + i]; }
  double& v(std::size_t i, std::size_t j) { return v_[j * width_ + i]; }
  double u(std::size_t i, std::size_t j) const { return u_[j * width_ + i]; }
  double v(std::size_t i, std::size_t j) const { return v_[j * width_ + i]; }

  std::vector<double>& u_data() { return u_; }
  std::vector<double>& v_data() { return v_; }
  const std::vector<double>& u_data() const { return u_; }
  const std::vector<double>& v_data() const { return v_; }

  bool all_finite() const;
  double max_magnitude() const;

  bool operator==(const FlowField&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> u_;
  std::vector<double> v_;
};

// Debug dump: "FLOW 1", "<width> <height>", then one "u v" line per pixel in
// row-major order.
void write_flow(std::ostream& out, const FlowField& flow);
FlowField read_flow(std::istream& in);
void save_flow(const std::filesystem::path& path, const FlowField& flow);
FlowField load_flow(const std::filesystem::path& path);

}  // namespace meshsrr
