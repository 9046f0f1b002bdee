#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace meshsrr {

/// Square odd-sized convolution mask. Taps sum to one and are symmetric
/// under 180 degree rotation. Kernels built by gaussian_kernel also carry
/// their 1-D factor so convolution can run separably.
class Kernel {
 public:
  // Validates size, normalization (1e-12) and point symmetry.
  static Kernel from_taps(std::size_t size, std::vector<double> taps);
  static Kernel identity() { return from_taps(1, {1.0}); }

  std::size_t size() const { return size_; }
  std::size_t radius() const { return size_ / 2; }
  // taps()[b * size + a] weights offset (a - radius, b - radius)
  std::span<const double> taps() const { return taps_; }
  double tap(std::size_t a, std::size_t b) const { return taps_[b * size_ + a]; }
  const std::optional<std::vector<double>>& separable_factor() const { return factor_; }

 private:
  friend Kernel gaussian_kernel(std::size_t size, double sigma);

  std::size_t size_ = 1;
  std::vector<double> taps_{1.0};
  std::optional<std::vector<double>> factor_;
};

// Taps proportional to exp(-(u^2 + v^2) / (2 sigma^2)) on integer offsets.
Kernel gaussian_kernel(std::size_t size, double sigma);

// Nearest odd size to `size` (even sizes round up).
std::size_t nearest_odd(std::size_t size);

}  // namespace meshsrr
