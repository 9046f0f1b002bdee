#include "meshsrr/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace meshsrr {

namespace {
constexpr double kNormalizationTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-15;
}  // namespace

Kernel Kernel::from_taps(std::size_t size, std::vector<double> taps) {
  if (size == 0 || size % 2 == 0) {
    throw std::invalid_argument(fmt::format("Kernel: size must be odd and positive, got {}", size));
  }
  if (taps.size() != size * size) {
    throw std::invalid_argument(
        fmt::format("Kernel: expected {} taps, got {}", size * size, taps.size()));
  }
  double sum = 0.0;
  for (double t : taps) {
    if (!std::isfinite(t)) throw std::invalid_argument("Kernel: non-finite tap");
    sum += t;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument(fmt::format("Kernel: taps sum to {}, expected 1", sum));
  }
  for (std::size_t k = 0; k < taps.size(); ++k) {
    if (std::abs(taps[k] - taps[taps.size() - 1 - k]) > kSymmetryTolerance) {
      throw std::invalid_argument("Kernel: taps are not symmetric under 180 degree rotation");
    }
  }
  Kernel out;
  out.size_ = size;
  out.taps_ = std::move(taps);
  return out;
}

Kernel gaussian_kernel(std::size_t size, double sigma) {
  if (size == 0 || size % 2 == 0) {
    throw std::invalid_argument(
        fmt::format("gaussian_kernel: size must be odd and positive, got {}", size));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument(fmt::format("gaussian_kernel: sigma must be positive, got {}", sigma));
  }
  const long r = static_cast<long>(size / 2);
  const double denom = 2.0 * sigma * sigma;

  std::vector<double> taps(size * size);
  double sum = 0.0;
  for (long b = -r; b <= r; ++b) {
    for (long a = -r; a <= r; ++a) {
      double w = std::exp(-static_cast<double>(a * a + b * b) / denom);
      taps[static_cast<std::size_t>((b + r) * static_cast<long>(size) + (a + r))] = w;
      sum += w;
    }
  }
  for (double& t : taps) t /= sum;

  std::vector<double> factor(size);
  double fsum = 0.0;
  for (long a = -r; a <= r; ++a) {
    double w = std::exp(-static_cast<double>(a * a) / denom);
    factor[static_cast<std::size_t>(a + r)] = w;
    fsum += w;
  }
  for (double& f : factor) f /= fsum;

  Kernel k = Kernel::from_taps(size, std::move(taps));
  k.factor_ = std::move(factor);
  return k;
}

std::size_t nearest_odd(std::size_t size) { return size % 2 == 1 ? size : size + 1; }

}  // namespace meshsrr
