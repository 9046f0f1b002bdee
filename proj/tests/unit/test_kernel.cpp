#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "meshsrr/kernel.hpp"

using namespace meshsrr;

TEST(Kernel, NearestOdd) {
  EXPECT_EQ(nearest_odd(60), 61u);
  EXPECT_EQ(nearest_odd(61), 61u);
  EXPECT_EQ(nearest_odd(0), 1u);
}

TEST(Kernel, GaussianIsNormalizedSymmetricAndSeparable) {
  Kernel k = gaussian_kernel(61, 20.0);
  ASSERT_EQ(k.size(), 61u);
  double sum = std::accumulate(k.taps().begin(), k.taps().end(), 0.0);
  EXPECT_NEAR(sum, 1.0, 1e-12);
  for (std::size_t b = 0; b < 61; ++b) {
    for (std::size_t a = 0; a < 61; ++a) {
      EXPECT_NEAR(k.tap(a, b), k.tap(60 - a, 60 - b), 1e-18);
      EXPECT_NEAR(k.tap(a, b), k.tap(b, a), 1e-18);
    }
  }
  ASSERT_TRUE(k.separable_factor().has_value());
  const auto& g = *k.separable_factor();
  for (std::size_t b = 0; b < 61; ++b) {
    for (std::size_t a = 0; a < 61; ++a) EXPECT_NEAR(g[a] * g[b], k.tap(a, b), 1e-15);
  }
  // unnormalized shape: ratio of neighbouring taps follows the exponent
  EXPECT_NEAR(k.tap(31, 30) / k.tap(30, 30), std::exp(-1.0 / 800.0), 1e-12);
}

TEST(Kernel, FromTapsValidates) {
  EXPECT_THROW(Kernel::from_taps(2, {0.25, 0.25, 0.25, 0.25}), std::invalid_argument);
  EXPECT_THROW(Kernel::from_taps(3, std::vector<double>(9, 0.2)), std::invalid_argument);
  std::vector<double> lopsided(9, 0.0);
  lopsided[0] = 0.5;
  lopsided[4] = 0.5;
  EXPECT_THROW(Kernel::from_taps(3, lopsided), std::invalid_argument);
  EXPECT_THROW(Kernel::from_taps(3, {1.0}), std::invalid_argument);
  Kernel id = Kernel::identity();
  EXPECT_EQ(id.size(), 1u);
  EXPECT_EQ(id.radius(), 0u);
  EXPECT_THROW(gaussian_kernel(5, 0.0), std::invalid_argument);
}
