#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "meshsrr/metrics.hpp"
#include "oracles.hpp"

using namespace meshsrr;

namespace {

BinaryMask block(std::size_t w, std::size_t h, std::size_t i0, std::size_t j0, std::size_t bw, std::size_t bh) {
  BinaryMask m(w, h);
  for (std::size_t j = j0; j < j0 + bh; ++j) {
    for (std::size_t i = i0; i < i0 + bw; ++i) m.set(i, j);
  }
  return m;
}

BinaryMask from_oracle(const oracle::Mask& m) { return BinaryMask(m.w, m.h, m.bits); }

}  // namespace

TEST(Overlap, HandFixtures) {
  // 2x2 blocks shifted by one column share two of six pixels
  EXPECT_DOUBLE_EQ(overlap(block(4, 4, 0, 0, 2, 2), block(4, 4, 1, 0, 2, 2)), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(overlap(block(5, 5, 1, 1, 3, 3), block(5, 5, 1, 1, 3, 3)), 1.0);
  EXPECT_DOUBLE_EQ(overlap(block(5, 5, 0, 0, 2, 2), block(5, 5, 3, 3, 2, 2)), 0.0);
  // 3x3 inside 3x4: 9 / 12
  EXPECT_DOUBLE_EQ(overlap(block(6, 6, 1, 1, 3, 3), block(6, 6, 1, 1, 3, 4)), 0.75);
}

TEST(Overlap, EmptyConventions) {
  Warnings w;
  EXPECT_EQ(overlap(BinaryMask(4, 4), BinaryMask(4, 4), &w), 1.0);
  EXPECT_EQ(w.size(), 1u);
  EXPECT_EQ(overlap(BinaryMask(4, 4), block(4, 4, 0, 0, 1, 1)), 0.0);
}

TEST(Boundary, InteriorExcludedBorderIncluded) {
  auto b = boundary(block(3, 3, 0, 0, 3, 3));
  EXPECT_EQ(b.size(), 8u);
  auto c = boundary(block(7, 7, 1, 1, 5, 5));
  EXPECT_EQ(c.size(), 16u);
  EXPECT_EQ(c.front().i, 1u);
  EXPECT_EQ(c.front().j, 1u);
  EXPECT_DOUBLE_EQ(c.front().x, -1.0 + 3.0 / 7.0);
}

TEST(Distances, HandFixtures) {
  // columns 0-1 against 1-2 on a 4-wide grid: worst pixel is one column (0.5) away
  BinaryMask a = block(4, 4, 0, 0, 2, 2), b = block(4, 4, 1, 0, 2, 2);
  EXPECT_DOUBLE_EQ(hausdorff(a, b), 0.5);
  EXPECT_DOUBLE_EQ(masd(a, b), 0.25);
  // single pixels three columns and four rows apart on a 10x8 grid
  BinaryMask p = block(10, 8, 1, 1, 1, 1), q = block(10, 8, 4, 5, 1, 1);
  double d = std::sqrt(0.6 * 0.6 + 1.0 * 1.0);
  EXPECT_DOUBLE_EQ(hausdorff(p, q), d);
  EXPECT_DOUBLE_EQ(masd(p, q), d);
  EXPECT_EQ(hausdorff(a, a), 0.0);
  EXPECT_THROW(hausdorff(a, BinaryMask(4, 4)), std::invalid_argument);
  EXPECT_THROW(masd(BinaryMask(4, 4), a), std::invalid_argument);
  EXPECT_THROW(hausdorff(a, BinaryMask(5, 4)), std::invalid_argument);
}

TEST(Distances, EqualBruteForceOnRandomMasks) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> side(1, 24);
  int compared = 0;
  for (int k = 0; k < 150; ++k) {
    std::size_t w = side(rng), h = side(rng);
    oracle::Mask a = oracle::random_mask(w, h, rng), b = oracle::random_mask(w, h, rng);
    if (oracle::boundary_pixels(a).empty() || oracle::boundary_pixels(b).empty()) continue;
    EXPECT_EQ(hausdorff(from_oracle(a), from_oracle(b)), oracle::brute_hausdorff(a, b));
    EXPECT_EQ(masd(from_oracle(a), from_oracle(b)), oracle::brute_masd(a, b));
    ++compared;
  }
  EXPECT_GT(compared, 100);
}

TEST(Binarize, QuarterOfMaximum) {
  GridImage img(4, 1);
  img(0, 0) = 4.0;
  img(1, 0) = 1.0;   // exactly the threshold
  img(2, 0) = 0.999;
  img(3, 0) = -2.0;
  Binarized b = binarize(img);
  EXPECT_FALSE(b.degenerate);
  EXPECT_TRUE(b.mask.get(0, 0));
  EXPECT_TRUE(b.mask.get(1, 0));
  EXPECT_FALSE(b.mask.get(2, 0));
  EXPECT_FALSE(b.mask.get(3, 0));
  Binarized z = binarize(GridImage(3, 3, -1.0));
  EXPECT_TRUE(z.degenerate);
  EXPECT_TRUE(z.mask.empty_set());
}

TEST(MetricsReport, CsvLayoutAndAverage) {
  MetricsReport r;
  r.frames = {{0.5, 1.0, 0.25}, {1.0, 0.0, 0.75}};
  EXPECT_EQ(r.to_csv(),
            "frame,overlap,hausdorff,masd\n"
            "0,0.500000000,1.000000000,0.250000000\n"
            "1,1.000000000,0.000000000,0.750000000\n"
            "avg,0.750000000,0.500000000,0.500000000\n");
}

TEST(CompareImages, IdenticalImagesScorePerfectly) {
  GridImage img(8, 8);
  img(3, 3) = img(4, 3) = img(3, 4) = 1.0;
  FrameMetrics m = compare_images(img, img);
  EXPECT_EQ(m.overlap, 1.0);
  EXPECT_EQ(m.hausdorff, 0.0);
  EXPECT_EQ(m.masd, 0.0);
  EXPECT_THROW(compare_images(img, GridImage(8, 8)), std::invalid_argument);
}
