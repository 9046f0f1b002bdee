#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include <gtest/gtest.h>

#include "meshsrr/error.hpp"
#include "meshsrr/image_io.hpp"
#include "oracles.hpp"

using namespace meshsrr;
namespace fs = std::filesystem;

namespace {

class ImageIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("meshsrr_image_io_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Quantize, ConstantImageMapsToZero) {
  QuantizedImage q = quantize(GridImage(3, 2, 4.5));
  EXPECT_EQ(q.scale, 0.0);
  EXPECT_EQ(q.offset, 4.5);
  for (auto l : q.levels) EXPECT_EQ(l, 0);
  EXPECT_EQ(dequantize(q), GridImage(3, 2, 4.5));
}

TEST_F(ImageIo, RoundTripWithinHalfAQuantizationStep) {
  std::mt19937_64 rng(2);
  GridImage img = oracle::random_image(13, 7, rng);
  fs::path p = dir_ / "a.pgm";
  save_grid_image(p, img);
  EXPECT_TRUE(fs::exists(sidecar_path(p)));
  GridImage back = load_grid_image(p);
  double range = max_value(img) - min_value(img);
  EXPECT_LE(max_abs_diff(img, back), 0.5 * range / kPgmMaxval * (1.0 + 1e-9));
  EXPECT_EQ(read_pgm16(p), quantize(img));
}

TEST_F(ImageIo, FileRowsRunTopDown) {
  GridImage img(2, 2);
  img(0, 1) = 1.0;  // top-left when displayed
  fs::path p = dir_ / "b.pgm";
  save_grid_image(p, img);
  auto bytes = read_bytes(p);
  std::string header = "P5\n2 2\n65535\n";
  ASSERT_EQ(bytes.size(), header.size() + 8);
  EXPECT_EQ(bytes[header.size()], 0xff);
  EXPECT_EQ(bytes[header.size() + 1], 0xff);
  EXPECT_EQ(bytes[header.size() + 4], 0x00);
}

TEST_F(ImageIo, MissingSidecarGivesUnitRange) {
  GridImage img(4, 1);
  img(3, 0) = 10.0;
  fs::path p = dir_ / "c.pgm";
  save_grid_image(p, img);
  fs::remove(sidecar_path(p));
  GridImage back = load_grid_image(p);
  EXPECT_EQ(back(0, 0), 0.0);
  EXPECT_EQ(back(3, 0), 1.0);
}

TEST_F(ImageIo, RejectsBadFiles) {
  fs::path p = dir_ / "bad.pgm";
  std::ofstream(p) << "P2\n1 1\n255\n0\n";
  EXPECT_THROW(load_grid_image(p), IoError);
  std::ofstream(p, std::ios::binary) << "P5\n4 4\n65535\n\x01\x02";
  EXPECT_THROW(load_grid_image(p), IoError);
  EXPECT_THROW(load_grid_image(dir_ / "missing.pgm"), IoError);
}
