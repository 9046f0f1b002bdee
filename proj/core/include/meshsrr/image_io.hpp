#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "meshsrr/grid_image.hpp"

namespace meshsrr {

inline constexpr std::uint32_t kPgmMaxval = 65535;

/// Grid image quantized to 16 bits: value ~ offset + scale * level.
struct QuantizedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint16_t> levels;  // row-major, same order as GridImage
  double offset = 0.0;
  double scale = 0.0;

  bool operator==(const QuantizedImage&) const = default;
};

// Affine map of [min, max] onto [0, 65535]; a constant image maps to 0 with
// scale 0.
QuantizedImage quantize(const GridImage& img);
GridImage dequantize(const QuantizedImage& q);

// Binary P5 with maxval 65535 (big-endian samples). The top row of the file
// is the last grid row so images display with y pointing up. The sidecar
// `<path>.scale` holds "PGMSCALE 1", "offset <v>", "scale <v>".
void write_pgm16(const std::filesystem::path& path, const QuantizedImage& q);
QuantizedImage read_pgm16(const std::filesystem::path& path);

void save_grid_image(const std::filesystem::path& path, const GridImage& img);
GridImage load_grid_image(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace meshsrr
