#include "meshsrr/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include <fmt/format.h>

#include "meshsrr/error.hpp"

namespace meshsrr {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".scale");
}

QuantizedImage quantize(const GridImage& img) {
  QuantizedImage q;
  q.width = img.width();
  q.height = img.height();
  q.levels.assign(img.size(), 0);
  if (img.empty()) return q;
  const double lo = min_value(img);
  const double hi = max_value(img);
  q.offset = lo;
  if (hi > lo) {
    const double range = hi - lo;
    q.scale = range / static_cast<double>(kPgmMaxval);
    for (std::size_t k = 0; k < img.size(); ++k) {
      double level = std::round((img[k] - lo) / range * static_cast<double>(kPgmMaxval));
      q.levels[k] = static_cast<std::uint16_t>(std::clamp(level, 0.0, static_cast<double>(kPgmMaxval)));
    }
  }
  return q;
}

GridImage dequantize(const QuantizedImage& q) {
  GridImage out(q.width, q.height);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = q.offset + q.scale * q.levels[k];
  return out;
}

void write_pgm16(const std::filesystem::path& path, const QuantizedImage& q) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << "P5\n" << q.width << ' ' << q.height << '\n' << kPgmMaxval << '\n';
  std::vector<char> row(2 * q.width);
  for (std::size_t r = 0; r < q.height; ++r) {
    std::size_t j = q.height - 1 - r;
    for (std::size_t i = 0; i < q.width; ++i) {
      std::uint16_t v = q.levels[j * q.width + i];
      row[2 * i] = static_cast<char>(v >> 8);
      row[2 * i + 1] = static_cast<char>(v & 0xff);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));

  std::ofstream side(sidecar_path(path));
  if (!side) throw IoError(fmt::format("cannot write sidecar for '{}'", path.string()));
  side << fmt::format("PGMSCALE 1\noffset {}\nscale {}\n", q.offset, q.scale);
  if (!side) throw IoError(fmt::format("failed writing sidecar for '{}'", path.string()));
}

QuantizedImage read_pgm16(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  if (header_token(in) != "P5") throw IoError(fmt::format("'{}' is not a binary PGM", path.string()));
  QuantizedImage q;
  try {
    q.width = std::stoul(header_token(in));
    q.height = std::stoul(header_token(in));
    if (std::stoul(header_token(in)) != kPgmMaxval) {
      throw IoError(fmt::format("'{}': only maxval 65535 is supported", path.string()));
    }
  } catch (const std::logic_error&) {
    throw IoError(fmt::format("'{}': malformed PGM header", path.string()));
  }
  q.levels.assign(q.width * q.height, 0);
  std::vector<unsigned char> row(2 * q.width);
  for (std::size_t r = 0; r < q.height; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()))) {
      throw IoError(fmt::format("'{}': truncated pixel data", path.string()));
    }
    std::size_t j = q.height - 1 - r;
    for (std::size_t i = 0; i < q.width; ++i) {
      q.levels[j * q.width + i] = static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1]);
    }
  }

  // Without a sidecar, levels map onto [0, 1].
  q.offset = 0.0;
  q.scale = 1.0 / static_cast<double>(kPgmMaxval);
  std::ifstream side(sidecar_path(path));
  if (side) {
    std::string tag, key_offset, key_scale;
    int version = 0;
    if (!(side >> tag >> version >> key_offset >> q.offset >> key_scale >> q.scale) ||
        tag != "PGMSCALE" || version != 1 || key_offset != "offset" || key_scale != "scale") {
      throw IoError(fmt::format("'{}': malformed sidecar", sidecar_path(path).string()));
    }
  }
  return q;
}

void save_grid_image(const std::filesystem::path& path, const GridImage& img) {
  write_pgm16(path, quantize(img));
}

GridImage load_grid_image(const std::filesystem::path& path) { return dequantize(read_pgm16(path)); }

}  // namespace meshsrr
