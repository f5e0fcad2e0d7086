#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dslic::png {

struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 or 3
  int bit_depth = 0;  // 8 or 16
  std::vector<std::uint16_t> samples;  // width * height * channels
};

bool has_signature(const std::filesystem::path& path);

/// Any PNG flattened to 8-bit RGB (palette expanded, alpha dropped).
Raster read_rgb8(const std::filesystem::path& path);

/// Greyscale PNG at its native depth (<8-bit expanded to 8). Colour PNGs are
/// rejected.
Raster read_grey(const std::filesystem::path& path);

void write(const std::filesystem::path& path, const Raster& raster);

}  // namespace dslic::png
