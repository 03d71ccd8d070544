#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace padeval::png {

/// 8-bit RGB raster, rows top to bottom, no padding.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 3;
  }
};

/// Throws IoError when libpng rejects the image.
std::vector<std::uint8_t> encode(const RgbImage& img);

/// Returns false for anything that is not a decodable PNG.
bool decode(std::span<const std::uint8_t> bytes, RgbImage& out);

}  // namespace padeval::png
