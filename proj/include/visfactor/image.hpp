#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace visfactor {

/// 8-bit grayscale raster, row-major, 0 = black, 255 = white.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 255);

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool empty() const noexcept { return width == 0 || height == 0; }
  /// Copy of the w x h window whose top-left corner is (x, y).
  Image crop(int x, int y, int w, int h) const;
  /// Rotated clockwise by k quarter turns (k taken mod 4).
  Image rotated(int k) const;

  friend bool operator==(const Image&, const Image&) = default;
};

/// Pixels darker than `threshold`.
std::size_t count_dark(const Image& img, std::uint8_t threshold = 128);

/// Deterministic PNG encoding (fixed compression level, no metadata chunks).
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(const std::vector<std::uint8_t>& bytes);
void write_png(const Image& img, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

}  // namespace visfactor
