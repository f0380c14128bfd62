#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace cinesim {

/// 8-bit RGB raster, row-major interleaved triplets.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  double timestamp_s = 0.0;

  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  const std::uint8_t* pixel(int x, int y) const { return &rgb[3 * (static_cast<std::size_t>(y) * width + x)]; }
  std::uint8_t* pixel(int x, int y) { return &rgb[3 * (static_cast<std::size_t>(y) * width + x)]; }

  static Frame filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Float grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> px;

  float at(int x, int y) const { return px[static_cast<std::size_t>(y) * width + x]; }
  /// Bilinear sample with border clamping.
  float sample(float x, float y) const;
};

/// Decodes binary PPM (P6, maxval <= 255). Throws Error(kUnreadableImage).
Frame decode_ppm(std::string_view bytes);
Frame read_ppm(const std::filesystem::path& path);
std::string encode_ppm(const Frame& frame);
void write_ppm(const std::filesystem::path& path, const Frame& frame);

/// Bilinear resize (pixel-center aligned).
Frame resize_bilinear(const Frame& src, int width, int height);

/// Resizes to target_width keeping the aspect ratio; no-op at that width.
Frame preprocess(const Frame& raw, int target_width = 500);

/// round(0.299 R + 0.587 G + 0.114 B) per pixel.
std::vector<std::uint8_t> gray_levels(const Frame& frame);
GrayImage to_gray(const Frame& frame);

}  // namespace cinesim
