#include "cinesim/image.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace cinesim {

Frame Frame::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Frame f;
  f.width = width;
  f.height = height;
  f.rgb.resize(f.pixel_count() * 3);
  for (std::size_t i = 0; i < f.pixel_count(); ++i) {
    f.rgb[3 * i] = r;
    f.rgb[3 * i + 1] = g;
    f.rgb[3 * i + 2] = b;
  }
  return f;
}

float GrayImage::sample(float x, float y) const {
  x = std::clamp(x, 0.0f, static_cast<float>(width - 1));
  y = std::clamp(y, 0.0f, static_cast<float>(height - 1));
  const int x0 = static_cast<int>(x);
  const int y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const float ax = x - static_cast<float>(x0);
  const float ay = y - static_cast<float>(y0);
  return (1 - ay) * ((1 - ax) * at(x0, y0) + ax * at(x1, y0)) + ay * ((1 - ax) * at(x0, y1) + ax * at(x1, y1));
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::string_view bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return std::string(bytes.substr(start, pos - start));
}

int header_int(std::string_view bytes, std::size_t& pos) {
  const auto tok = header_token(bytes, pos);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw Error(ErrorCode::kUnreadableImage, "bad PPM header field '" + tok + "'");
  }
  return std::stoi(tok);
}

}  // namespace

Frame decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  if (header_token(bytes, pos) != "P6") throw Error(ErrorCode::kUnreadableImage, "not a binary PPM (P6)");
  Frame f;
  f.width = header_int(bytes, pos);
  f.height = header_int(bytes, pos);
  const int maxval = header_int(bytes, pos);
  if (f.width < 1 || f.height < 1 || maxval < 1 || maxval > 255) {
    throw Error(ErrorCode::kUnreadableImage, "unsupported PPM dimensions or maxval");
  }
  ++pos;  // single whitespace before the raster
  const std::size_t need = f.pixel_count() * 3;
  if (bytes.size() < pos + need) throw Error(ErrorCode::kUnreadableImage, "truncated PPM raster");
  f.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
               bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  if (maxval != 255) {
    for (auto& v : f.rgb) v = static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
  }
  return f;
}

Frame read_ppm(const std::filesystem::path& path) {
  try {
    return decode_ppm(io::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw Error(ErrorCode::kUnreadableImage, path.string());
    throw Error(ErrorCode::kUnreadableImage, path.string() + ": " + e.what());
  }
}

std::string encode_ppm(const Frame& frame) {
  std::string out = "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(frame.rgb.data()), frame.rgb.size());
  return out;
}

void write_ppm(const std::filesystem::path& path, const Frame& frame) { io::write_file(path, encode_ppm(frame)); }

Frame resize_bilinear(const Frame& src, int width, int height) {
  if (src.width < 1 || src.height < 1) throw Error(ErrorCode::kUnreadableImage, "empty source image");
  Frame dst;
  dst.width = width;
  dst.height = height;
  dst.timestamp_s = src.timestamp_s;
  dst.rgb.resize(dst.pixel_count() * 3);
  const double sx = static_cast<double>(src.width) / width;
  const double sy = static_cast<double>(src.height) / height;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double ay = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double ax = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - ay) * ((1 - ax) * src.pixel(x0, y0)[c] + ax * src.pixel(x1, y0)[c]) +
                         ay * ((1 - ax) * src.pixel(x0, y1)[c] + ax * src.pixel(x1, y1)[c]);
        dst.pixel(x, y)[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return dst;
}

Frame preprocess(const Frame& raw, int target_width) {
  if (raw.width < 1 || raw.height < 1 || raw.rgb.size() != raw.pixel_count() * 3) {
    throw Error(ErrorCode::kUnreadableImage, "frame has no pixels");
  }
  if (raw.width == target_width) return raw;
  const int height = std::max(1, static_cast<int>(std::lround(static_cast<double>(raw.height) * target_width / raw.width)));
  return resize_bilinear(raw, target_width, height);
}

std::vector<std::uint8_t> gray_levels(const Frame& frame) {
  std::vector<std::uint8_t> out(frame.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = 0.299 * frame.rgb[3 * i] + 0.587 * frame.rgb[3 * i + 1] + 0.114 * frame.rgb[3 * i + 2];
    out[i] = static_cast<std::uint8_t>(std::min(255L, std::lround(v)));
  }
  return out;
}

GrayImage to_gray(const Frame& frame) {
  GrayImage g;
  g.width = frame.width;
  g.height = frame.height;
  g.px.resize(frame.pixel_count());
  for (std::size_t i = 0; i < g.px.size(); ++i) {
    g.px[i] = static_cast<float>(0.299 * frame.rgb[3 * i] + 0.587 * frame.rgb[3 * i + 1] + 0.114 * frame.rgb[3 * i + 2]);
  }
  return g;
}

}  // namespace cinesim
