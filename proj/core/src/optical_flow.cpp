#include "cinesim/optical_flow.hpp"

#include "cinesim/error.hpp"

#include <algorithm>
#include <cmath>

namespace cinesim {
namespace {

// 5-tap binomial blur then decimation by two.
GrayImage pyr_down(const GrayImage& src) {
  static constexpr float kTaps[5] = {1.f / 16, 4.f / 16, 6.f / 16, 4.f / 16, 1.f / 16};
  const int w = src.width, h = src.height;
  GrayImage tmp{w, h, std::vector<float>(src.px.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.f;
      for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * src.at(std::clamp(x + k, 0, w - 1), y);
      tmp.px[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  GrayImage dst;
  dst.width = (w + 1) / 2;
  dst.height = (h + 1) / 2;
  dst.px.resize(static_cast<std::size_t>(dst.width) * dst.height);
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      float acc = 0.f;
      for (int k = -2; k <= 2; ++k) acc += kTaps[k + 2] * tmp.at(2 * x, std::clamp(2 * y + k, 0, h - 1));
      dst.px[static_cast<std::size_t>(y) * dst.width + x] = acc;
    }
  }
  return dst;
}

struct Gradients {
  GrayImage ix;
  GrayImage iy;
};

Gradients central_gradients(const GrayImage& img) {
  const int w = img.width, h = img.height;
  Gradients g{{w, h, std::vector<float>(img.px.size())}, {w, h, std::vector<float>(img.px.size())}};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      g.ix.px[i] = 0.5f * (img.at(std::min(x + 1, w - 1), y) - img.at(std::max(x - 1, 0), y));
      g.iy.px[i] = 0.5f * (img.at(x, std::min(y + 1, h - 1)) - img.at(x, std::max(y - 1, 0)));
    }
  }
  return g;
}

std::vector<GrayImage> build_pyramid(const GrayImage& base, int max_level) {
  std::vector<GrayImage> pyr{base};
  for (int l = 1; l <= max_level; ++l) {
    if (pyr.back().width < 8 || pyr.back().height < 8) break;
    pyr.push_back(pyr_down(pyr.back()));
  }
  return pyr;
}

}  // namespace

void FlowField::add(Point2 point, Point2 vector) {
  points.push_back(point);
  vectors.push_back(vector);
  magnitudes.push_back(std::hypot(vector.x, vector.y));
  angles.push_back(std::atan2(vector.y, vector.x));
}

std::vector<Point2> flow_grid(int width, int height, const FlowOptions& options) {
  std::vector<Point2> pts;
  const double margin = options.window;
  const double span_x = width - 1 - 2 * margin;
  const double span_y = height - 1 - 2 * margin;
  if (options.grid < 1 || span_x < 0 || span_y < 0) return pts;
  const double step_x = options.grid > 1 ? span_x / (options.grid - 1) : 0.0;
  const double step_y = options.grid > 1 ? span_y / (options.grid - 1) : 0.0;
  for (int j = 0; j < options.grid; ++j) {
    for (int i = 0; i < options.grid; ++i) pts.push_back({margin + i * step_x, margin + j * step_y});
  }
  return pts;
}

FlowField optical_flow(const GrayImage& prev, const GrayImage& cur, const FlowOptions& options) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw Error(ErrorCode::kDimensionMismatch, "optical flow frames differ in size");
  }
  FlowField field;
  const auto points = flow_grid(prev.width, prev.height, options);
  if (points.empty()) return field;

  const auto prev_pyr = build_pyramid(prev, options.max_level);
  const auto cur_pyr = build_pyramid(cur, static_cast<int>(prev_pyr.size()) - 1);
  std::vector<Gradients> grads;
  grads.reserve(prev_pyr.size());
  for (const auto& level : prev_pyr) grads.push_back(central_gradients(level));

  const int half = options.window / 2;
  const int top = static_cast<int>(prev_pyr.size()) - 1;
  const double area = static_cast<double>(options.window) * options.window;
  std::vector<float> win_i, win_ix, win_iy;

  for (const auto& p : points) {
    double gx = 0.0, gy = 0.0;  // guess propagated from coarser levels
    bool lost = false;
    for (int level = top; level >= 0 && !lost; --level) {
      const double scale = 1.0 / (1 << level);
      const double px = p.x * scale, py = p.y * scale;
      const auto& I = prev_pyr[static_cast<std::size_t>(level)];
      const auto& J = cur_pyr[static_cast<std::size_t>(level)];
      const auto& G = grads[static_cast<std::size_t>(level)];

      win_i.clear();
      win_ix.clear();
      win_iy.clear();
      double gxx = 0, gxy = 0, gyy = 0;
      for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
          const auto x = static_cast<float>(px + dx), y = static_cast<float>(py + dy);
          const float ix = G.ix.sample(x, y), iy = G.iy.sample(x, y);
          win_i.push_back(I.sample(x, y));
          win_ix.push_back(ix);
          win_iy.push_back(iy);
          gxx += ix * ix;
          gxy += ix * iy;
          gyy += iy * iy;
        }
      }
      const double det = gxx * gyy - gxy * gxy;
      const double min_eig = 0.5 * (gxx + gyy - std::sqrt((gxx - gyy) * (gxx - gyy) + 4 * gxy * gxy)) / area;
      if (min_eig < options.min_eigen || det <= 0.0) {
        lost = true;
        break;
      }

      double vx = 0.0, vy = 0.0;
      for (int it = 0; it < options.iterations; ++it) {
        double bx = 0, by = 0;
        std::size_t n = 0;
        for (int dy = -half; dy <= half; ++dy) {
          for (int dx = -half; dx <= half; ++dx, ++n) {
            const float jv = J.sample(static_cast<float>(px + gx + vx + dx), static_cast<float>(py + gy + vy + dy));
            const double diff = win_i[n] - jv;
            bx += diff * win_ix[n];
            by += diff * win_iy[n];
          }
        }
        const double ex = (gyy * bx - gxy * by) / det;
        const double ey = (gxx * by - gxy * bx) / det;
        vx += ex;
        vy += ey;
        if (ex * ex + ey * ey < options.epsilon * options.epsilon) break;
      }
      if (level > 0) {
        gx = 2.0 * (gx + vx);
        gy = 2.0 * (gy + vy);
      } else {
        gx += vx;
        gy += vy;
      }
    }
    if (lost) continue;

    const double qx = p.x + gx, qy = p.y + gy;
    if (qx < 0 || qy < 0 || qx > prev.width - 1 || qy > prev.height - 1) continue;
    double err = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
      for (int dx = -half; dx <= half; ++dx) {
        err += std::abs(prev.sample(static_cast<float>(p.x + dx), static_cast<float>(p.y + dy)) -
                        cur.sample(static_cast<float>(qx + dx), static_cast<float>(qy + dy)));
      }
    }
    if (err / area > options.max_error) continue;
    field.add(p, {gx, gy});
  }
  return field;
}

FlowField optical_flow(const Frame& prev, const Frame& cur, const FlowOptions& options) {
  return optical_flow(to_gray(prev), to_gray(cur), options);
}

}  // namespace cinesim
