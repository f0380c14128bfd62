#pragma once

#include "cinesim/image.hpp"

#include <vector>

namespace cinesim {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Sparse flow over tracked points. magnitudes[i] = |vectors[i]|,
/// angles[i] = atan2(dy, dx) in (-pi, pi].
struct FlowField {
  std::vector<Point2> points;
  std::vector<Point2> vectors;
  std::vector<double> magnitudes;
  std::vector<double> angles;

  std::size_t size() const noexcept { return points.size(); }
  void add(Point2 point, Point2 vector);
};

struct FlowOptions {
  int grid = 16;        // grid x grid tracked points
  int max_level = 3;    // pyramid levels above the base image
  int window = 11;      // odd integration window side
  int iterations = 10;
  double epsilon = 0.01;
  /// Points whose normalized minimum eigenvalue of the structure tensor is
  /// below this are untrackable (flat or 1-D texture).
  double min_eigen = 1e-4;
  /// Mean absolute intensity residual over the window above which a track is
  /// rejected.
  double max_error = 40.0;
};

/// Uniform grid positions keeping a window-sized margin from the borders.
std::vector<Point2> flow_grid(int width, int height, const FlowOptions& options = {});

/// Pyramidal Lucas-Kanade tracking of the grid points from prev to cur on
/// grayscale images. Untrackable points, points leaving the frame and points
/// with excessive residual are dropped.
FlowField optical_flow(const GrayImage& prev, const GrayImage& cur, const FlowOptions& options = {});
FlowField optical_flow(const Frame& prev, const Frame& cur, const FlowOptions& options = {});

}  // namespace cinesim
