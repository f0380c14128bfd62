#pragma once

#include "cinesim/image.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace cinesim {

/// Per-frame change signals between frame t-1 and t (all zero for t = 0).
struct ShotSignals {
  double changed_fraction = 0.0;   // share of pixels with |delta gray| > pixel_delta
  double mean_flow_magnitude = 0.0;
  double histogram_distance = 0.0; // L1 between normalized 32-bin gray histograms
};

struct ShotOptions {
  int pixel_delta = 30;
  double changed_fraction = 0.45;
  double flow_magnitude = 6.0;
  double histogram_distance = 0.6;
  int votes_required = 2;
  double merge_window_s = 0.5;
};

struct ShotSpan {
  std::size_t begin = 0;  // first frame
  std::size_t end = 0;    // one past the last frame
  double duration_s = 0.0;
};

struct ShotDetection {
  std::vector<std::size_t> cuts;      // frame indices starting a new shot
  std::vector<ShotSpan> shots;
  std::vector<double> frame_shot_length;  // seconds, per frame
};

std::array<double, 32> gray_histogram32(std::span<const std::uint8_t> gray);

/// Signals for a consecutive pair of grayscale frames; flow magnitude is
/// supplied by the caller.
ShotSignals shot_signals(std::span<const std::uint8_t> prev_gray, std::span<const std::uint8_t> cur_gray,
                         double mean_flow_magnitude, const ShotOptions& options = {});

/// Declares a cut at frame t when at least votes_required of the three
/// thresholds fire. A cut within merge_window_s of the previous boundary
/// (sequence start or kept cut) is dropped, as is a final cut leaving a tail no
/// longer than merge_window_s. Frame t lasts 1/fps seconds.
ShotDetection detect_shots(std::span<const ShotSignals> signals, double fps, const ShotOptions& options = {});

}  // namespace cinesim
