#pragma once

#include "cinesim/image.hpp"
#include "cinesim/optical_flow.hpp"
#include "cinesim/shots.hpp"
#include "cinesim/types.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cinesim {

/// Column layout of a frame feature row.
namespace vf {
inline constexpr std::size_t kRedHist = 0;      // 0-7
inline constexpr std::size_t kGreenHist = 8;    // 8-15
inline constexpr std::size_t kBlueHist = 16;    // 16-23
inline constexpr std::size_t kValueHist = 24;   // 24-31
inline constexpr std::size_t kRatioHist = 32;   // 32-36
inline constexpr std::size_t kSatHist = 37;     // 37-44
inline constexpr std::size_t kGrayDiff = 45;
inline constexpr std::size_t kFaceCount = 46;
inline constexpr std::size_t kFaceArea = 47;
inline constexpr std::size_t kPtpt = 48;
inline constexpr std::size_t kFlowMeanMag = 49;
inline constexpr std::size_t kFlowStdMag = 50;
inline constexpr std::size_t kShotLength = 51;
inline constexpr std::size_t kFrameFeatures = 52;
inline constexpr std::size_t kStatistics = 4;
inline constexpr std::size_t kMovieFeatures = kFrameFeatures * kStatistics;  // 208

/// Column names, e.g. "r_hist_0" or "flow_std_mag".
const std::array<std::string, kFrameFeatures>& frame_feature_names();
/// "<feature>_<stat>" names of the 208-dim movie vector, feature-major.
std::vector<std::string> movie_feature_names();
}  // namespace vf

using FrameFeatureRow = std::array<double, vf::kFrameFeatures>;

struct FaceBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
};

/// Fills indices 0-44: R, G, B, gray-value and saturation 8-bin histograms,
/// and the 5-bin histogram of max(R,G,B)/mean(R,G,B) clamped to [1, 3].
/// Histograms are normalized by the pixel count; black pixels have no ratio
/// and are left out of that histogram, whose mass is then the non-black share.
void color_features(const Frame& frame, FrameFeatureRow& row);

/// Mean |gray(cur) - gray(prev)| over pixels.
double gray_diff(const Frame& prev, const Frame& cur);
double gray_diff(std::span<const std::uint8_t> prev_gray, std::span<const std::uint8_t> cur_gray);

struct FaceStats {
  double count = 0.0;
  double mean_area_ratio = 0.0;
};

FaceStats face_features(std::span<const FaceBox> boxes, int frame_width, int frame_height);

struct FlowStats {
  double ptpt = 0.0;
  double mean_magnitude = 0.0;
  double std_magnitude = 0.0;
  double angle_deviation = 0.0;  // (1/N) sum delta(phi_i, mean phi)^2
};

/// Camera-motion confidence sum F_i / max(sum delta(phi_i, mean phi)^2, floor)
/// with mean phi the circular mean and delta wrapped into [0, pi]; plus the
/// magnitude mean and population standard deviation. Empty field -> zeros.
FlowStats flow_features(const FlowField& field, double denominator_floor = 1e-4);

/// Smallest absolute angle between a and b, in [0, pi].
double angle_difference(double a, double b);
double circular_mean(std::span<const double> angles);

enum class Dispersion { kStdDev, kVariance };

struct AggregateOptions {
  Dispersion dispersion = Dispersion::kStdDev;
};

/// Per column: mean, dispersion, dispersion / mean (0 when the mean is 0) and
/// the mean of the ceil(0.1 n) largest values. Output is feature-major.
Vector aggregate(const Matrix& rows, const AggregateOptions& options = {});

struct VisualOptions {
  int target_width = 500;
  FlowOptions flow;
  ShotOptions shots;
  AggregateOptions aggregate;
};

struct MovieVisualFeatures {
  Matrix frame_rows;  // n_frames x 52
  Vector vector;      // 208
  ShotDetection shots;
};

/// Streams sampled frames of one movie in temporal order and produces the
/// per-frame rows, shot lengths and the aggregated movie vector.
class VisualFeatureExtractor {
 public:
  explicit VisualFeatureExtractor(VisualOptions options = {}) : options_(std::move(options)) {}

  /// `frame` is preprocessed to the target width; face boxes are in the
  /// coordinates of the preprocessed frame.
  void push(const Frame& frame, std::span<const FaceBox> faces);
  std::size_t frames() const noexcept { return rows_.size(); }
  MovieVisualFeatures finish(double fps) const;

 private:
  VisualOptions options_;
  std::optional<Frame> prev_;
  std::vector<std::uint8_t> prev_gray_;
  std::vector<FrameFeatureRow> rows_;
  std::vector<ShotSignals> signals_;
};

}  // namespace cinesim
