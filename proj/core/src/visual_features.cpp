#include "cinesim/visual_features.hpp"

#include "cinesim/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace cinesim {

namespace vf {

const std::array<std::string, kFrameFeatures>& frame_feature_names() {
  static const auto names = [] {
    std::array<std::string, kFrameFeatures> n;
    auto hist = [&](std::size_t base, std::size_t bins, const std::string& prefix) {
      for (std::size_t i = 0; i < bins; ++i) n[base + i] = prefix + "_" + std::to_string(i);
    };
    hist(kRedHist, 8, "r_hist");
    hist(kGreenHist, 8, "g_hist");
    hist(kBlueHist, 8, "b_hist");
    hist(kValueHist, 8, "v_hist");
    hist(kRatioHist, 5, "rgb_ratio_hist");
    hist(kSatHist, 8, "s_hist");
    n[kGrayDiff] = "gray_diff";
    n[kFaceCount] = "n_faces";
    n[kFaceArea] = "per_faces";
    n[kPtpt] = "ptpt";
    n[kFlowMeanMag] = "flow_mean_mag";
    n[kFlowStdMag] = "flow_std_mag";
    n[kShotLength] = "shot_length";
    return n;
  }();
  return names;
}

std::vector<std::string> movie_feature_names() {
  static constexpr const char* kStats[] = {"mean", "std", "std_over_mean", "top10_mean"};
  std::vector<std::string> out;
  for (const auto& f : frame_feature_names()) {
    for (const char* s : kStats) out.push_back(f + "_" + s);
  }
  return out;
}

}  // namespace vf

void color_features(const Frame& frame, FrameFeatureRow& row) {
  std::array<double, 8> r{}, g{}, b{}, v{}, s{};
  std::array<double, 5> ratio{};
  const std::size_t n = frame.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const int R = frame.rgb[3 * i], G = frame.rgb[3 * i + 1], B = frame.rgb[3 * i + 2];
    r[R / 32] += 1;
    g[G / 32] += 1;
    b[B / 32] += 1;
    const long gray = std::min(255L, std::lround(0.299 * R + 0.587 * G + 0.114 * B));
    v[gray / 32] += 1;
    const int mx = std::max({R, G, B});
    const int mn = std::min({R, G, B});
    const double sat = mx == 0 ? 0.0 : static_cast<double>(mx - mn) / mx;
    s[std::min<std::size_t>(7, static_cast<std::size_t>(sat * 8.0))] += 1;
    const int sum = R + G + B;
    if (sum > 0) {
      const double rr = std::clamp(3.0 * mx / sum, 1.0, 3.0);
      ratio[std::min<std::size_t>(4, static_cast<std::size_t>((rr - 1.0) / 0.4))] += 1;
    }
  }
  const double inv = n ? 1.0 / static_cast<double>(n) : 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    row[vf::kRedHist + k] = r[k] * inv;
    row[vf::kGreenHist + k] = g[k] * inv;
    row[vf::kBlueHist + k] = b[k] * inv;
    row[vf::kValueHist + k] = v[k] * inv;
    row[vf::kSatHist + k] = s[k] * inv;
  }
  for (std::size_t k = 0; k < 5; ++k) row[vf::kRatioHist + k] = ratio[k] * inv;
}

double gray_diff(std::span<const std::uint8_t> prev_gray, std::span<const std::uint8_t> cur_gray) {
  if (prev_gray.size() != cur_gray.size()) throw Error(ErrorCode::kDimensionMismatch, "gray_diff frames differ");
  if (cur_gray.empty()) return 0.0;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < cur_gray.size(); ++i) acc += static_cast<std::uint64_t>(std::abs(int{cur_gray[i]} - int{prev_gray[i]}));
  return static_cast<double>(acc) / static_cast<double>(cur_gray.size());
}

double gray_diff(const Frame& prev, const Frame& cur) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw Error(ErrorCode::kDimensionMismatch, "gray_diff frames differ in size");
  }
  return gray_diff(gray_levels(prev), gray_levels(cur));
}

FaceStats face_features(std::span<const FaceBox> boxes, int frame_width, int frame_height) {
  FaceStats out;
  if (boxes.empty()) return out;
  const double frame_area = static_cast<double>(frame_width) * frame_height;
  double acc = 0.0;
  for (const auto& box : boxes) acc += static_cast<double>(box.w) * box.h / frame_area;
  out.count = static_cast<double>(boxes.size());
  out.mean_area_ratio = acc / static_cast<double>(boxes.size());
  return out;
}

double angle_difference(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * M_PI)); }

double circular_mean(std::span<const double> angles) {
  double s = 0.0, c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  return std::atan2(s, c);
}

FlowStats flow_features(const FlowField& field, double denominator_floor) {
  FlowStats out;
  const std::size_t n = field.magnitudes.size();
  if (n == 0) return out;
  const double mean_angle = circular_mean(field.angles);
  double mag_sum = 0.0, dev_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mag_sum += field.magnitudes[i];
    const double d = angle_difference(field.angles[i], mean_angle);
    dev_sum += d * d;
  }
  out.ptpt = mag_sum / std::max(dev_sum, denominator_floor);
  out.mean_magnitude = mag_sum / static_cast<double>(n);
  double var = 0.0;
  for (double m : field.magnitudes) var += (m - out.mean_magnitude) * (m - out.mean_magnitude);
  out.std_magnitude = std::sqrt(var / static_cast<double>(n));
  out.angle_deviation = dev_sum / static_cast<double>(n);
  return out;
}

Vector aggregate(const Matrix& rows, const AggregateOptions& options) {
  if (rows.rows() < 1) throw Error(ErrorCode::kEmptySequence, "aggregate needs at least one frame row");
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();
  const auto top = static_cast<Eigen::Index>(std::ceil(0.1 * static_cast<double>(n)));
  Vector out(d * static_cast<Eigen::Index>(vf::kStatistics));
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = rows(i, j);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double x : col) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    const double disp = options.dispersion == Dispersion::kStdDev ? std::sqrt(var) : var;
    std::partial_sort(col.begin(), col.begin() + top, col.end(), std::greater<>());
    const double top_mean = std::accumulate(col.begin(), col.begin() + top, 0.0) / static_cast<double>(top);
    const Eigen::Index base = j * static_cast<Eigen::Index>(vf::kStatistics);
    out(base) = mean;
    out(base + 1) = disp;
    out(base + 2) = mean == 0.0 ? 0.0 : disp / mean;
    out(base + 3) = top_mean;
  }
  return out;
}

void VisualFeatureExtractor::push(const Frame& raw, std::span<const FaceBox> faces) {
  Frame frame = preprocess(raw, options_.target_width);
  FrameFeatureRow row{};
  color_features(frame, row);
  auto gray = gray_levels(frame);
  const auto fs = face_features(faces, frame.width, frame.height);
  row[vf::kFaceCount] = fs.count;
  row[vf::kFaceArea] = fs.mean_area_ratio;

  ShotSignals signal;
  if (prev_ && prev_->width == frame.width && prev_->height == frame.height) {
    row[vf::kGrayDiff] = gray_diff(prev_gray_, gray);
    const auto flow = flow_features(optical_flow(*prev_, frame, options_.flow));
    row[vf::kPtpt] = flow.ptpt;
    row[vf::kFlowMeanMag] = flow.mean_magnitude;
    row[vf::kFlowStdMag] = flow.std_magnitude;
    signal = shot_signals(prev_gray_, gray, flow.mean_magnitude, options_.shots);
  } else if (prev_) {
    throw Error(ErrorCode::kDimensionMismatch, "frame size changed mid-movie");
  }
  rows_.push_back(row);
  signals_.push_back(signal);
  prev_ = std::move(frame);
  prev_gray_ = std::move(gray);
}

MovieVisualFeatures VisualFeatureExtractor::finish(double fps) const {
  if (rows_.empty()) throw Error(ErrorCode::kEmptySequence, "no frames pushed");
  MovieVisualFeatures out;
  out.shots = detect_shots(signals_, fps, options_.shots);
  out.frame_rows.resize(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(vf::kFrameFeatures));
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    for (std::size_t j = 0; j < vf::kFrameFeatures; ++j) {
      out.frame_rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = rows_[t][j];
    }
    out.frame_rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(vf::kShotLength)) =
        out.shots.frame_shot_length[t];
  }
  out.vector = aggregate(out.frame_rows, options_.aggregate);
  return out;
}

}  // namespace cinesim
