#include "cinesim/shots.hpp"

#include "cinesim/error.hpp"

#include <cmath>
#include <cstdlib>

namespace cinesim {

std::array<double, 32> gray_histogram32(std::span<const std::uint8_t> gray) {
  std::array<double, 32> h{};
  for (auto v : gray) h[v / 8] += 1.0;
  if (!gray.empty()) {
    for (auto& b : h) b /= static_cast<double>(gray.size());
  }
  return h;
}

ShotSignals shot_signals(std::span<const std::uint8_t> prev_gray, std::span<const std::uint8_t> cur_gray,
                         double mean_flow_magnitude, const ShotOptions& options) {
  if (prev_gray.size() != cur_gray.size()) throw Error(ErrorCode::kDimensionMismatch, "shot signal frames differ");
  ShotSignals s;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < cur_gray.size(); ++i) {
    if (std::abs(int{cur_gray[i]} - int{prev_gray[i]}) > options.pixel_delta) ++changed;
  }
  s.changed_fraction = cur_gray.empty() ? 0.0 : static_cast<double>(changed) / static_cast<double>(cur_gray.size());
  s.mean_flow_magnitude = mean_flow_magnitude;
  const auto a = gray_histogram32(prev_gray);
  const auto b = gray_histogram32(cur_gray);
  for (std::size_t k = 0; k < a.size(); ++k) s.histogram_distance += std::abs(a[k] - b[k]);
  return s;
}

ShotDetection detect_shots(std::span<const ShotSignals> signals, double fps, const ShotOptions& options) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  ShotDetection out;
  const std::size_t n = signals.size();
  const double frame_s = 1.0 / fps;
  std::size_t last_cut = 0;
  for (std::size_t t = 1; t < n; ++t) {
    const auto& s = signals[t];
    const int votes = (s.changed_fraction > options.changed_fraction) + (s.mean_flow_magnitude > options.flow_magnitude) +
                      (s.histogram_distance > options.histogram_distance);
    if (votes < options.votes_required) continue;
    if (static_cast<double>(t - last_cut) * frame_s <= options.merge_window_s + 1e-9) continue;
    out.cuts.push_back(t);
    last_cut = t;
  }
  if (!out.cuts.empty() && static_cast<double>(n - last_cut) * frame_s <= options.merge_window_s + 1e-9) {
    out.cuts.pop_back();
  }

  std::size_t begin = 0;
  auto close = [&](std::size_t end) {
    if (end > begin) out.shots.push_back({begin, end, static_cast<double>(end - begin) * frame_s});
    begin = end;
  };
  for (auto c : out.cuts) close(c);
  close(n);

  out.frame_shot_length.assign(n, 0.0);
  for (const auto& shot : out.shots) {
    for (std::size_t t = shot.begin; t < shot.end; ++t) out.frame_shot_length[t] = shot.duration_s;
  }
  return out;
}

}  // namespace cinesim
