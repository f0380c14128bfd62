#include "cinesim/audio.hpp"

#include "cinesim/error.hpp"

#include <nlohmann/json.hpp>

namespace cinesim {

const std::array<std::string_view, kAudioEventClasses>& audio_event_names() {
  static constexpr std::array<std::string_view, kAudioEventClasses> kNames = {
      "music", "speech", "env-low-energy", "env-abrupt", "env-constant-high", "gunshots-explosions", "fights", "screams"};
  return kNames;
}

const std::array<std::string_view, kMusicGenreClasses>& music_genre_names() {
  static constexpr std::array<std::string_view, kMusicGenreClasses> kNames = {
      "jazz", "classical", "country", "blues", "electronic", "rap", "reggae", "rock"};
  return kNames;
}

AudioEvent parse_audio_event(std::string_view name) {
  const auto& names = audio_event_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<AudioEvent>(i);
  }
  throw Error(ErrorCode::kUnknownLabel, "audio event '" + std::string(name) + "'");
}

MusicGenre parse_music_genre(std::string_view name) {
  const auto& names = music_genre_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<MusicGenre>(i);
  }
  throw Error(ErrorCode::kUnknownLabel, "music genre '" + std::string(name) + "'");
}

SegmentLabels parse_segment_labels(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("labels JSON: ") + e.what());
  }
  SegmentLabels labels;
  labels.movie_id = doc.value("movie_id", "");
  if (!doc.contains("segments") || !doc["segments"].is_array()) {
    throw Error(ErrorCode::kParse, "labels JSON needs a segments array");
  }
  std::size_t position = 0;
  for (const auto& s : doc["segments"]) {
    Segment seg;
    seg.index = s.contains("i") ? s["i"].get<std::size_t>() : position;
    seg.event = parse_audio_event(s.at("event").get<std::string>());
    if (s.contains("genre") && !s["genre"].is_null()) seg.genre = parse_music_genre(s["genre"].get<std::string>());
    labels.segments.push_back(seg);
    ++position;
  }
  return labels;
}

AudioProportions aggregate_labels(const SegmentLabels& labels) {
  if (labels.segments.empty()) {
    throw Error(ErrorCode::kEmptySequence, "no audio segments for '" + labels.movie_id + "'");
  }
  AudioProportions out;
  std::size_t music = 0;
  for (const auto& seg : labels.segments) {
    const bool is_music = seg.event == AudioEvent::kMusic;
    if (is_music != seg.genre.has_value()) {
      throw Error(ErrorCode::kUnknownLabel, "segment " + std::to_string(seg.index) + " of '" + labels.movie_id +
                                                (is_music ? "' is music without a genre" : "' has a genre but is not music"));
    }
    out.events[static_cast<std::size_t>(seg.event)] += 1.0;
    if (is_music) {
      out.genres[static_cast<std::size_t>(*seg.genre)] += 1.0;
      ++music;
    }
  }
  for (auto& e : out.events) e /= static_cast<double>(labels.segments.size());
  if (music > 0) {
    for (auto& g : out.genres) g /= static_cast<double>(music);
  }
  return out;
}

}  // namespace cinesim
