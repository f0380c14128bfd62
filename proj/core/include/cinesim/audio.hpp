#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim {

enum class AudioEvent {
  kMusic,
  kSpeech,
  kEnvLowEnergy,
  kEnvAbrupt,
  kEnvConstantHigh,
  kGunshotsExplosions,
  kFights,
  kScreams,
};

enum class MusicGenre { kJazz, kClassical, kCountry, kBlues, kElectronic, kRap, kReggae, kRock };

inline constexpr std::size_t kAudioEventClasses = 8;
inline constexpr std::size_t kMusicGenreClasses = 8;
inline constexpr double kSegmentSeconds = 2.0;

/// Wire names, in vector-column order.
const std::array<std::string_view, kAudioEventClasses>& audio_event_names();
const std::array<std::string_view, kMusicGenreClasses>& music_genre_names();

/// Throws Error(kUnknownLabel) for names outside the schema.
AudioEvent parse_audio_event(std::string_view name);
MusicGenre parse_music_genre(std::string_view name);

struct Segment {
  std::size_t index = 0;
  AudioEvent event = AudioEvent::kSpeech;
  std::optional<MusicGenre> genre;  // present iff event == kMusic
};

struct SegmentLabels {
  std::string movie_id;
  std::vector<Segment> segments;
};

/// Parses labels.json: {"movie_id": ..., "segments": [{"i": 0, "event": "music", "genre": "rock"}, ...]}.
SegmentLabels parse_segment_labels(std::string_view json_text);

using AudioEventVector = std::array<double, kAudioEventClasses>;
using MusicGenreVector = std::array<double, kMusicGenreClasses>;

struct AudioProportions {
  AudioEventVector events{};
  /// Over music segments only; all zero when the movie has no music.
  MusicGenreVector genres{};
};

/// Throws Error(kEmptySequence) for no segments and Error(kUnknownLabel) when
/// a genre is missing on a music segment or present on another event.
AudioProportions aggregate_labels(const SegmentLabels& labels);

}  // namespace cinesim
