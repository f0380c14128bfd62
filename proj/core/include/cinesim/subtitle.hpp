#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim {

struct Cue {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;

  bool operator==(const Cue&) const = default;
};

/// Cues sorted by start time, markup already removed.
struct SubtitleDocument {
  std::string movie_id;
  std::vector<Cue> cues;

  /// All cue text joined by newlines.
  std::string full_text() const;
};

struct SrtParseResult {
  SubtitleDocument document;
  std::vector<std::string> warnings;
};

/// Parses SubRip text. Input that is not valid UTF-8 is decoded as Latin-1.
/// Blocks with a malformed timestamp are skipped with a warning; throws
/// Error(kEmptyDocument) when no cue survives.
SrtParseResult parse_srt(std::string_view raw_bytes, std::string movie_id = {});

/// Inverse of parse_srt on the cue list (indices renumbered from 1).
std::string serialize_srt(const SubtitleDocument& doc);

/// Removes tags, bracketed annotations and leading dashes from one cue's
/// text lines; drops lines left empty.
std::string clean_cue_text(std::string_view text);

bool is_valid_utf8(std::string_view bytes) noexcept;
std::string latin1_to_utf8(std::string_view bytes);

}  // namespace cinesim
