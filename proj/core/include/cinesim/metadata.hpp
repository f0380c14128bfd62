#pragma once

#include "cinesim/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cinesim {

struct MovieMetadata {
  std::string movie_id;
  std::string title;
  std::vector<std::string> actors;
  std::vector<std::string> directors;
  std::vector<std::string> genres;
  double rating = 0.0;
};

enum class TagKind { kActor, kDirector, kGenre };

std::string_view to_string(TagKind kind) noexcept;

/// Trimmed, lowercased, inner whitespace collapsed. Matching is exact on this key.
std::string normalize_tag(std::string_view raw);

struct Tag {
  TagKind kind = TagKind::kActor;
  std::string key;      // normalized
  std::string display;  // first spelling seen
};

/// Column index over all tags of a collection, ordered by kind then key.
class TagIndex {
 public:
  std::size_t size() const noexcept { return tags_.size(); }
  const std::vector<Tag>& tags() const noexcept { return tags_; }
  std::optional<std::size_t> column(TagKind kind, std::string_view raw_name) const;

  friend TagIndex build_index(std::span<const MovieMetadata> movies);

 private:
  std::vector<Tag> tags_;
  std::unordered_map<std::string, std::size_t> lookup_;  // "<kind>\x1f<key>"
};

TagIndex build_index(std::span<const MovieMetadata> movies);

struct VectorizeResult {
  FeatureMatrix matrix;  // binary, modality "metadata"
  std::vector<std::string> warnings;
};

/// Binary membership matrix. A tag missing from the index throws
/// Error(kUnknownTag) unless `lenient`, in which case it is skipped with a
/// warning.
VectorizeResult vectorize(std::span<const MovieMetadata> movies, const TagIndex& index, bool lenient = false);

/// Deduplicated (by normalized key) label lists in first-seen display form.
std::vector<std::string> dedup_labels(std::span<const std::string> labels);

std::string tag_index_to_tsv(const TagIndex& index);

/// Parses a metadata record {"movie_id","title","actors","directors","genres","rating"}.
MovieMetadata metadata_from_json_text(std::string_view json_text);

}  // namespace cinesim
