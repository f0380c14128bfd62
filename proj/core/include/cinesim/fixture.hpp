#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace cinesim::fixture {

/// 12 movies in 3 interleaved clusters with subtitles, frames, faces, audio
/// labels, metadata and a tag-matrix ground truth. Returns the manifest path.
std::filesystem::path write_cluster_dataset(const std::filesystem::path& dir, std::uint64_t seed = 42);

/// `movies` movies whose ground truth blends a genre signal (also carried by
/// metadata) with an independent content signal carried by subtitles and audio
/// labels. No frames. Returns the manifest path.
std::filesystem::path write_boost_dataset(const std::filesystem::path& dir, std::uint64_t seed = 42,
                                          std::size_t movies = 20, double metadata_share = 0.5);

/// Pronounceable pseudo-word that survives tokenization and lemmatization unchanged.
std::string pseudo_word(std::size_t index);

}  // namespace cinesim::fixture
