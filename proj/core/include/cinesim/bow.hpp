#pragma once

#include "cinesim/text.hpp"
#include "cinesim/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cinesim {

struct Vocabulary {
  std::vector<std::string> terms;  // index -> term
  std::unordered_map<std::string, std::size_t> term_to_index;
  std::vector<std::size_t> doc_freq;         // n_i: documents containing term i
  std::vector<std::size_t> collection_freq;  // total occurrences of term i

  std::size_t size() const noexcept { return terms.size(); }
  std::optional<std::size_t> index_of(const std::string& term) const;
};

struct BowEntry {
  std::size_t term = 0;
  std::uint32_t count = 0;

  bool operator==(const BowEntry&) const = default;
};

/// Sparse document x term counts. Each row is sorted by term index and holds
/// only positive counts.
struct BowMatrix {
  std::vector<std::string> doc_ids;
  std::size_t n_terms = 0;
  std::vector<std::vector<BowEntry>> rows;

  std::size_t n_docs() const noexcept { return rows.size(); }
  std::uint64_t doc_length(std::size_t d) const;
  std::uint64_t total_tokens() const;
  std::uint32_t count(std::size_t doc, std::size_t term) const;
  Matrix dense() const;
};

struct BowOptions {
  std::size_t min_collection_freq = 5;
  double max_doc_ratio = 0.5;
};

struct Corpus {
  Vocabulary vocabulary;
  BowMatrix bow;
};

/// Counts terms, drops those with collection frequency below
/// min_collection_freq or appearing in more than max_doc_ratio * N documents,
/// and indexes the survivors in lexicographic order. Rows follow input order.
Corpus build_bow(std::span<const TokenStream> streams, const BowOptions& options = {});

// Persistence: vocabulary TSV (term, index, doc_freq, collection_freq with a
// header row), sparse triplet CSV (doc_index, term_index, count) and a JSON
// list of doc ids.
std::string vocabulary_to_tsv(const Vocabulary& vocab);
Vocabulary vocabulary_from_tsv(std::string_view text);
std::string bow_to_triplets_csv(const BowMatrix& bow);
BowMatrix bow_from_triplets_csv(std::string_view text, std::vector<std::string> doc_ids, std::size_t n_terms);
std::string doc_ids_to_json(std::span<const std::string> ids);
std::vector<std::string> doc_ids_from_json(std::string_view text);

void save_corpus(const std::filesystem::path& dir, const Corpus& corpus);
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace cinesim
