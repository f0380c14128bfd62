#pragma once

#include "cinesim/subtitle.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cinesim {

struct TokenStream {
  std::string movie_id;
  std::vector<std::string> tokens;
};

using StopwordSet = std::unordered_set<std::string>;

/// One term per line; blank lines and '#' comments ignored; terms lowercased.
StopwordSet parse_stopwords(std::string_view text);
/// Loads and merges several stopword files (typically common + domain).
StopwordSet load_stopwords(std::span<const std::filesystem::path> paths);

/// word -> lemma lookup table, TSV "word<TAB>lemma" per line. A table derived
/// from a full lexical database can be loaded the same way.
class LemmaTable {
 public:
  LemmaTable() = default;
  static LemmaTable parse(std::string_view tsv);
  static LemmaTable load(const std::filesystem::path& path);

  void insert(std::string word, std::string lemma);
  std::optional<std::string_view> find(std::string_view word) const;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::unordered_map<std::string, std::string> table_;
};

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemmatize(std::string_view word) const = 0;
};

/// Suffix rules for -s/-es/-ies plurals and -ing/-ed inflections. The table
/// is consulted first and overrides the rules.
class RuleLemmatizer final : public Lemmatizer {
 public:
  explicit RuleLemmatizer(LemmaTable exceptions = {}) : exceptions_(std::move(exceptions)) {}
  std::string lemmatize(std::string_view word) const override;

 private:
  LemmaTable exceptions_;
};

/// Directory holding the shipped stopword lists and lemma exceptions.
/// CINESIM_DATA_DIR overrides the compiled-in location.
std::filesystem::path default_data_dir();

/// RuleLemmatizer with the shipped exception table.
std::unique_ptr<Lemmatizer> make_default_lemmatizer();
/// Shipped common + domain stopword lists.
StopwordSet load_default_stopwords();

/// Lowercased word tokens: split on anything but letters and internal
/// apostrophes/hyphens, clitics ('s 't 'll 're 've 'd 'm) stripped,
/// lemmatized, stopwords and single letters removed.
std::vector<std::string> tokenize_text(std::string_view text, const StopwordSet& stopwords,
                                       const Lemmatizer& lemmatizer);

TokenStream tokenize_and_lemmatize(const SubtitleDocument& doc, const StopwordSet& stopwords,
                                   const Lemmatizer& lemmatizer);

}  // namespace cinesim
