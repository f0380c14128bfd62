#include "cinesim/text.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

#ifndef CINESIM_DATA_DIR
#define CINESIM_DATA_DIR "share/cinesim"
#endif

namespace cinesim {
namespace {

std::string lower_trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  for (char c : s) {
    if (is_vowel(c) || c == 'y') return true;
  }
  return false;
}

bool is_consonant_at(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c < 'a' || c > 'z' || is_vowel(c)) return false;
  if (c == 'y') return i == 0 || !is_consonant_at(s, i - 1);
  return true;
}

// Repairs a stem after removing -ing/-ed: undoubles final consonants
// (runn -> run), restores a silent e after short CVC stems (mak -> make)
// and after -at/-bl/-iz (creat -> create).
std::string repair_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant_at(stem, n - 1) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
    return stem;
  }
  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) {
    stem.push_back('e');
    return stem;
  }
  if (n == 3 && is_consonant_at(stem, 0) && !is_consonant_at(stem, 1) && is_consonant_at(stem, 2) &&
      stem[2] != 'w' && stem[2] != 'x' && stem[2] != 'y') {
    stem.push_back('e');
  }
  return stem;
}

bool is_token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '\'' || c == '-';
}

constexpr std::array<std::string_view, 7> kClitics = {"'s", "'t", "'ll", "'re", "'ve", "'d", "'m"};

// Normalizes a raw run of letters/apostrophes/hyphens into a candidate
// token, or returns empty.
std::string normalize_token(std::string_view raw) {
  std::string tok;
  tok.reserve(raw.size());
  for (char c : raw) tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  auto trim_marks = [](std::string& t) {
    std::size_t b = 0, e = t.size();
    while (b < e && (t[b] == '\'' || t[b] == '-')) ++b;
    while (e > b && (t[e - 1] == '\'' || t[e - 1] == '-')) --e;
    t = t.substr(b, e - b);
  };
  trim_marks(tok);
  for (auto clitic : kClitics) {
    if (tok.size() > clitic.size() && ends_with(tok, clitic)) {
      tok.resize(tok.size() - clitic.size());
      break;
    }
  }
  trim_marks(tok);
  return tok;
}

}  // namespace

StopwordSet parse_stopwords(std::string_view text) {
  StopwordSet set;
  for (const auto& line : io::split_lines(text)) {
    auto term = lower_trim(line);
    if (term.empty() || term[0] == '#') continue;
    set.insert(std::move(term));
  }
  return set;
}

StopwordSet load_stopwords(std::span<const std::filesystem::path> paths) {
  StopwordSet merged;
  for (const auto& p : paths) merged.merge(parse_stopwords(io::read_file(p)));
  return merged;
}

LemmaTable LemmaTable::parse(std::string_view tsv) {
  LemmaTable table;
  for (const auto& line : io::split_lines(tsv)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse, "lemma table line without tab: '" + line + "'");
    }
    table.insert(lower_trim(std::string_view(line).substr(0, tab)),
                 lower_trim(std::string_view(line).substr(tab + 1)));
  }
  return table;
}

LemmaTable LemmaTable::load(const std::filesystem::path& path) { return parse(io::read_file(path)); }

void LemmaTable::insert(std::string word, std::string lemma) { table_[std::move(word)] = std::move(lemma); }

std::optional<std::string_view> LemmaTable::find(std::string_view word) const {
  auto it = table_.find(std::string(word));
  if (it == table_.end()) return std::nullopt;
  return std::string_view(it->second);
}

std::string RuleLemmatizer::lemmatize(std::string_view word) const {
  if (auto hit = exceptions_.find(word)) return std::string(*hit);
  std::string w(word);
  const std::size_t n = w.size();
  if (n <= 3) return w;

  if (ends_with(w, "ies") && n > 4) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "sses") || ends_with(w, "shes") || ends_with(w, "ches") || ends_with(w, "xes") ||
      ends_with(w, "zzes")) {
    return w.substr(0, n - 2);
  }
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (w.back() == 's' && w[n - 2] != '\'') return w.substr(0, n - 1);

  if (ends_with(w, "ied") && n > 4) return w.substr(0, n - 3) + "y";
  if (ends_with(w, "ing") && n >= 5) {
    auto stem = w.substr(0, n - 3);
    if (has_vowel(stem) && stem.size() >= 2) return repair_stem(std::move(stem));
  }
  if (ends_with(w, "ed") && n >= 4 && !ends_with(w, "eed")) {
    auto stem = w.substr(0, n - 2);
    if (has_vowel(stem) && stem.size() >= 2) return repair_stem(std::move(stem));
  }
  return w;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("CINESIM_DATA_DIR"); env && *env) return env;
  return CINESIM_DATA_DIR;
}

std::unique_ptr<Lemmatizer> make_default_lemmatizer() {
  return std::make_unique<RuleLemmatizer>(LemmaTable::load(default_data_dir() / "lemma_exceptions.tsv"));
}

StopwordSet load_default_stopwords() {
  const std::array<std::filesystem::path, 2> paths = {default_data_dir() / "stopwords_common.txt",
                                                      default_data_dir() / "stopwords_domain.txt"};
  return load_stopwords(paths);
}

std::vector<std::string> tokenize_text(std::string_view text, const StopwordSet& stopwords,
                                       const Lemmatizer& lemmatizer) {
  std::vector<std::string> tokens;
  // Curly apostrophes (U+2019) count as apostrophes.
  std::string normalized;
  normalized.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
      normalized.push_back('\'');
      i += 2;
    } else {
      normalized.push_back(text[i]);
    }
  }

  std::size_t i = 0;
  const std::size_t n = normalized.size();
  while (i < n) {
    while (i < n && !is_token_char(normalized[i])) ++i;
    std::size_t j = i;
    while (j < n && is_token_char(normalized[j])) {
      // A dash run ("--") separates words.
      if (normalized[j] == '-' && j + 1 < n && normalized[j + 1] == '-') break;
      ++j;
    }
    if (j > i) {
      std::string tok = normalize_token(std::string_view(normalized).substr(i, j - i));
      if (!tok.empty() && tok[0] >= 'a' && tok[0] <= 'z' && !stopwords.contains(tok)) {
        std::string lemma = lemmatizer.lemmatize(tok);
        if (lemma.size() >= 2 && !stopwords.contains(lemma)) tokens.push_back(std::move(lemma));
      }
    }
    i = j;
    while (i < n && normalized[i] == '-') ++i;
  }
  return tokens;
}

TokenStream tokenize_and_lemmatize(const SubtitleDocument& doc, const StopwordSet& stopwords,
                                   const Lemmatizer& lemmatizer) {
  TokenStream stream;
  stream.movie_id = doc.movie_id;
  for (const auto& cue : doc.cues) {
    auto toks = tokenize_text(cue.text, stopwords, lemmatizer);
    stream.tokens.insert(stream.tokens.end(), std::make_move_iterator(toks.begin()),
                         std::make_move_iterator(toks.end()));
  }
  return stream;
}

}  // namespace cinesim
