#include "cinesim/bow.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

namespace cinesim {

std::optional<std::size_t> Vocabulary::index_of(const std::string& term) const {
  auto it = term_to_index.find(term);
  if (it == term_to_index.end()) return std::nullopt;
  return it->second;
}

std::uint64_t BowMatrix::doc_length(std::size_t d) const {
  std::uint64_t n = 0;
  for (const auto& e : rows.at(d)) n += e.count;
  return n;
}

std::uint64_t BowMatrix::total_tokens() const {
  std::uint64_t n = 0;
  for (std::size_t d = 0; d < rows.size(); ++d) n += doc_length(d);
  return n;
}

std::uint32_t BowMatrix::count(std::size_t doc, std::size_t term) const {
  const auto& row = rows.at(doc);
  auto it = std::lower_bound(row.begin(), row.end(), term,
                             [](const BowEntry& e, std::size_t t) { return e.term < t; });
  return (it != row.end() && it->term == term) ? it->count : 0;
}

Matrix BowMatrix::dense() const {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n_docs()), static_cast<Eigen::Index>(n_terms));
  for (std::size_t d = 0; d < rows.size(); ++d) {
    for (const auto& e : rows[d]) m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(e.term)) = e.count;
  }
  return m;
}

Corpus build_bow(std::span<const TokenStream> streams, const BowOptions& options) {
  if (streams.empty()) throw Error(ErrorCode::kInvalidArgument, "build_bow needs at least one document");
  if (!(options.max_doc_ratio > 0.0 && options.max_doc_ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_doc_ratio must be in (0, 1]");
  }

  // std::map keeps terms lexicographically ordered for stable indices.
  std::vector<std::map<std::string, std::uint32_t>> per_doc(streams.size());
  std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // term -> (df, cf)
  for (std::size_t d = 0; d < streams.size(); ++d) {
    for (const auto& tok : streams[d].tokens) ++per_doc[d][tok];
    for (const auto& [term, c] : per_doc[d]) {
      auto& s = stats[term];
      s.first += 1;
      s.second += c;
    }
  }

  const double n_docs = static_cast<double>(streams.size());
  Corpus corpus;
  auto& vocab = corpus.vocabulary;
  for (const auto& [term, s] : stats) {
    const auto [df, cf] = s;
    if (cf < options.min_collection_freq) continue;
    if (static_cast<double>(df) > options.max_doc_ratio * n_docs) continue;
    vocab.term_to_index.emplace(term, vocab.terms.size());
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(df);
    vocab.collection_freq.push_back(cf);
  }
  if (vocab.terms.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "frequency filtering removed every term");
  }

  auto& bow = corpus.bow;
  bow.n_terms = vocab.size();
  bow.rows.resize(streams.size());
  for (std::size_t d = 0; d < streams.size(); ++d) {
    bow.doc_ids.push_back(streams[d].movie_id);
    for (const auto& [term, c] : per_doc[d]) {
      if (auto idx = vocab.index_of(term)) bow.rows[d].push_back(BowEntry{*idx, c});
    }
  }
  return corpus;
}

std::string vocabulary_to_tsv(const Vocabulary& vocab) {
  std::string out = "term\tindex\tdoc_freq\tcollection_freq\n";
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out += vocab.terms[i] + '\t' + std::to_string(i) + '\t' + std::to_string(vocab.doc_freq[i]) + '\t' +
           std::to_string(vocab.collection_freq[i]) + '\n';
  }
  return out;
}

Vocabulary vocabulary_from_tsv(std::string_view text) {
  const auto lines = io::split_lines(text);
  Vocabulary vocab;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::vector<std::string> f;
    std::size_t start = 0;
    const auto& line = lines[li];
    for (;;) {
      auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != 4) throw Error(ErrorCode::kParse, "vocabulary line " + std::to_string(li + 1));
    const auto idx = std::stoull(f[1]);
    if (idx != vocab.size()) throw Error(ErrorCode::kParse, "vocabulary indices must be dense and ordered");
    vocab.term_to_index.emplace(f[0], idx);
    vocab.terms.push_back(f[0]);
    vocab.doc_freq.push_back(std::stoull(f[2]));
    vocab.collection_freq.push_back(std::stoull(f[3]));
  }
  return vocab;
}

std::string bow_to_triplets_csv(const BowMatrix& bow) {
  std::string out = "doc_index,term_index,count\n";
  for (std::size_t d = 0; d < bow.rows.size(); ++d) {
    for (const auto& e : bow.rows[d]) {
      out += std::to_string(d) + ',' + std::to_string(e.term) + ',' + std::to_string(e.count) + '\n';
    }
  }
  return out;
}

BowMatrix bow_from_triplets_csv(std::string_view text, std::vector<std::string> doc_ids, std::size_t n_terms) {
  BowMatrix bow;
  bow.n_terms = n_terms;
  bow.rows.resize(doc_ids.size());
  bow.doc_ids = std::move(doc_ids);
  const auto lines = io::split_lines(text);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto f = io::split_csv_line(lines[li]);
    if (f.size() != 3) throw Error(ErrorCode::kParse, "triplet line " + std::to_string(li + 1));
    const auto d = std::stoull(f[0]);
    const auto t = std::stoull(f[1]);
    const auto c = std::stoul(f[2]);
    if (d >= bow.rows.size() || t >= n_terms || c == 0) {
      throw Error(ErrorCode::kParse, "triplet out of range at line " + std::to_string(li + 1));
    }
    bow.rows[d].push_back(BowEntry{t, static_cast<std::uint32_t>(c)});
  }
  for (auto& row : bow.rows) {
    std::sort(row.begin(), row.end(), [](const BowEntry& a, const BowEntry& b) { return a.term < b.term; });
  }
  return bow;
}

std::string doc_ids_to_json(std::span<const std::string> ids) {
  return nlohmann::json(std::vector<std::string>(ids.begin(), ids.end())).dump(1) + "\n";
}

std::vector<std::string> doc_ids_from_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text).get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("doc_ids JSON: ") + e.what());
  }
}

void save_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  io::write_file(dir / "vocabulary.tsv", vocabulary_to_tsv(corpus.vocabulary));
  io::write_file(dir / "bow_triplets.csv", bow_to_triplets_csv(corpus.bow));
  io::write_file(dir / "doc_ids.json", doc_ids_to_json(corpus.bow.doc_ids));
}

Corpus load_corpus(const std::filesystem::path& dir) {
  Corpus corpus;
  corpus.vocabulary = vocabulary_from_tsv(io::read_file(dir / "vocabulary.tsv"));
  corpus.bow = bow_from_triplets_csv(io::read_file(dir / "bow_triplets.csv"),
                                     doc_ids_from_json(io::read_file(dir / "doc_ids.json")),
                                     corpus.vocabulary.size());
  return corpus;
}

}  // namespace cinesim
