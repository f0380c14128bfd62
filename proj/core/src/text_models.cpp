#include "cinesim/text_models.hpp"

#include "cinesim/error.hpp"
#include "cinesim/io.hpp"
#include "cinesim/linalg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cinesim {

TfIdfMatrix tfidf(const BowMatrix& bow, const Vocabulary& vocab) {
  if (bow.n_docs() == 0) throw Error(ErrorCode::kInvalidArgument, "tfidf on an empty corpus");
  // n_i straight from the matrix so a hand-edited vocabulary cannot skew it.
  std::vector<std::size_t> df(bow.n_terms, 0);
  for (const auto& row : bow.rows) {
    for (const auto& e : row) ++df[e.term];
  }
  const double n = static_cast<double>(bow.n_docs());
  TfIdfMatrix out;
  out.doc_ids = bow.doc_ids;
  out.terms = vocab.terms;
  out.weights = Matrix::Zero(static_cast<Eigen::Index>(bow.n_docs()), static_cast<Eigen::Index>(bow.n_terms));
  for (std::size_t d = 0; d < bow.n_docs(); ++d) {
    for (const auto& e : bow.rows[d]) {
      const double idf = std::log2(n / static_cast<double>(df[e.term]));
      out.weights(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(e.term)) = e.count * idf;
    }
  }
  return out;
}

TfIdfMatrix count_matrix(const BowMatrix& bow, const Vocabulary& vocab) {
  return TfIdfMatrix{bow.doc_ids, vocab.terms, bow.dense()};
}

LsiModel fit_lsi(const TfIdfMatrix& input, std::size_t n_concepts) {
  const auto n = static_cast<std::size_t>(input.weights.rows());
  const auto v = static_cast<std::size_t>(input.weights.cols());
  if (n_concepts == 0 || n_concepts > std::min(n, v)) {
    throw Error(ErrorCode::kInvalidArgument, "LSI needs 1 <= T <= min(N, V); got T=" + std::to_string(n_concepts) +
                                                 " for " + std::to_string(n) + "x" + std::to_string(v));
  }
  const ThinSvd svd = jacobi_svd(input.weights);

  LsiModel model;
  model.doc_ids = input.doc_ids;
  model.terms = input.terms;
  auto t = static_cast<Eigen::Index>(n_concepts);
  if (svd.rank < t) {
    model.warnings.push_back("RankDeficient: requested " + std::to_string(n_concepts) + " concepts, matrix rank is " +
                             std::to_string(svd.rank));
    t = svd.rank;
  }
  model.n_concepts = static_cast<std::size_t>(t);
  model.singular_values = svd.s.head(t);
  model.term_concepts = svd.v.leftCols(t);
  model.doc_embedding = svd.u.leftCols(t) * model.singular_values.asDiagonal();
  return model;
}

FeatureMatrix project(const TfIdfMatrix& m) { return FeatureMatrix{"tfidf", m.doc_ids, m.weights}; }

FeatureMatrix project(const LsiModel& m) { return FeatureMatrix{"lsi", m.doc_ids, m.doc_embedding}; }

std::vector<WeightedTerm> top_terms(const LsiModel& model, std::size_t concept_index, std::size_t m) {
  if (concept_index >= model.n_concepts) throw Error(ErrorCode::kInvalidArgument, "concept index out of range");
  const auto col = model.term_concepts.col(static_cast<Eigen::Index>(concept_index));
  std::vector<std::size_t> idx(static_cast<std::size_t>(col.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(col(static_cast<Eigen::Index>(a))) > std::abs(col(static_cast<Eigen::Index>(b)));
  });
  idx.resize(std::min(m, idx.size()));
  std::vector<WeightedTerm> out;
  for (auto i : idx) out.emplace_back(model.terms[i], col(static_cast<Eigen::Index>(i)));
  return out;
}

void save_lsi(const std::filesystem::path& dir, const LsiModel& model) {
  nlohmann::ordered_json header;
  header["kind"] = "lsi";
  header["dims"] = {{"docs", model.doc_ids.size()}, {"terms", model.terms.size()}, {"concepts", model.n_concepts}};
  header["singular_values"] = std::vector<double>(model.singular_values.data(),
                                                  model.singular_values.data() + model.singular_values.size());
  header["terms"] = model.terms;
  io::write_file(dir / "header.json", header.dump(1) + "\n");
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < model.n_concepts; ++k) cols.push_back(std::to_string(k));
  io::write_labeled_matrix(dir / "doc_embedding.csv", {model.doc_ids, cols, model.doc_embedding});
  io::write_file(dir / "term_concepts.csv", io::matrix_to_csv(model.term_concepts));
}

LsiModel load_lsi(const std::filesystem::path& dir) {
  const auto header = nlohmann::json::parse(io::read_file(dir / "header.json"));
  if (header.value("kind", "") != "lsi") throw Error(ErrorCode::kParse, "not an LSI bundle: " + dir.string());
  LsiModel model;
  model.n_concepts = header["dims"]["concepts"].get<std::size_t>();
  auto sv = header["singular_values"].get<std::vector<double>>();
  model.singular_values = Eigen::Map<Vector>(sv.data(), static_cast<Eigen::Index>(sv.size()));
  model.terms = header["terms"].get<std::vector<std::string>>();
  auto emb = io::read_labeled_matrix(dir / "doc_embedding.csv");
  model.doc_ids = std::move(emb.row_ids);
  model.doc_embedding = std::move(emb.values);
  model.term_concepts = io::matrix_from_csv(io::read_file(dir / "term_concepts.csv"));
  return model;
}

}  // namespace cinesim
