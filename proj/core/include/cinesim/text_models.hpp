#pragma once

#include "cinesim/bow.hpp"
#include "cinesim/types.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cinesim {

/// Document x term weights. Produced by tfidf() or, for LSI on raw counts,
/// by count_matrix().
struct TfIdfMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;
  Matrix weights;  // N x V
};

/// weight(d, i) = tf(i, d) * log2(N / n_i).
TfIdfMatrix tfidf(const BowMatrix& bow, const Vocabulary& vocab);
TfIdfMatrix count_matrix(const BowMatrix& bow, const Vocabulary& vocab);

struct LsiModel {
  std::size_t n_concepts = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;
  Matrix term_concepts;   // V x T, orthonormal columns
  Vector singular_values; // T, non-increasing
  Matrix doc_embedding;   // N x T, U * Sigma
  std::vector<std::string> warnings;
};

/// Rank-T truncated SVD of the weight matrix. Requires T <= min(N, V). When
/// fewer than T singular values are nonzero the model keeps the available
/// rank and records a RankDeficient warning.
LsiModel fit_lsi(const TfIdfMatrix& input, std::size_t n_concepts = 55);

FeatureMatrix project(const TfIdfMatrix& m);
FeatureMatrix project(const LsiModel& m);

using WeightedTerm = std::pair<std::string, double>;

/// The m terms with the largest |coefficient| on concept k; the signed
/// coefficient is returned. Ties go to the lower term index.
std::vector<WeightedTerm> top_terms(const LsiModel& model, std::size_t concept_index, std::size_t m);

void save_lsi(const std::filesystem::path& dir, const LsiModel& model);
LsiModel load_lsi(const std::filesystem::path& dir);

}  // namespace cinesim
