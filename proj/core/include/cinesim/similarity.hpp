#pragma once

#include "cinesim/io.hpp"
#include "cinesim/types.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cinesim {

/// N x N symmetric similarity between movies for one modality (or fused).
struct SimilarityMatrix {
  std::string modality;
  std::vector<std::string> doc_ids;
  Matrix values;

  std::size_t size() const noexcept { return doc_ids.size(); }
};

/// Pairwise cosine similarity. Pairs involving an all-zero row get 0 (also on
/// the diagonal); every other diagonal entry is exactly 1.
SimilarityMatrix cosine_matrix(const FeatureMatrix& features);

/// Per-modality convex weights, aligned with the matrices passed to fuse().
struct FusionWeights {
  std::vector<std::string> modalities;
  std::vector<double> weights;

  /// Throws Error(kInvalidArgument) unless weights are >= 0 and sum to 1.
  void validate() const;
  std::string to_json() const;
  static FusionWeights from_json(std::string_view text);
};

/// Weighted sum of aligned matrices. Throws kWeightCountMismatch when the
/// counts differ and kDimensionMismatch when ids, order or shapes differ.
SimilarityMatrix fuse(std::span<const SimilarityMatrix> matrices, const FusionWeights& weights);

/// Reorders `m` to the given id order; throws kDimensionMismatch when the id
/// sets differ.
SimilarityMatrix align_to(const SimilarityMatrix& m, std::span<const std::string> doc_ids);

io::LabeledMatrix to_labeled(const SimilarityMatrix& m);
SimilarityMatrix similarity_from_labeled(io::LabeledMatrix m, std::string modality);
io::LabeledMatrix to_labeled(const FeatureMatrix& m, std::vector<std::string> column_names = {});
FeatureMatrix feature_from_labeled(io::LabeledMatrix m, std::string modality);

}  // namespace cinesim
