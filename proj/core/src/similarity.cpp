#include "cinesim/similarity.hpp"

#include "cinesim/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cinesim {

SimilarityMatrix cosine_matrix(const FeatureMatrix& features) {
  const Eigen::Index n = features.values.rows();
  if (static_cast<std::size_t>(n) != features.doc_ids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and doc ids differ");
  }
  SimilarityMatrix out;
  out.modality = features.modality;
  out.doc_ids = features.doc_ids;
  out.values = Matrix::Zero(n, n);
  Vector norms(n);
  for (Eigen::Index i = 0; i < n; ++i) norms(i) = features.values.row(i).norm();
  for (Eigen::Index a = 0; a < n; ++a) {
    if (norms(a) == 0.0) continue;
    out.values(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (norms(b) == 0.0) continue;
      const double s = std::clamp(features.values.row(a).dot(features.values.row(b)) / (norms(a) * norms(b)), -1.0, 1.0);
      out.values(a, b) = s;
      out.values(b, a) = s;
    }
  }
  return out;
}

void FusionWeights::validate() const {
  if (!modalities.empty() && modalities.size() != weights.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, "modality names and weights differ in count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "fusion weights must be non-negative");
    sum += w;
  }
  if (weights.empty() || std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "fusion weights must sum to 1");
  }
}

std::string FusionWeights::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < weights.size(); ++i) j[modalities.at(i)] = weights[i];
  return j.dump(1) + "\n";
}

FusionWeights FusionWeights::from_json(std::string_view text) {
  FusionWeights w;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    for (const auto& [k, v] : j.items()) {
      w.modalities.push_back(k);
      w.weights.push_back(v.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("weights JSON: ") + e.what());
  }
  w.validate();
  return w;
}

SimilarityMatrix fuse(std::span<const SimilarityMatrix> matrices, const FusionWeights& weights) {
  if (matrices.size() != weights.weights.size()) {
    throw Error(ErrorCode::kWeightCountMismatch, std::to_string(matrices.size()) + " matrices but " +
                                                     std::to_string(weights.weights.size()) + " weights");
  }
  weights.validate();
  const auto& first = matrices.front();
  SimilarityMatrix out;
  out.doc_ids = first.doc_ids;
  out.values = Matrix::Zero(first.values.rows(), first.values.cols());
  for (std::size_t m = 0; m < matrices.size(); ++m) {
    const auto& s = matrices[m];
    if (s.doc_ids != first.doc_ids || s.values.rows() != first.values.rows() || s.values.cols() != first.values.cols()) {
      throw Error(ErrorCode::kDimensionMismatch, "fused matrices must share ids and order");
    }
    if (!weights.modalities.empty() && weights.modalities[m] != s.modality) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "weight '" + weights.modalities[m] + "' does not align with matrix '" + s.modality + "'");
    }
    out.values += weights.weights[m] * s.values;
  }
  out.modality = "fused";
  return out;
}

SimilarityMatrix align_to(const SimilarityMatrix& m, std::span<const std::string> doc_ids) {
  if (std::equal(m.doc_ids.begin(), m.doc_ids.end(), doc_ids.begin(), doc_ids.end())) return m;
  if (m.doc_ids.size() != doc_ids.size()) throw Error(ErrorCode::kDimensionMismatch, "id sets differ in size");
  std::unordered_map<std::string, Eigen::Index> pos;
  for (std::size_t i = 0; i < m.doc_ids.size(); ++i) pos.emplace(m.doc_ids[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> perm;
  for (const auto& id : doc_ids) {
    auto it = pos.find(id);
    if (it == pos.end()) throw Error(ErrorCode::kDimensionMismatch, "movie '" + id + "' missing from " + m.modality);
    perm.push_back(it->second);
  }
  SimilarityMatrix out{m.modality, std::vector<std::string>(doc_ids.begin(), doc_ids.end()), Matrix(m.values.rows(), m.values.cols())};
  for (std::size_t a = 0; a < perm.size(); ++a) {
    for (std::size_t b = 0; b < perm.size(); ++b) {
      out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m.values(perm[a], perm[b]);
    }
  }
  return out;
}

io::LabeledMatrix to_labeled(const SimilarityMatrix& m) { return {m.doc_ids, m.doc_ids, m.values}; }

SimilarityMatrix similarity_from_labeled(io::LabeledMatrix m, std::string modality) {
  if (m.row_ids != m.column_names) throw Error(ErrorCode::kParse, "similarity CSV rows and columns differ");
  return SimilarityMatrix{std::move(modality), std::move(m.row_ids), std::move(m.values)};
}

io::LabeledMatrix to_labeled(const FeatureMatrix& m, std::vector<std::string> column_names) {
  if (column_names.empty()) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) column_names.push_back(std::to_string(c));
  }
  return {m.doc_ids, std::move(column_names), m.values};
}

FeatureMatrix feature_from_labeled(io::LabeledMatrix m, std::string modality) {
  return FeatureMatrix{std::move(modality), std::move(m.row_ids), std::move(m.values)};
}

}  // namespace cinesim
