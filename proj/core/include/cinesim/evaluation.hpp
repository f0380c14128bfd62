#pragma once

#include "cinesim/metadata.hpp"
#include "cinesim/similarity.hpp"
#include "cinesim/wilcoxon.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cinesim {

/// Reference similarity. From a tag-relevance matrix it is the cosine of tag rows.
struct GroundTruth {
  SimilarityMatrix similarity;

  static GroundTruth from_tags(const FeatureMatrix& tags);
  static GroundTruth from_similarity(SimilarityMatrix sim);
  /// N x N when columns equal the row ids, tag matrix otherwise.
  static GroundTruth from_labeled(io::LabeledMatrix m);
};

/// Competition rank of `candidate` in the GT row of `query`, self excluded.
std::size_t gt_rank(const Matrix& gt, std::size_t query, std::size_t candidate);

/// Top-n by model similarity, self excluded, ties by movie id ascending.
std::vector<std::size_t> recommend(const SimilarityMatrix& model, std::size_t query, std::size_t n);

double interpolated_median(std::vector<double> values);

struct QueryRanks {
  std::size_t query = 0;
  std::size_t first = 0;   // recommended movie index
  std::size_t second = 0;
  std::size_t rank_first = 0;  // its GT rank
  std::size_t rank_second = 0;
};

struct EvalReport {
  std::string model;
  std::size_t n_queries = 0;
  double median_rank_1st = 0.0;
  double top10_pct_1st = 0.0;
  double median_rank_2nd = 0.0;
  double top10_pct_2nd = 0.0;
  std::optional<WilcoxonResult> wilcoxon;  // against a baseline, when requested
};

class Evaluator {
 public:
  explicit Evaluator(GroundTruth gt);

  const std::vector<std::string>& doc_ids() const noexcept { return gt_.similarity.doc_ids; }
  std::size_t size() const noexcept { return gt_.similarity.size(); }
  const GroundTruth& ground_truth() const noexcept { return gt_; }
  std::size_t rank(std::size_t query, std::size_t candidate) const;

  /// Empty `queries` means every movie. The model is aligned to GT id order.
  std::vector<QueryRanks> rank_table(const SimilarityMatrix& model, std::span<const std::size_t> queries = {}) const;
  EvalReport evaluate(const SimilarityMatrix& model, std::span<const std::size_t> queries = {}) const;
  static EvalReport summarize(std::string model, std::span<const QueryRanks> table);

  /// Mean over queries of the Spearman correlation between model and GT rows
  /// (self excluded); constant rows contribute 0.
  double rank_correlation(const SimilarityMatrix& model, std::span<const std::size_t> queries = {}) const;

 private:
  GroundTruth gt_;
  std::vector<std::size_t> ranks_;  // row-major N x N
};

EvalReport evaluate(const SimilarityMatrix& model, const GroundTruth& gt);

/// Signed-rank test on first-recommendation GT ranks; "a better" alternative.
WilcoxonResult compare_models(std::span<const QueryRanks> a, std::span<const QueryRanks> b);

enum class GroupBy { kGenre, kDirector };

struct GroupScore {
  std::string group;
  std::size_t population = 0;
  double ratio = 0.0;
  bool low_support = false;
};

/// Per group: mean over member movies of the fraction of their top-n
/// recommendations sharing the group. Sorted by normalized group key.
std::vector<GroupScore> group_differentiation(const SimilarityMatrix& model, std::span<const MovieMetadata> metadata,
                                              GroupBy group_by, std::size_t n_recs = 2,
                                              std::size_t min_population = 4);

std::string format_report_table(std::span<const EvalReport> reports);
std::string reports_to_json(std::span<const EvalReport> reports);

}  // namespace cinesim
