#include "cinesim/fusion.hpp"

#include "cinesim/error.hpp"
#include "cinesim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cinesim {

int FitObjective::compare_measures(const FitObjective& other) const {
  // -1 when this is better
  if (median_rank_1st != other.median_rank_1st) return median_rank_1st < other.median_rank_1st ? -1 : 1;
  if (top10_pct_1st != other.top10_pct_1st) return top10_pct_1st > other.top10_pct_1st ? -1 : 1;
  if (median_rank_2nd != other.median_rank_2nd) return median_rank_2nd < other.median_rank_2nd ? -1 : 1;
  if (top10_pct_2nd != other.top10_pct_2nd) return top10_pct_2nd > other.top10_pct_2nd ? -1 : 1;
  return 0;
}

namespace {

SimilarityMatrix combine(std::span<const SimilarityMatrix> aligned, std::span<const double> w) {
  SimilarityMatrix out{"fused", aligned.front().doc_ids, Matrix::Zero(aligned.front().values.rows(), aligned.front().values.cols())};
  for (std::size_t m = 0; m < aligned.size(); ++m) {
    if (w[m] != 0.0) out.values += w[m] * aligned[m].values;
  }
  return out;
}

// Puts the rounding residue on the largest weight so the sum is exactly 1.
void snap_to_simplex(std::vector<double>& w) {
  std::size_t largest = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > w[largest]) largest = i;
  }
  double rest = 1.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i != largest) rest -= w[i];
  }
  w[largest] = rest;
}

class Search {
 public:
  Search(std::span<const SimilarityMatrix> aligned, const Evaluator& evaluator, std::span<const std::size_t> queries)
      : aligned_(aligned), evaluator_(evaluator), queries_(queries) {}

  // Returns true when w replaces the incumbent.
  bool offer(std::vector<double> w) {
    ++count_;
    snap_to_simplex(w);
    const auto fused = combine(aligned_, w);
    const auto table = evaluator_.rank_table(fused, queries_);
    const auto report = Evaluator::summarize("fused", table);
    FitObjective obj{report.median_rank_1st, report.top10_pct_1st, report.median_rank_2nd, report.top10_pct_2nd, {}};
    if (!best_w_.empty()) {
      const int c = obj.compare_measures(best_);
      if (c > 0) return false;
      if (c == 0) {
        if (!best_.rank_correlation) best_.rank_correlation = correlation(best_w_);
        obj.rank_correlation = evaluator_.rank_correlation(fused, queries_);
        if (!(*obj.rank_correlation > *best_.rank_correlation + 1e-12)) return false;
      }
    }
    best_ = obj;
    best_w_ = std::move(w);
    return true;
  }

  double correlation(std::span<const double> w) const {
    return evaluator_.rank_correlation(combine(aligned_, w), queries_);
  }

  const std::vector<double>& best_weights() const { return best_w_; }
  FitObjective& best() { return best_; }
  std::size_t count() const { return count_; }

 private:
  std::span<const SimilarityMatrix> aligned_;
  const Evaluator& evaluator_;
  std::span<const std::size_t> queries_;
  FitObjective best_;
  std::vector<double> best_w_;
  std::size_t count_ = 0;
};

// Moves weight between coordinate pairs in decreasing step sizes until no move improves.
void refine(Search& search, const std::vector<double>& steps) {
  const std::size_t m = search.best_weights().size();
  for (double step : steps) {
    for (int round = 0; round < 200; ++round) {
      bool improved = false;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          if (i == j) continue;
          std::vector<double> w = search.best_weights();
          const double delta = std::min(step, w[j]);
          if (delta <= 0.0) continue;
          w[i] += delta;
          w[j] -= delta;
          improved = search.offer(std::move(w)) || improved;
        }
      }
      if (!improved) break;
    }
  }
}

}  // namespace

FitObjective fusion_objective(std::span<const SimilarityMatrix> matrices, std::span<const double> weights,
                              const Evaluator& evaluator, std::span<const std::size_t> queries, bool with_correlation) {
  std::vector<SimilarityMatrix> aligned;
  for (const auto& m : matrices) aligned.push_back(align_to(m, evaluator.doc_ids()));
  const auto fused = combine(aligned, weights);
  const auto report = Evaluator::summarize("fused", evaluator.rank_table(fused, queries));
  FitObjective obj{report.median_rank_1st, report.top10_pct_1st, report.median_rank_2nd, report.top10_pct_2nd, {}};
  if (with_correlation) obj.rank_correlation = evaluator.rank_correlation(fused, queries);
  return obj;
}

FitResult fit_weights(std::span<const SimilarityMatrix> matrices, const Evaluator& evaluator, const FitOptions& options) {
  if (matrices.size() < 2) throw Error(ErrorCode::kInvalidArgument, "fit_weights needs at least two matrices");
  if (!(options.grid_step > 0.0 && options.grid_step <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "grid step must be in (0, 1]");
  if (options.holdout_fraction < 0.0 || options.holdout_fraction >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "holdout fraction must be in [0, 1)");
  }
  std::vector<SimilarityMatrix> aligned;
  for (const auto& m : matrices) aligned.push_back(align_to(m, evaluator.doc_ids()));

  FitResult result;
  if (options.holdout_fraction > 0.0) {
    std::vector<std::size_t> order(evaluator.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split(options.seed);
    split.shuffle(order.begin(), order.end());
    const auto n_test = static_cast<std::size_t>(std::lround(options.holdout_fraction * static_cast<double>(order.size())));
    result.test_queries.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    result.train_queries.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(result.test_queries.begin(), result.test_queries.end());
    std::sort(result.train_queries.begin(), result.train_queries.end());
    if (result.train_queries.empty()) throw Error(ErrorCode::kInvalidArgument, "holdout leaves no training queries");
  }

  Search search(aligned, evaluator, result.train_queries);
  const std::size_t m = aligned.size();
  const bool grid = options.method == FitMethod::kGrid || (options.method == FitMethod::kAuto && m == 2);
  if (grid && m != 2) throw Error(ErrorCode::kInvalidArgument, "grid search supports exactly two modalities");

  if (grid) {
    result.method = "grid";
    const auto steps = static_cast<std::size_t>(std::lround(1.0 / options.grid_step));
    for (std::size_t i = 0; i <= steps; ++i) {
      const double w0 = std::min(1.0, static_cast<double>(i) * options.grid_step);
      search.offer({w0, 1.0 - w0});
    }
  } else {
    result.method = "random_simplex";
    for (std::size_t v = 0; v < m; ++v) {
      std::vector<double> w(m, 0.0);
      w[v] = 1.0;
      search.offer(std::move(w));
    }
    search.offer(std::vector<double>(m, 1.0 / static_cast<double>(m)));
    Rng rng(options.seed);
    for (std::size_t s = 0; s < options.samples; ++s) {
      std::vector<double> w(m);
      double total = 0.0;
      for (auto& x : w) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        x = -std::log(u);
        total += x;
      }
      for (auto& x : w) x /= total;
      search.offer(std::move(w));
    }
    refine(search, options.refine_steps);
  }

  result.objective = search.best();
  if (!result.objective.rank_correlation) result.objective.rank_correlation = search.correlation(search.best_weights());
  result.candidates = search.count();
  std::vector<double> w = search.best_weights();
  for (const auto& mat : matrices) result.weights.modalities.push_back(mat.modality);
  result.weights.weights = std::move(w);
  if (!result.test_queries.empty()) {
    auto report = evaluator.evaluate(combine(aligned, result.weights.weights), result.test_queries);
    report.model = "fused (holdout)";
    result.holdout_report = report;
  }
  return result;
}

}  // namespace cinesim
