#pragma once

#include "cinesim/evaluation.hpp"
#include "cinesim/similarity.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cinesim {

enum class FitMethod { kAuto, kGrid, kRandomSimplex };

/// Lexicographic search objective: median 1st (lower), top10 1st (higher),
/// median 2nd (lower), top10 2nd (higher), then mean Spearman correlation
/// with the ground truth (higher).
struct FitObjective {
  double median_rank_1st = 0.0;
  double top10_pct_1st = 0.0;
  double median_rank_2nd = 0.0;
  double top10_pct_2nd = 0.0;
  std::optional<double> rank_correlation;  // computed lazily, only to break ties

  /// Compares the four report measures; 0 when all tie.
  int compare_measures(const FitObjective& other) const;
};

struct FitOptions {
  FitMethod method = FitMethod::kAuto;
  double grid_step = 0.01;
  std::size_t samples = 10000;
  std::uint64_t seed = 42;
  std::vector<double> refine_steps{0.05, 0.02, 0.01};
  /// Fraction of queries held out from fitting (0 disables the split).
  double holdout_fraction = 0.0;
};

struct FitResult {
  FusionWeights weights;
  FitObjective objective;
  std::string method;
  std::size_t candidates = 0;
  std::vector<std::size_t> train_queries;  // empty means all
  std::vector<std::size_t> test_queries;
  std::optional<EvalReport> holdout_report;
};

/// Objective of fuse(matrices, weights) on `queries` (empty means all).
FitObjective fusion_objective(std::span<const SimilarityMatrix> matrices, std::span<const double> weights,
                              const Evaluator& evaluator, std::span<const std::size_t> queries = {},
                              bool with_correlation = true);

/// Throws kInvalidArgument for fewer than two matrices.
FitResult fit_weights(std::span<const SimilarityMatrix> matrices, const Evaluator& evaluator,
                      const FitOptions& options = {});

}  // namespace cinesim
