#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cinesim {

enum class WilcoxonMethod { kAuto, kExact, kNormal };

struct WilcoxonResult {
  std::size_t n = 0;  // non-zero differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double w = 0.0;  // min(W+, W-)
  double z = 0.0;
  double p_one_sided = 1.0;
  bool exact = false;
  std::string warning;  // set for all-zero differences
};

/// Paired signed-rank test on d = b - a. The one-sided alternative is "a is
/// better", i.e. a has lower ranks, so W+ large and W- small. Exact null
/// distribution for n <= 25 under kAuto, normal approximation with tie and
/// continuity correction otherwise. Throws kDimensionMismatch for unpaired
/// inputs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::kAuto);

/// Midranks (1-based) of the values, ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace cinesim
