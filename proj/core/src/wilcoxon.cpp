#include "cinesim/wilcoxon.hpp"

#include "cinesim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cinesim {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

// P(W- <= observed) by counting sign assignments over doubled (integer) ranks.
double exact_lower_tail(const std::vector<double>& ranks, double w_minus) {
  std::vector<int> doubled;
  int total = 0;
  for (double r : ranks) {
    doubled.push_back(static_cast<int>(std::lround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  int reach = 0;
  for (int r : doubled) {
    for (int s = reach; s >= 0; --s) {
      if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  const long limit = std::lround(2.0 * w_minus);
  double below = 0.0;
  for (long s = 0; s <= limit && s <= total; ++s) below += counts[static_cast<std::size_t>(s)];
  return std::ldexp(below, -static_cast<int>(ranks.size()));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, WilcoxonMethod method) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "wilcoxon inputs must be paired");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult out;
  out.n = diffs.size();
  if (diffs.empty()) {
    out.warning = "AllZeroDifferences: every paired difference is zero";
    return out;
  }
  std::vector<double> abs_d(diffs.size());
  std::transform(diffs.begin(), diffs.end(), abs_d.begin(), [](double d) { return std::abs(d); });
  const auto ranks = average_ranks(abs_d);
  for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? out.w_plus : out.w_minus) += ranks[i];
  out.w = std::min(out.w_plus, out.w_minus);

  const double n = static_cast<double>(out.n);
  double tie_term = 0.0;
  std::vector<double> sorted = abs_d;
  std::sort(sorted.begin(), sorted.end());
  for (auto it = sorted.begin(); it != sorted.end();) {
    auto next = std::upper_bound(it, sorted.end(), *it);
    const double t = static_cast<double>(next - it);
    tie_term += t * t * t - t;
    it = next;
  }
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  out.z = var > 0.0 ? (out.w_minus - mean + 0.5) / std::sqrt(var) : 0.0;

  out.exact = method == WilcoxonMethod::kExact || (method == WilcoxonMethod::kAuto && out.n <= 25);
  if (out.exact) {
    out.p_one_sided = exact_lower_tail(ranks, out.w_minus);
  } else {
    out.p_one_sided = 0.5 * std::erfc(-out.z / std::sqrt(2.0));
  }
  out.p_one_sided = std::min(1.0, out.p_one_sided);
  return out;
}

}  // namespace cinesim
