#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They favour the most literal formulation (explicit loops and full
// sorts) over anything shared with the library.

#include "cinesim/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace oracle {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::vector<double> row(const cinesim::Matrix& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

// 1 + number of other candidates with strictly higher GT similarity, by full sort.
inline std::size_t gt_rank(const cinesim::Matrix& gt, std::size_t q, std::size_t cand) {
  std::vector<double> others;
  for (Eigen::Index c = 0; c < gt.cols(); ++c) {
    if (static_cast<std::size_t>(c) != q) others.push_back(gt(static_cast<Eigen::Index>(q), c));
  }
  std::sort(others.begin(), others.end(), std::greater<>());
  const double v = gt(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(cand));
  return static_cast<std::size_t>(std::find(others.begin(), others.end(), v) - others.begin()) + 1;
}

// Candidates of q ordered by (similarity desc, id asc).
inline std::vector<std::size_t> ranking(const cinesim::Matrix& s, const std::vector<std::string>& ids, std::size_t q) {
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i != q) c.push_back(i);
  }
  std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) {
    const double sa = s(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(a));
    const double sb = s(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(b));
    if (sa != sb) return sa > sb;
    return ids[a] < ids[b];
  });
  return c;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

struct Measures {
  double med1, top1, med2, top2;
};

inline Measures measures(const cinesim::Matrix& model, const cinesim::Matrix& gt, const std::vector<std::string>& ids) {
  std::vector<double> r1, r2;
  double t1 = 0, t2 = 0;
  for (std::size_t q = 0; q < ids.size(); ++q) {
    const auto order = ranking(model, ids, q);
    r1.push_back(static_cast<double>(gt_rank(gt, q, order[0])));
    r2.push_back(static_cast<double>(gt_rank(gt, q, order[1])));
    t1 += r1.back() <= 10 ? 1 : 0;
    t2 += r2.back() <= 10 ? 1 : 0;
  }
  const double n = static_cast<double>(ids.size());
  return {median(r1), 100.0 * t1 / n, median(r2), 100.0 * t2 / n};
}

// Sort-based statistics of one column: mean, population std, std/mean, mean of ceil(0.1 n) largest.
inline std::vector<double> column_stats(std::vector<double> x) {
  const double n = static_cast<double>(x.size());
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  std::sort(x.begin(), x.end(), std::greater<>());
  const auto k = static_cast<std::size_t>(std::ceil(0.1 * n));
  double top = 0;
  for (std::size_t i = 0; i < k; ++i) top += x[i];
  return {mean, sd, mean == 0 ? 0.0 : sd / mean, top / static_cast<double>(k)};
}

// Modularity by the textbook double sum over node pairs.
inline double modularity(const std::vector<std::vector<double>>& a, const std::vector<int>& comm) {
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double m2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    m2 += k[i];
  }
  double q = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (comm[i] == comm[j]) q += a[i][j] - k[i] * k[j] / m2;
    }
  }
  return q / m2;
}

// Best partition of a small graph by enumerating restricted growth strings.
inline std::pair<double, std::vector<int>> best_partition(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<int> comm(n, 0), best;
  double best_q = -1.0;
  std::vector<int> maxv(n, 0);
  for (;;) {
    const double q = modularity(a, comm);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = comm;
    }
    // next restricted growth string
    std::size_t i = n - 1;
    while (i > 0 && comm[i] == maxv[i - 1] + 1) --i;
    if (i == 0) break;
    ++comm[i];
    maxv[i] = std::max(maxv[i - 1], comm[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      comm[j] = 0;
      maxv[j] = maxv[i];
    }
  }
  return {best_q, best};
}

}  // namespace oracle
