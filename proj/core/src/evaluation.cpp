#include "cinesim/evaluation.hpp"

#include "cinesim/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <unordered_map>

namespace cinesim {

GroundTruth GroundTruth::from_tags(const FeatureMatrix& tags) {
  GroundTruth gt{cosine_matrix(tags)};
  gt.similarity.modality = "ground_truth";
  return gt;
}

GroundTruth GroundTruth::from_similarity(SimilarityMatrix sim) {
  if (sim.values.rows() != sim.values.cols() || static_cast<std::size_t>(sim.values.rows()) != sim.doc_ids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "ground truth must be N x N");
  }
  sim.modality = "ground_truth";
  return GroundTruth{std::move(sim)};
}

GroundTruth GroundTruth::from_labeled(io::LabeledMatrix m) {
  if (m.row_ids == m.column_names) return from_similarity(similarity_from_labeled(std::move(m), "ground_truth"));
  return from_tags(feature_from_labeled(std::move(m), "tags"));
}

std::size_t gt_rank(const Matrix& gt, std::size_t query, std::size_t candidate) {
  const auto q = static_cast<Eigen::Index>(query);
  const double target = gt(q, static_cast<Eigen::Index>(candidate));
  std::size_t better = 0;
  for (Eigen::Index c = 0; c < gt.cols(); ++c) {
    if (c != q && gt(q, c) > target) ++better;
  }
  return better + 1;
}

namespace {

// Position of each index in lexicographic id order, for tie-breaking.
std::vector<std::size_t> id_order(const std::vector<std::string>& ids) {
  std::vector<std::size_t> idx(ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  std::vector<std::size_t> pos(ids.size());
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  return pos;
}

// True when candidate x ranks ahead of y in the row.
bool ahead(const Matrix& s, Eigen::Index q, std::size_t x, std::size_t y, const std::vector<std::size_t>& order) {
  const double sx = s(q, static_cast<Eigen::Index>(x));
  const double sy = s(q, static_cast<Eigen::Index>(y));
  if (sx != sy) return sx > sy;
  return order[x] < order[y];
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::vector<std::size_t> recommend(const SimilarityMatrix& model, std::size_t query, std::size_t n) {
  const std::size_t size = model.size();
  if (query >= size || n > size - 1) throw Error(ErrorCode::kInvalidArgument, "recommend: n must be <= N-1");
  const auto order = id_order(model.doc_ids);
  std::vector<std::size_t> cands;
  for (std::size_t c = 0; c < size; ++c) {
    if (c != query) cands.push_back(c);
  }
  const auto q = static_cast<Eigen::Index>(query);
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(n), cands.end(),
                    [&](std::size_t x, std::size_t y) { return ahead(model.values, q, x, y, order); });
  cands.resize(n);
  return cands;
}

double interpolated_median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

Evaluator::Evaluator(GroundTruth gt) : gt_(std::move(gt)) {
  const std::size_t n = gt_.similarity.size();
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "evaluation needs at least 3 movies");
  ranks_.assign(n * n, 0);
  const Matrix& s = gt_.similarity.values;
  std::vector<std::size_t> cands;
  for (std::size_t q = 0; q < n; ++q) {
    cands.clear();
    for (std::size_t c = 0; c < n; ++c) {
      if (c != q) cands.push_back(c);
    }
    const auto qi = static_cast<Eigen::Index>(q);
    std::sort(cands.begin(), cands.end(), [&](std::size_t x, std::size_t y) {
      return s(qi, static_cast<Eigen::Index>(x)) > s(qi, static_cast<Eigen::Index>(y));
    });
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const bool tied = i > 0 && s(qi, static_cast<Eigen::Index>(cands[i])) == s(qi, static_cast<Eigen::Index>(cands[i - 1]));
      ranks_[q * n + cands[i]] = tied ? ranks_[q * n + cands[i - 1]] : i + 1;
    }
  }
}

std::size_t Evaluator::rank(std::size_t query, std::size_t candidate) const {
  return ranks_[query * size() + candidate];
}

std::vector<QueryRanks> Evaluator::rank_table(const SimilarityMatrix& model, std::span<const std::size_t> queries) const {
  const SimilarityMatrix aligned = align_to(model, doc_ids());
  const auto order = id_order(doc_ids());
  const std::size_t n = size();
  std::vector<std::size_t> all;
  if (queries.empty()) {
    all.resize(n);
    std::iota(all.begin(), all.end(), 0);
    queries = all;
  }
  std::vector<QueryRanks> table;
  table.reserve(queries.size());
  for (std::size_t q : queries) {
    const auto qi = static_cast<Eigen::Index>(q);
    std::size_t best = n, second = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == q) continue;
      if (best == n || ahead(aligned.values, qi, c, best, order)) {
        second = best;
        best = c;
      } else if (second == n || ahead(aligned.values, qi, c, second, order)) {
        second = c;
      }
    }
    table.push_back(QueryRanks{q, best, second, rank(q, best), rank(q, second)});
  }
  return table;
}

EvalReport Evaluator::summarize(std::string model, std::span<const QueryRanks> table) {
  EvalReport r;
  r.model = std::move(model);
  r.n_queries = table.size();
  if (table.empty()) return r;
  std::vector<double> first, second;
  std::size_t top_first = 0, top_second = 0;
  for (const auto& row : table) {
    first.push_back(static_cast<double>(row.rank_first));
    second.push_back(static_cast<double>(row.rank_second));
    top_first += row.rank_first <= 10 ? 1 : 0;
    top_second += row.rank_second <= 10 ? 1 : 0;
  }
  const double count = static_cast<double>(table.size());
  r.median_rank_1st = interpolated_median(std::move(first));
  r.median_rank_2nd = interpolated_median(std::move(second));
  r.top10_pct_1st = 100.0 * static_cast<double>(top_first) / count;
  r.top10_pct_2nd = 100.0 * static_cast<double>(top_second) / count;
  return r;
}

EvalReport Evaluator::evaluate(const SimilarityMatrix& model, std::span<const std::size_t> queries) const {
  const auto table = rank_table(model, queries);
  return summarize(model.modality, table);
}

double Evaluator::rank_correlation(const SimilarityMatrix& model, std::span<const std::size_t> queries) const {
  const SimilarityMatrix aligned = align_to(model, doc_ids());
  const std::size_t n = size();
  std::vector<std::size_t> all;
  if (queries.empty()) {
    all.resize(n);
    std::iota(all.begin(), all.end(), 0);
    queries = all;
  }
  double total = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t q : queries) {
    xs.clear();
    ys.clear();
    const auto qi = static_cast<Eigen::Index>(q);
    for (std::size_t c = 0; c < n; ++c) {
      if (c == q) continue;
      xs.push_back(aligned.values(qi, static_cast<Eigen::Index>(c)));
      ys.push_back(gt_.similarity.values(qi, static_cast<Eigen::Index>(c)));
    }
    total += spearman(xs, ys);
  }
  return queries.empty() ? 0.0 : total / static_cast<double>(queries.size());
}

EvalReport evaluate(const SimilarityMatrix& model, const GroundTruth& gt) { return Evaluator(gt).evaluate(model); }

WilcoxonResult compare_models(std::span<const QueryRanks> a, std::span<const QueryRanks> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "rank tables cover different queries");
  std::vector<double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].query != b[i].query) throw Error(ErrorCode::kDimensionMismatch, "rank tables are not paired");
    ra.push_back(static_cast<double>(a[i].rank_first));
    rb.push_back(static_cast<double>(b[i].rank_first));
  }
  return wilcoxon_signed_rank(ra, rb);
}

std::vector<GroupScore> group_differentiation(const SimilarityMatrix& model, std::span<const MovieMetadata> metadata,
                                              GroupBy group_by, std::size_t n_recs, std::size_t min_population) {
  const std::size_t n = model.size();
  std::unordered_map<std::string, const MovieMetadata*> by_id;
  for (const auto& m : metadata) by_id.emplace(m.movie_id, &m);
  // per movie: normalized keys of its groups
  std::vector<std::vector<std::string>> keys(n);
  std::map<std::string, std::string> display;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = by_id.find(model.doc_ids[i]);
    if (it == by_id.end()) continue;
    const auto& labels = group_by == GroupBy::kGenre ? it->second->genres : it->second->directors;
    for (const auto& raw : labels) {
      auto key = normalize_tag(raw);
      if (key.empty()) continue;
      display.emplace(key, raw);
      if (std::find(keys[i].begin(), keys[i].end(), key) == keys[i].end()) keys[i].push_back(std::move(key));
    }
  }
  std::vector<std::vector<std::size_t>> recs(n);
  for (std::size_t i = 0; i < n; ++i) recs[i] = recommend(model, i, std::min(n_recs, n - 1));

  std::vector<GroupScore> out;
  for (const auto& [key, shown] : display) {
    GroupScore g;
    g.group = shown;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(keys[i].begin(), keys[i].end(), key) == keys[i].end()) continue;
      ++g.population;
      std::size_t hits = 0;
      for (std::size_t r : recs[i]) hits += std::find(keys[r].begin(), keys[r].end(), key) != keys[r].end() ? 1 : 0;
      sum += recs[i].empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(recs[i].size());
    }
    g.ratio = g.population == 0 ? 0.0 : sum / static_cast<double>(g.population);
    g.low_support = g.population < min_population;
    out.push_back(std::move(g));
  }
  return out;
}

std::string format_report_table(std::span<const EvalReport> reports) {
  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.model.size());
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-*s  %10s  %10s  %10s  %10s\n", static_cast<int>(width), "model", "median 1st",
                "top10 1st", "median 2nd", "top10 2nd");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-*s  %10.2f  %10.1f  %10.2f  %10.1f\n", static_cast<int>(width), r.model.c_str(),
                  r.median_rank_1st, r.top10_pct_1st, r.median_rank_2nd, r.top10_pct_2nd);
    out += line;
  }
  return out;
}

std::string reports_to_json(std::span<const EvalReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["n_queries"] = r.n_queries;
    j["median_rank_1st"] = r.median_rank_1st;
    j["top10_pct_1st"] = r.top10_pct_1st;
    j["median_rank_2nd"] = r.median_rank_2nd;
    j["top10_pct_2nd"] = r.top10_pct_2nd;
    if (r.wilcoxon) {
      j["wilcoxon"] = {{"n", r.wilcoxon->n},
                       {"W", r.wilcoxon->w},
                       {"z", r.wilcoxon->z},
                       {"p_one_sided", r.wilcoxon->p_one_sided}};
      if (!r.wilcoxon->warning.empty()) j["wilcoxon"]["warning"] = r.wilcoxon->warning;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

}  // namespace cinesim
