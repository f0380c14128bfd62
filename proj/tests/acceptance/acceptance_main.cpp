// One PASS/FAIL line per primary criterion; exit status 1 if any fails.
#include "cinesim/audio.hpp"
#include "cinesim/bow.hpp"
#include "cinesim/evaluation.hpp"
#include "cinesim/fixture.hpp"
#include "cinesim/fusion.hpp"
#include "cinesim/graph.hpp"
#include "cinesim/io.hpp"
#include "cinesim/lda.hpp"
#include "cinesim/metadata.hpp"
#include "cinesim/optical_flow.hpp"
#include "cinesim/pipeline.hpp"
#include "cinesim/random.hpp"
#include "cinesim/shots.hpp"
#include "cinesim/similarity.hpp"
#include "cinesim/text_models.hpp"
#include "cinesim/visual_features.hpp"
#include "cinesim/wilcoxon.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace cinesim;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << what;
      ok = false;
    }
  }
};

struct Criterion {
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<void(Check&)> body;
};

Corpus corpus_from_counts(const std::vector<std::vector<std::uint32_t>>& counts) {
  Corpus c;
  const std::size_t v = counts.front().size();
  c.vocabulary.doc_freq.assign(v, 0);
  c.vocabulary.collection_freq.assign(v, 0);
  for (std::size_t t = 0; t < v; ++t) {
    c.vocabulary.terms.push_back("t" + std::to_string(100 + t));
    c.vocabulary.term_to_index.emplace(c.vocabulary.terms.back(), t);
  }
  c.bow.n_terms = v;
  for (std::size_t d = 0; d < counts.size(); ++d) {
    c.bow.doc_ids.push_back("d" + std::to_string(d));
    std::vector<BowEntry> row;
    for (std::size_t t = 0; t < v; ++t) {
      if (counts[d][t] == 0) continue;
      row.push_back({t, counts[d][t]});
      ++c.vocabulary.doc_freq[t];
      c.vocabulary.collection_freq[t] += counts[d][t];
    }
    c.bow.rows.push_back(std::move(row));
  }
  return c;
}

std::vector<std::vector<std::uint32_t>> random_counts(std::size_t n, std::size_t v, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> counts(n, std::vector<std::uint32_t>(v, 0));
  for (auto& row : counts) {
    for (auto& x : row) x = rng.uniform() < 0.45 ? static_cast<std::uint32_t>(1 + rng.index(5)) : 0;
  }
  for (std::size_t t = 0; t < v; ++t) counts[t % n][t] += 1;
  return counts;
}

void tfidf_oracle(Check& c) {
  auto counts = random_counts(6, 20, 5);
  for (auto& row : counts) row[19] = 2;  // present in every document
  const auto corpus = corpus_from_counts(counts);
  const auto w = tfidf(corpus.bow, corpus.vocabulary);
  for (std::size_t d = 0; d < 6; ++d) {
    for (std::size_t t = 0; t < 20; ++t) {
      double n_i = 0;
      for (const auto& row : counts) n_i += row[t] > 0 ? 1 : 0;
      const double expected = counts[d][t] * std::log2(6.0 / n_i);
      c.require(w.weights(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)) == expected, "weight mismatch");
    }
    c.require(w.weights(static_cast<Eigen::Index>(d), 19) == 0.0, "ubiquitous term weight not 0");
  }
  c.detail << "120 weights exact";
}

void lsi_check(Check& c) {
  const auto corpus = corpus_from_counts(random_counts(6, 8, 17));
  const auto w = tfidf(corpus.bow, corpus.vocabulary);
  const auto full = fit_lsi(w, 6);
  const double cos_err = (cosine_matrix(project(w)).values - cosine_matrix(project(full)).values).cwiseAbs().maxCoeff();
  c.require(cos_err <= 1e-9, "cosine error " + std::to_string(cos_err));
  const auto truncated = fit_lsi(w, 3);
  Eigen::BDCSVD<Eigen::MatrixXd> ref(Eigen::MatrixXd(w.weights));
  double rel = 0;
  for (Eigen::Index k = 0; k < 3; ++k) {
    rel = std::max(rel, std::abs(truncated.singular_values(k) - ref.singularValues()(k)) / ref.singularValues()(k));
  }
  c.require(rel <= 1e-6, "singular value rel error " + std::to_string(rel));
  char buf[96];
  std::snprintf(buf, sizeof buf, "cosine err %.1e, sv rel err %.1e", cos_err, rel);
  c.detail << buf;
}

struct Synthetic {
  Corpus corpus;
  Matrix beta;
};

Synthetic three_topic_corpus(std::uint64_t seed) {
  constexpr std::size_t kTopics = 3, kBlock = 10, kTerms = 30, kDocs = 60, kLength = 120;
  Rng rng(seed);
  Synthetic s;
  s.beta = Matrix::Zero(kTopics, kTerms);
  for (std::size_t k = 0; k < kTopics; ++k) {
    for (std::size_t w = 0; w < kBlock; ++w) s.beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k * kBlock + w)) = rng.gamma(1.0);
    s.beta.row(static_cast<Eigen::Index>(k)) /= s.beta.row(static_cast<Eigen::Index>(k)).sum();
  }
  std::vector<std::vector<std::uint32_t>> counts(kDocs, std::vector<std::uint32_t>(kTerms, 0));
  for (auto& row : counts) {
    std::vector<double> theta(kTopics);
    double total = 0;
    for (auto& x : theta) total += (x = rng.gamma(0.3));
    for (auto& x : theta) x /= total;
    for (std::size_t n = 0; n < kLength; ++n) {
      double u = rng.uniform();
      std::size_t k = 0;
      while (k + 1 < kTopics && u >= theta[k]) u -= theta[k++];
      double v = rng.uniform();
      std::size_t w = 0;
      while (w + 1 < kTerms && v >= s.beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w))) {
        v -= s.beta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w++));
      }
      ++row[w];
    }
  }
  s.corpus = corpus_from_counts(counts);
  return s;
}

double best_permutation_cosine(const Matrix& truth, const Matrix& fitted) {
  std::vector<int> perm(static_cast<std::size_t>(truth.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0;
  do {
    double sum = 0;
    for (Eigen::Index k = 0; k < truth.rows(); ++k) {
      sum += oracle::cosine(oracle::row(truth, k), oracle::row(fitted, perm[static_cast<std::size_t>(k)]));
    }
    best = std::max(best, sum / static_cast<double>(truth.rows()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool sampler_invariants(const LdaSampler& s) {
  const std::size_t k = s.n_topics(), v = s.n_terms();
  std::vector<std::uint32_t> dk(s.n_docs() * k, 0), kw(k * v, 0), nk(k, 0);
  for (std::size_t d = 0; d < s.n_docs(); ++d) {
    for (std::size_t i = 0; i < s.words()[d].size(); ++i) {
      const auto z = s.assignments()[d][i];
      ++dk[d * k + z];
      ++kw[z * v + s.words()[d][i]];
      ++nk[z];
    }
  }
  for (std::size_t d = 0; d < s.n_docs(); ++d) {
    for (std::size_t t = 0; t < k; ++t) {
      if (s.doc_topic_count(d, t) != dk[d * k + t]) return false;
    }
  }
  for (std::size_t t = 0; t < k; ++t) {
    if (s.topic_count(t) != nk[t]) return false;
    for (std::size_t w = 0; w < v; ++w) {
      if (s.topic_word_count(t, w) != kw[t * v + w]) return false;
    }
  }
  const Matrix theta = s.doc_topic(), beta = s.topic_word();
  for (Eigen::Index r = 0; r < theta.rows(); ++r) {
    if (std::abs(theta.row(r).sum() - 1.0) > 1e-9 || theta.row(r).minCoeff() < 0) return false;
  }
  for (Eigen::Index r = 0; r < beta.rows(); ++r) {
    if (std::abs(beta.row(r).sum() - 1.0) > 1e-9 || beta.row(r).minCoeff() < 0) return false;
  }
  return true;
}

void lda_recovery(Check& c) {
  int recovered = 0;
  double worst = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = three_topic_corpus(seed);
    LdaOptions o;
    o.n_topics = 3;
    o.sweeps = 500;
    o.burn_in = 100;
    o.seed = seed;
    std::size_t sweep = 0;
    const auto model = fit_lda(s.corpus.bow, s.corpus.vocabulary, o, [&](const LdaSampler& sampler) {
      if (++sweep % 50 == 0) c.require(sampler_invariants(sampler), "invariant broken at sweep " + std::to_string(sweep) + "; ");
    });
    const double score = best_permutation_cosine(s.beta, model.topic_word);
    worst = std::min(worst, score);
    recovered += score >= 0.95 ? 1 : 0;
  }
  c.require(recovered >= 9, "recovered only " + std::to_string(recovered) + "/10; ");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/10 seeds >= 0.95 (worst %.4f)", recovered, worst);
  c.detail << buf;
}

Frame textured(int w, int h, double dx, double dy) {
  Frame f = Frame::filled(w, h, 0, 0, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = x - dx, v = y - dy;
      const double val = 128 + 50 * std::sin(u / 4.0) * std::cos(v / 5.0) + 30 * std::sin((u + v) / 9.0);
      auto* p = f.pixel(x, y);
      p[0] = p[1] = p[2] = static_cast<std::uint8_t>(std::lround(std::clamp(val, 0.0, 255.0)));
    }
  }
  return f;
}

void flow_ptpt(Check& c) {
  const auto field = optical_flow(textured(200, 150, 0, 0), textured(200, 150, 3, 0));
  std::vector<double> xs, ys;
  for (const auto& v : field.vectors) {
    xs.push_back(v.x);
    ys.push_back(v.y);
  }
  c.require(!xs.empty(), "no tracked points; ");
  const double mx = xs.empty() ? 0 : oracle::median(xs), my = ys.empty() ? 0 : oracle::median(ys);
  c.require(std::abs(mx - 3.0) <= 0.5 && std::abs(my) <= 0.5, "translation off; ");

  Rng rng(5);
  FlowField parallel, scattered;
  for (int i = 0; i < 100; ++i) {
    const double m = 1.0 + rng.uniform();
    parallel.add({double(i), 0}, {m * std::cos(0.3), m * std::sin(0.3)});
    const double a = (2 * rng.uniform() - 1) * std::numbers::pi;
    scattered.add({double(i), 0}, {m * std::cos(a), m * std::sin(a)});
  }
  const double ratio = flow_features(parallel).ptpt / flow_features(scattered).ptpt;
  c.require(ratio >= 10, "parallel/random ratio too small; ");

  FlowField two;
  two.add({0, 0}, {2, 0});
  two.add({5, 5}, {0, 2});
  const double hand = 4.0 / (2 * (std::numbers::pi / 4) * (std::numbers::pi / 4));
  const double ptpt = flow_features(two).ptpt;
  c.require(std::abs(ptpt - hand) <= 1e-6, "N=2 case off; ");
  char buf[128];
  std::snprintf(buf, sizeof buf, "median flow (%.3f, %.3f), ratio %.3g, N=2 ptpt %.6f", mx, my, ratio, ptpt);
  c.detail << buf;
}

void shot_detection(Check& c) {
  VisualFeatureExtractor two;
  for (int i = 0; i < 20; ++i) two.push(i < 10 ? textured(120, 90, 0, 0) : Frame::filled(120, 90, 230, 40, 40), {});
  const auto a = two.finish(1.0);
  c.require(a.shots.cuts.size() == 1 && a.shots.cuts[0] == 10, "expected one cut at frame 10; ");
  c.require(a.shots.shots.size() == 2 && a.shots.shots[0].duration_s == 10.0 && a.shots.shots[1].duration_s == 10.0,
            "shot lengths not 10 s / 10 s; ");
  VisualFeatureExtractor constant;
  for (int i = 0; i < 20; ++i) constant.push(textured(120, 90, 0, 0), {});
  const auto b = constant.finish(1.0);
  c.require(b.shots.cuts.empty(), "constant sequence has cuts; ");
  c.detail << a.shots.cuts.size() << " cut, " << b.shots.cuts.size() << " cuts on constant";
}

void visual_aggregation(Check& c) {
  Rng rng(8);
  Matrix rows(37, static_cast<Eigen::Index>(vf::kFrameFeatures));
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = rng.gamma(1.5);
  rows.col(7).setZero();
  const auto v = aggregate(rows);
  c.require(v.size() == 208 && vf::movie_feature_names().size() == 208, "layout is not 208-dim; ");
  double err = 0;
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    std::vector<double> col(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) col[static_cast<std::size_t>(i)] = rows(i, j);
    const auto s = oracle::column_stats(col);
    for (Eigen::Index k = 0; k < 4; ++k) err = std::max(err, std::abs(v(4 * j + k) - s[static_cast<std::size_t>(k)]));
  }
  c.require(err <= 1e-9, "stat mismatch; ");
  char buf[64];
  std::snprintf(buf, sizeof buf, "max err %.1e over 208 values", err);
  c.detail << buf;
}

void audio_metadata(Check& c) {
  Rng rng(3);
  SegmentLabels labels;
  std::array<double, kAudioEventClasses> events{};
  std::array<double, kMusicGenreClasses> genres{};
  double music = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    Segment s{i, static_cast<AudioEvent>(rng.index(kAudioEventClasses)), std::nullopt};
    events[static_cast<std::size_t>(s.event)] += 1;
    if (s.event == AudioEvent::kMusic) {
      s.genre = static_cast<MusicGenre>(rng.index(kMusicGenreClasses));
      genres[static_cast<std::size_t>(*s.genre)] += 1;
      music += 1;
    }
    labels.segments.push_back(s);
  }
  const auto p = aggregate_labels(labels);
  for (std::size_t k = 0; k < kAudioEventClasses; ++k) c.require(p.events[k] == events[k] / 500.0, "event share; ");
  for (std::size_t k = 0; k < kMusicGenreClasses; ++k) c.require(p.genres[k] == genres[k] / music, "genre share; ");
  SegmentLabels quiet;
  quiet.segments = {{0, AudioEvent::kSpeech, std::nullopt}, {1, AudioEvent::kFights, std::nullopt}};
  for (double g : aggregate_labels(quiet).genres) c.require(g == 0.0, "genre sentinel not zero; ");

  std::vector<MovieMetadata> movies;
  for (int i = 0; i < 8; ++i) {
    movies.push_back({"m" + std::to_string(i), "", {"Actor " + std::to_string(i % 3), "Actor X"},
                      {"Dir " + std::to_string(i % 2)}, {i % 2 ? "Drama" : "Crime", "Film  Noir"}, 0});
  }
  const auto index = build_index(movies);
  const auto r = vectorize(movies, index);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < movies.size(); ++i) {
    std::set<std::string> own;
    for (const auto& a : movies[i].actors) own.insert("actor:" + normalize_tag(a));
    for (const auto& d : movies[i].directors) own.insert("director:" + normalize_tag(d));
    for (const auto& g : movies[i].genres) own.insert("genre:" + normalize_tag(g));
    for (std::size_t j = 0; j < index.size(); ++j) {
      const auto& t = index.tags()[j];
      const double want = own.count(std::string(to_string(t.kind)) + ":" + t.key) ? 1.0 : 0.0;
      mismatches += r.matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == want ? 0 : 1;
    }
  }
  c.require(mismatches == 0, "binary vector mismatch; ");
  c.detail << "8 event + 8 genre shares exact, " << index.size() << " tag columns exact, zero sentinel ok";
}

SimilarityMatrix random_similarity(std::size_t n, std::uint64_t seed, const std::string& modality) {
  Rng rng(seed);
  FeatureMatrix f{modality, {}, Matrix(static_cast<Eigen::Index>(n), 6)};
  for (std::size_t i = 0; i < n; ++i) f.doc_ids.push_back("m" + std::to_string(10 + i));
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = rng.gamma(1.0);
  auto s = cosine_matrix(f);
  s.modality = modality;
  return s;
}

void cosine_fusion(Check& c) {
  const auto a = random_similarity(20, 1, "a");
  const double asym = (a.values - a.values.transpose()).cwiseAbs().maxCoeff();
  c.require(asym <= 1e-12, "asymmetric; ");
  const std::vector<SimilarityMatrix> same = {a, SimilarityMatrix{"b", a.doc_ids, a.values}};
  const auto fused = fuse(same, {{"a", "b"}, {0.35, 0.65}});
  c.require((fused.values - a.values).cwiseAbs().maxCoeff() <= 1e-12, "fuse of identical matrices changed it; ");

  // Ground truth is the first modality; the others are unrelated.
  const auto gt = random_similarity(20, 2, "gt");
  const std::vector<SimilarityMatrix> ms = {SimilarityMatrix{"true", gt.doc_ids, gt.values}, random_similarity(20, 3, "x"),
                                            random_similarity(20, 4, "y")};
  const Evaluator ev(GroundTruth::from_similarity(gt));
  const auto fit = fit_weights(ms, ev);
  c.require(fit.weights.weights[0] >= 0.99, "self-recovery weight " + std::to_string(fit.weights.weights[0]) + "; ");
  const std::vector<std::vector<double>> probes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  for (const auto& p : probes) {
    c.require(fit.objective.compare_measures(fusion_objective(ms, p, ev)) <= 0, "objective worse than a probe; ");
  }
  const std::vector<SimilarityMatrix> pair = {ms[0], ms[1]};
  const auto fit2 = fit_weights(pair, ev);
  c.require(fit2.weights.weights[0] >= 0.99, "grid self-recovery failed; ");
  for (const auto& p : std::vector<std::vector<double>>{{1, 0}, {0, 1}, {0.5, 0.5}}) {
    c.require(fit2.objective.compare_measures(fusion_objective(pair, p, ev)) <= 0, "grid objective worse; ");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "asym %.1e, recovered weight %.2f (3 mods) / %.2f (2 mods)", asym,
                fit.weights.weights[0], fit2.weights.weights[0]);
  c.detail << buf;
}

void evaluation_check(Check& c) {
  Rng rng(10);
  const auto gt = random_similarity(10, 21, "gt");
  const auto model = random_similarity(10, 22, "m");
  const Evaluator ev(GroundTruth::from_similarity(gt));
  const auto r = ev.evaluate(model);
  const auto m = oracle::measures(model.values, gt.values, model.doc_ids);
  c.require(r.median_rank_1st == m.med1 && r.top10_pct_1st == m.top1 && r.median_rank_2nd == m.med2 &&
                r.top10_pct_2nd == m.top2,
            "measures differ from brute force; ");
  const auto self = ev.evaluate(gt);
  c.require(self.median_rank_1st == 1.0 && self.top10_pct_1st == 100.0, "model=GT not perfect; ");
  const std::vector<std::function<double(double)>> transforms = {
      [](double x) { return std::exp(3 * x); }, [](double x) { return x * x * x; },
      [](double x) { return 2 * x + 7; }, [](double x) { return std::atan(5 * x); },
      [](double x) { return std::log(2 + x); }};
  for (const auto& f : transforms) {
    SimilarityMatrix warped = model;
    warped.values = model.values.unaryExpr(f);
    const auto w = ev.evaluate(warped);
    c.require(w.median_rank_1st == r.median_rank_1st && w.top10_pct_1st == r.top10_pct_1st &&
                  w.median_rank_2nd == r.median_rank_2nd && w.top10_pct_2nd == r.top10_pct_2nd,
              "transform changed measures; ");
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "measures %.1f/%.1f/%.1f/%.1f match oracle, 5 transforms invariant", r.median_rank_1st,
                r.top10_pct_1st, r.median_rank_2nd, r.top10_pct_2nd);
  c.detail << buf;
}

void wilcoxon_check(Check& c) {
  const std::vector<double> zero8(8, 0.0), pos8 = {1, 2, 3, 4, 5, 6, 7, 8};
  c.require(wilcoxon_signed_rank(zero8, pos8).p_one_sided == 1.0 / 256.0, "n=8 p != 1/256; ");
  // Darwin's Zea mays differences; published W = 24, one-sided p = 0.0206.
  const std::vector<double> d = {6, 8, 14, 16, 23, 24, 28, 29, 41, -48, 49, 56, 60, -67, 75};
  const std::vector<double> zero(d.size(), 0.0);
  const auto t = wilcoxon_signed_rank(zero, d);
  c.require(std::abs(t.w - 24.0) <= 1e-3 && std::abs(t.p_one_sided - 0.0206) <= 1e-3, "textbook fixture off; ");
  Rng rng(17);
  std::vector<double> d25, z25(25, 0.0);
  for (int i = 0; i < 25; ++i) d25.push_back(rng.normal() + 0.4);
  const auto ex = wilcoxon_signed_rank(z25, d25, WilcoxonMethod::kExact);
  const auto no = wilcoxon_signed_rank(z25, d25, WilcoxonMethod::kNormal);
  c.require(std::abs(ex.p_one_sided - no.p_one_sided) <= 0.01, "exact and normal disagree; ");
  char buf[128];
  std::snprintf(buf, sizeof buf, "W=%.0f p=%.4f, n=25 exact %.4f vs normal %.4f", t.w, t.p_one_sided, ex.p_one_sided,
                no.p_one_sided);
  c.detail << buf;
}

void louvain_check(Check& c) {
  MovieGraph g;
  for (int i = 0; i < 8; ++i) g.nodes.push_back({"n" + std::to_string(i), "", 0, {}, {}});
  for (std::size_t base : {0u, 4u}) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) g.edges.push_back({base + i, base + j, 1.0});
    }
  }
  g.edges.push_back({3, 4, 1.0});
  std::sort(g.edges.begin(), g.edges.end(), [](auto& x, auto& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  const auto r = louvain(g);
  c.require(r.n_communities == 2 && r.community == std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1},
            "cliques not separated; ");
  bool monotone = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = louvain(build_graph(random_similarity(40, seed, "x"), 4), {1.0, seed});
    for (std::size_t i = 1; i < s.phase_modularity.size(); ++i) {
      monotone = monotone && s.phase_modularity[i] >= s.phase_modularity[i - 1] - 1e-12;
    }
  }
  c.require(monotone, "phase modularity decreased; ");
  const auto big = build_graph(random_similarity(40, 9, "x"), 4);
  const auto a = louvain(big), b = louvain(big);
  c.require(a.community == b.community && a.modularity == b.modularity && a.phase_modularity == b.phase_modularity,
            "not deterministic; ");
  c.require(export_json(big, a) == export_json(big, b), "exports differ; ");
  char buf[96];
  std::snprintf(buf, sizeof buf, "2 communities, Q=%.4f, monotone phases, deterministic", r.modularity);
  c.detail << buf;
}

void end_to_end(Check& c) {
  const auto dir = fs::temp_directory_path() / "cinesim_acceptance_boost";
  fs::remove_all(dir);
  const auto manifest = DatasetManifest::load(fixture::write_boost_dataset(dir / "data", 42, 20, 0.5));
  PipelineConfig config;
  Pipeline p(manifest, config, dir / "out", [](std::string_view) {});
  p.run_all();
  const auto report = nlohmann::json::parse(io::read_file(dir / "out" / "evaluation" / "report.json"));
  std::map<std::string, double> median;
  for (const auto& r : report) median[r["model"].get<std::string>()] = r["median_rank_1st"].get<double>();
  c.require(median.count("fused") && median.count("metadata"), "report lacks fused or metadata rows; ");
  const double fused = median["fused"], meta = median["metadata"];
  c.require(fused < meta, "fused not strictly better; ");
  for (const char* f : {"graphs/fused.json", "graphs/metadata.json", "fusion/weights.json"}) {
    c.require(fs::exists(dir / "out" / f), std::string("missing ") + f + "; ");
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "median rank 1st fused %.1f vs metadata %.1f", fused, meta);
  c.detail << buf;
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"tfidf-oracle", 1, tfidf_oracle},
      {"lsi-svd", 5, lsi_check},
      {"lda-recovery", 60, lda_recovery},
      {"optical-flow-ptpt", 10, flow_ptpt},
      {"shot-detection", 5, shot_detection},
      {"visual-aggregation", 0, visual_aggregation},
      {"audio-metadata-vectors", 0, audio_metadata},
      {"cosine-fusion", 0, cosine_fusion},
      {"evaluation-measures", 0, evaluation_check},
      {"wilcoxon", 0, wilcoxon_check},
      {"louvain", 0, louvain_check},
      {"end-to-end-boost", 60, end_to_end},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_s > 0 && secs >= cr.budget_s) {
      check.ok = false;
      check.detail << "; over budget " << cr.budget_s << " s";
    }
    failed += check.ok ? 0 : 1;
    std::printf("%s %-24s %7.3fs  %s\n", check.ok ? "PASS" : "FAIL", cr.name, secs, check.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
