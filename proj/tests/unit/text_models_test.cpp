#include "cinesim/bow.hpp"
#include "cinesim/error.hpp"
#include "cinesim/linalg.hpp"
#include "cinesim/random.hpp"
#include "cinesim/similarity.hpp"
#include "cinesim/text_models.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"

using namespace cinesim;

namespace {

Corpus corpus_from_counts(const std::vector<std::vector<std::uint32_t>>& counts) {
  Corpus c;
  const std::size_t v = counts.front().size();
  for (std::size_t t = 0; t < v; ++t) {
    c.vocabulary.terms.push_back("t" + std::to_string(100 + t));
    c.vocabulary.term_to_index.emplace(c.vocabulary.terms.back(), t);
    std::size_t df = 0, cf = 0;
    for (const auto& row : counts) {
      df += row[t] > 0 ? 1 : 0;
      cf += row[t];
    }
    c.vocabulary.doc_freq.push_back(df);
    c.vocabulary.collection_freq.push_back(cf);
  }
  c.bow.n_terms = v;
  for (std::size_t d = 0; d < counts.size(); ++d) {
    c.bow.doc_ids.push_back("d" + std::to_string(d));
    std::vector<BowEntry> row;
    for (std::size_t t = 0; t < v; ++t) {
      if (counts[d][t] > 0) row.push_back({t, counts[d][t]});
    }
    c.bow.rows.push_back(std::move(row));
  }
  return c;
}

std::vector<std::vector<std::uint32_t>> random_counts(std::size_t n, std::size_t v, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> counts(n, std::vector<std::uint32_t>(v));
  for (auto& row : counts) {
    for (auto& x : row) x = rng.uniform() < 0.45 ? static_cast<std::uint32_t>(1 + rng.index(5)) : 0;
  }
  for (std::size_t t = 0; t < v; ++t) counts[t % n][t] += 1;  // every term used
  return counts;
}

}  // namespace

TEST(TfIdf, SingleDocumentTermAmongFour) {
  const auto c = corpus_from_counts({{3, 1}, {0, 1}, {0, 1}, {0, 1}});
  const auto w = tfidf(c.bow, c.vocabulary);
  EXPECT_EQ(w.weights(0, 0), 6.0);
  for (Eigen::Index d = 0; d < 4; ++d) EXPECT_EQ(w.weights(d, 1), 0.0);
}

TEST(TfIdf, MatchesDirectFormula) {
  const auto counts = random_counts(6, 20, 5);
  const auto c = corpus_from_counts(counts);
  const auto w = tfidf(c.bow, c.vocabulary);
  for (std::size_t d = 0; d < 6; ++d) {
    for (std::size_t t = 0; t < 20; ++t) {
      std::size_t n_i = 0;
      for (const auto& row : counts) n_i += row[t] > 0 ? 1 : 0;
      const double expected = counts[d][t] * std::log2(6.0 / static_cast<double>(n_i));
      EXPECT_EQ(w.weights(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)), expected);
      if (counts[d][t] == 0) EXPECT_EQ(w.weights(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)), 0.0);
    }
  }
}

TEST(TfIdf, ScalingCountsScalesRowAndKeepsCosine) {
  auto counts = random_counts(5, 12, 9);
  const auto base = tfidf(corpus_from_counts(counts).bow, corpus_from_counts(counts).vocabulary);
  for (auto& x : counts[2]) x *= 3;
  const auto c = corpus_from_counts(counts);
  const auto scaled = tfidf(c.bow, c.vocabulary);
  for (Eigen::Index t = 0; t < 12; ++t) EXPECT_DOUBLE_EQ(scaled.weights(2, t), 3.0 * base.weights(2, t));
  const auto s1 = cosine_matrix(project(base));
  const auto s2 = cosine_matrix(project(scaled));
  EXPECT_LT((s1.values - s2.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JacobiSvd, MatchesDenseOracle) {
  Rng rng(3);
  for (auto [m, n] : {std::pair{6, 8}, std::pair{8, 6}, std::pair{5, 5}, std::pair{12, 3}}) {
    Matrix a(m, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    const auto svd = jacobi_svd(a);
    Eigen::BDCSVD<Eigen::MatrixXd> ref(Eigen::MatrixXd(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
    ASSERT_EQ(svd.s.size(), ref.singularValues().size());
    for (Eigen::Index k = 0; k < svd.s.size(); ++k) {
      EXPECT_NEAR(svd.s(k), ref.singularValues()(k), 1e-10 * ref.singularValues()(0));
    }
    const Matrix recon = svd.u * svd.s.asDiagonal() * svd.v.transpose();
    EXPECT_LT((recon - a).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Lsi, TruncatedSingularValuesMatchOracle) {
  const auto c = corpus_from_counts(random_counts(6, 8, 11));
  const auto w = tfidf(c.bow, c.vocabulary);
  const auto model = fit_lsi(w, 3);
  Eigen::JacobiSVD<Eigen::MatrixXd> ref(Eigen::MatrixXd(w.weights));
  ASSERT_EQ(model.singular_values.size(), 3);
  for (Eigen::Index k = 0; k < 3; ++k) {
    EXPECT_NEAR(model.singular_values(k), ref.singularValues()(k), 1e-6 * ref.singularValues()(k));
    if (k > 0) EXPECT_LE(model.singular_values(k), model.singular_values(k - 1));
  }
  const Matrix gram = model.term_concepts.transpose() * model.term_concepts;
  EXPECT_LT((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Lsi, FullRankPreservesCosines) {
  const auto c = corpus_from_counts(random_counts(6, 8, 17));
  const auto w = tfidf(c.bow, c.vocabulary);
  const auto model = fit_lsi(w, 6);
  const auto s_tfidf = cosine_matrix(project(w));
  const auto s_lsi = cosine_matrix(project(model));
  EXPECT_LT((s_tfidf.values - s_lsi.values).cwiseAbs().maxCoeff(), 1e-9);
  for (Eigen::Index d = 0; d < 6; ++d) {
    EXPECT_NEAR(model.doc_embedding.row(d).norm(), w.weights.row(d).norm(), 1e-9);
  }
  const auto truncated = fit_lsi(w, 2);
  for (Eigen::Index d = 0; d < 6; ++d) EXPECT_LE(truncated.doc_embedding.row(d).norm(), w.weights.row(d).norm() + 1e-12);
}

TEST(Lsi, RankOneOuterProduct) {
  TfIdfMatrix m;
  m.doc_ids = {"a", "b", "c"};
  m.terms = {"x", "y"};
  Eigen::Vector3d u(1, 2, 2);
  Eigen::Vector2d v(3, 4);
  m.weights = u * v.transpose();
  const auto model = fit_lsi(m, 1);
  EXPECT_NEAR(model.singular_values(0), u.norm() * v.norm(), 1e-12);
}

TEST(Lsi, RankDeficientKeepsAvailableRank) {
  TfIdfMatrix m;
  m.doc_ids = {"a", "b", "c"};
  m.terms = {"x", "y", "z"};
  m.weights = Matrix::Zero(3, 3);
  m.weights << 1, 0, 0, 2, 0, 0, 0, 1, 0;
  const auto model = fit_lsi(m, 3);
  EXPECT_EQ(model.n_concepts, 2u);
  EXPECT_FALSE(model.warnings.empty());
}

TEST(Lsi, TooManyConceptsThrows) {
  const auto c = corpus_from_counts(random_counts(4, 6, 2));
  EXPECT_THROW(fit_lsi(tfidf(c.bow, c.vocabulary), 5), Error);
}

TEST(Lsi, TopTermsAndPersistence) {
  const auto c = corpus_from_counts(random_counts(6, 8, 23));
  const auto model = fit_lsi(tfidf(c.bow, c.vocabulary), 4);
  const auto top = top_terms(model, 0, 100);
  EXPECT_EQ(top.size(), 8u);
  for (std::size_t i = 1; i < top.size(); ++i) EXPECT_GE(std::abs(top[i - 1].second), std::abs(top[i].second));
  const auto dir = std::filesystem::temp_directory_path() / "cinesim_lsi_test";
  save_lsi(dir, model);
  const auto back = load_lsi(dir);
  EXPECT_EQ(back.n_concepts, model.n_concepts);
  EXPECT_EQ(back.terms, model.terms);
  EXPECT_TRUE(back.doc_embedding == model.doc_embedding);
  EXPECT_TRUE(back.term_concepts == model.term_concepts);
  EXPECT_TRUE(back.singular_values == model.singular_values);
  std::filesystem::remove_all(dir);
}

TEST(Project, Dimensions) {
  const auto c = corpus_from_counts(random_counts(6, 8, 29));
  const auto w = tfidf(c.bow, c.vocabulary);
  EXPECT_EQ(project(w).values.cols(), 8);
  EXPECT_EQ(project(fit_lsi(w, 5)).values.cols(), 5);
}
