#include "cinesim/random.hpp"
#include "cinesim/wilcoxon.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cinesim;

namespace {

WilcoxonResult run(const std::vector<double>& d, WilcoxonMethod method = WilcoxonMethod::kAuto) {
  const std::vector<double> zero(d.size(), 0.0);
  return wilcoxon_signed_rank(zero, d, method);
}

}  // namespace

// Reference values from scipy.stats.wilcoxon(d, alternative="greater").
TEST(Wilcoxon, ExactSmallSample) {
  const auto r = run({-2, 1, 3, 4, -5, 6, 7, 8, 9, 10});
  EXPECT_EQ(r.n, 10u);
  EXPECT_EQ(r.w_plus, 48.0);
  EXPECT_EQ(r.w_minus, 7.0);
  EXPECT_EQ(r.w, 7.0);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.p_one_sided, 19.0 / 1024.0);
}

TEST(Wilcoxon, DarwinMaize) {
  const auto r = run({6, 8, 14, 16, 23, 24, 28, 29, 41, -48, 49, 56, 60, -67, 75});
  EXPECT_EQ(r.w_plus, 96.0);
  EXPECT_EQ(r.w, 24.0);
  EXPECT_NEAR(r.p_one_sided, 0.0206298828125, 1e-15);
}

TEST(Wilcoxon, TiedNormalApproximation) {
  const auto r = run({1, 1, 2, 2, 2, -3, 4, 4, -5, 6}, WilcoxonMethod::kNormal);
  EXPECT_EQ(r.w_plus, 40.0);
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.p_one_sided, 0.10973346520492189, 1e-12);
  EXPECT_NEAR(std::abs(r.z), 1.227946824231962, 1e-12);
}

TEST(Wilcoxon, AllPositive) {
  const auto r = run({1, 2, 3, 4, 5, 6, 7, 8});
  EXPECT_DOUBLE_EQ(r.p_one_sided, 1.0 / 256.0);
  EXPECT_EQ(r.w, 0.0);
}

TEST(Wilcoxon, ZeroDifferencesDropped) {
  const auto r = run({0, 0, -2, 1, 3, 4, -5, 6, 7, 8, 9, 10});
  EXPECT_EQ(r.n, 10u);
  EXPECT_DOUBLE_EQ(r.p_one_sided, 19.0 / 1024.0);
  const auto none = run({0, 0, 0});
  EXPECT_EQ(none.p_one_sided, 1.0);
  EXPECT_FALSE(none.warning.empty());
}

TEST(Wilcoxon, ExactAndNormalAgreeAtTwentyFive) {
  Rng rng(17);
  std::vector<double> d;
  for (int i = 0; i < 25; ++i) d.push_back(rng.normal() + 0.4);
  const auto exact = run(d, WilcoxonMethod::kExact);
  const auto normal = run(d, WilcoxonMethod::kNormal);
  EXPECT_TRUE(exact.exact);
  EXPECT_NEAR(exact.p_one_sided, normal.p_one_sided, 0.01);
  EXPECT_TRUE(run(d).exact);
  d.push_back(1.0);
  EXPECT_FALSE(run(d).exact);
}

TEST(Wilcoxon, SwappingSamplesSwapsSums) {
  Rng rng(3);
  std::vector<double> a, b;
  for (int i = 0; i < 14; ++i) {
    a.push_back(static_cast<double>(rng.index(10)));
    b.push_back(static_cast<double>(rng.index(10)));
  }
  const auto ab = wilcoxon_signed_rank(a, b), ba = wilcoxon_signed_rank(b, a);
  EXPECT_EQ(ab.w_plus, ba.w_minus);
  EXPECT_EQ(ab.w, ba.w);
  EXPECT_EQ(ab.n, ba.n);
}

TEST(AverageRanks, Ties) {
  const std::vector<double> v = {10, 20, 10, 30, 20, 20};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{1.5, 4, 1.5, 6, 4, 4}));
}
