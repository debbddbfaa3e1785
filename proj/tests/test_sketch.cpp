#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "kacjl/sketch.hpp"
#include "oracles.hpp"

using namespace kacjl;

TEST(ProjPrefix, Cases) {
  const std::vector<double> x{1.0, 2.0, 3.0};
  EXPECT_EQ(proj_prefix(x, 2), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(proj_prefix(x, 3), x);
  EXPECT_TRUE(proj_prefix(x, 0).empty());
  EXPECT_THROW(proj_prefix(x, 4), Error);
}

TEST(BinomDraw, Endpoints) {
  EXPECT_EQ(binom_draw(500, 0.0, 1), 0u);
  EXPECT_EQ(binom_draw(500, 1.0, 1), 500u);
  EXPECT_THROW(binom_draw(5, 1.5, 1), Error);
  EXPECT_THROW(binom_draw(5, -0.1, 1), Error);
}

TEST(BinomDraw, MeanMatchesBinomial) {
  const std::size_t d = 10000, seeds = 10000;
  const double q = 0.3;
  double sum = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) sum += static_cast<double>(binom_draw(d, q, substream_seed(17, s)));
  const double se = std::sqrt(d * q * (1 - q) / seeds);
  EXPECT_NEAR(sum / seeds, 3000.0, 3.0 * se);
}

TEST(Bernoulli, EndpointsAndOrder) {
  EXPECT_EQ(select_bernoulli(40, 1.0, 3).resolved_indices().size(), 40u);
  EXPECT_TRUE(select_bernoulli(40, 0.0, 3).resolved_indices().empty());
  const auto sel = select_bernoulli(1000, 0.4, 9);
  const auto idx = sel.resolved_indices();
  EXPECT_EQ(idx.size(), sel.count);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
}

TEST(Bernoulli, SizeTail) {
  // Binomial(1000, 0.1) has sd 9.5; [50, 200] is more than 5 sd from the mean.
  int inside = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto n = select_bernoulli(1000, 0.1, substream_seed(4, s)).resolved_indices().size();
    inside += (n >= 50 && n <= 200) ? 1 : 0;
  }
  EXPECT_GE(inside, 990);
}

TEST(FixedSubset, UniformOverPairsOfFour) {
  std::map<std::vector<std::size_t>, double> freq;
  const int n = 60000;
  for (int s = 0; s < n; ++s) freq[select_fixed(4, 2, substream_seed(21, s)).resolved_indices()] += 1.0;
  ASSERT_EQ(freq.size(), 6u);
  const double p = 1.0 / 6.0, se = std::sqrt(p * (1 - p) / n);
  for (const auto& [subset, c] : freq) EXPECT_NEAR(c / n, p, 3.0 * se);
}

TEST(FixedSubset, SingletonLaw) {
  const int n = 30000;
  int hits = 0;
  for (int s = 0; s < n; ++s) {
    const auto idx = select_fixed(3, 1, substream_seed(22, s)).resolved_indices();
    ASSERT_EQ(idx.size(), 1u);
    hits += idx[0] == 2 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, 1.0 / 3.0, 3.0 * std::sqrt(2.0 / 9.0 / n));
}

TEST(FixedSubset, FullAndSorted) {
  std::vector<std::size_t> all(9);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(select_fixed(9, 9, 1).resolved_indices(), all);
  const auto idx = select_fixed(1000, 37, 5).resolved_indices();
  EXPECT_EQ(idx.size(), 37u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_TRUE(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  EXPECT_THROW(select_fixed(3, 4, 1), Error);
}

TEST(Compact, KeepsSelectedInOrder) {
  std::vector<double> x(50);
  std::iota(x.begin(), x.end(), 0.0);
  const auto sel = select_bernoulli(50, 0.3, 77);
  const auto idx = sel.resolved_indices();
  const auto k = compact(x, sel);
  ASSERT_EQ(k, idx.size());
  for (std::size_t r = 0; r < k; ++r) EXPECT_EQ(x[r], static_cast<double>(idx[r]));
}

TEST(Signs, ConditionedProductIsOne) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto v = sign_vector(11, true, s);
    int prod = 1;
    for (int x : v.signs) prod *= x;
    EXPECT_EQ(prod, 1);
  }
}

TEST(Signs, UnconditionedMeanNearZero) {
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto v = sign_vector(1000, false, substream_seed(8, s));
    mean += std::accumulate(v.signs.begin(), v.signs.end(), 0.0) / 1000.0;
  }
  EXPECT_LT(std::abs(mean / 100.0), 3.0 / std::sqrt(1000.0));
}

TEST(Signs, ApplyMatchesVector) {
  std::vector<double> x(30, 2.0);
  diag_sign_apply(x, true, 12);
  const auto v = sign_vector(30, true, 12);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(x[i], 2.0 * v.signs[i]);
}
