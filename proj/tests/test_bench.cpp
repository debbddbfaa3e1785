#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "kacjl/bench.hpp"

using namespace kacjl;
using namespace kacjl::bench;

TEST(Bench, RecordFields) {
  const auto spec = derive_params(1024, 1u << 20, 0.3, Algorithm::KacFJLT, {}, 1);
  const auto r = time_apply(spec, 5, 1);
  EXPECT_GT(r.median_apply_ns, 0);
  EXPECT_EQ(r.k_out, spec.k_out);
  EXPECT_EQ(r.algorithm, "kac");
  EXPECT_THROW(time_apply(spec, 4, 1), Error);
}

TEST(Bench, IdentityIsCheap) {
  const auto spec = derive_params(1024, 1u << 20, 0.01, Algorithm::KacFJLT, {}, 1);
  ASSERT_EQ(spec.algorithm, Algorithm::Identity);
  EXPECT_LE(time_apply(spec, 9, 1).median_apply_ns, 1000);
}

TEST(Bench, CsvShape) {
  const auto recs = scaling_experiment({512}, 1u << 20, 0.3, Algorithm::KacFJLT, 1, 5);
  ASSERT_EQ(recs.size(), 1u);
  const auto csv = to_csv(recs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kBenchCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_THROW(scaling_experiment({512, 256}, 100, 0.3, Algorithm::KacFJLT, 1), Error);
}

TEST(Bench, GaussianRows) {
  const auto recs = scaling_experiment({512, 1024}, 1000, 0.5, Algorithm::KacFJLT, 1, 5, true);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[1].algorithm, "gaussian");
  EXPECT_EQ(recs[1].k_out, std::min<std::size_t>(512, verify::gaussian_rows(1000, 0.5)));
}

// Timing checks are best of three to ride out scheduler noise.
TEST(Bench, GrowthFollowsDLogD) {
  bool ok = false;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    const auto recs =
        scaling_experiment({1u << 13, 1u << 16}, 1u << 20, 0.3, Algorithm::KacFJLT, 1 + attempt, 5);
    const double ratio = static_cast<double>(recs[1].median_apply_ns) / recs[0].median_apply_ns;
    ok = ratio <= 12.0;
    if (!ok) std::printf("attempt %d: ratio %.2f\n", attempt, ratio);
  }
  EXPECT_TRUE(ok);
}

TEST(Bench, MedianStableUnderMoreReps) {
  const auto spec = derive_params(4096, 1u << 20, 0.3, Algorithm::KacFJLT, {}, 1);
  bool ok = false;
  for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
    const double a = static_cast<double>(time_apply(spec, 7, 1).median_apply_ns);
    const double b = static_cast<double>(time_apply(spec, 14, 1).median_apply_ns);
    ok = std::abs(b - a) <= 0.25 * a;
  }
  EXPECT_TRUE(ok);
}
