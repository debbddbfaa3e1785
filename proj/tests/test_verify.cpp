#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "kacjl/kacjl.hpp"
#include "oracles.hpp"

using namespace kacjl;
using namespace kacjl::verify;

// ---- trials ----

TEST(Trials, IndependentOfThreadCount) {
  auto run = [] {
    return run_trials<double>(257, 5, [](Rng& rng, std::size_t t) { return rng.uniform01() + t; });
  };
  setenv("KACJL_THREADS", "1", 1);
  const auto a = run();
  setenv("KACJL_THREADS", "4", 1);
  const auto b = run();
  unsetenv("KACJL_THREADS");
  EXPECT_EQ(a, b);
}

TEST(Trials, MeanSeAndMedian) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto ms = mean_se(v);
  EXPECT_DOUBLE_EQ(ms.mean, 2.5);
  EXPECT_NEAR(ms.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_DOUBLE_EQ(median(v), 2.5);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
}

// ---- coupling ----

TEST(Coupling, EqualInputsStayEqual) {
  Rng rng(1);
  CoupledPair p{{0.6, 0.8, 0.0, 0.0}, {0.6, 0.8, 0.0, 0.0}};
  for (int t = 0; t < 100; ++t) coupling_step(p, rng);
  EXPECT_EQ(p.X, p.Y);
}

TEST(Coupling, TwoDimensionsCoupleInOneStep) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    CoupledPair p{{1.0, 0.0}, {0.0, 1.0}};
    coupling_step(p, rng);
    EXPECT_NEAR(p.X[0], p.Y[0], 1e-15);
    EXPECT_NEAR(p.X[1], p.Y[1], 1e-15);
  }
}

TEST(Coupling, ExactFactor) {
  EXPECT_NEAR(exact_contraction_factor(10), 1.0 - 1.0 / 20.0 - 3.0 / 180.0, 1e-15);
  EXPECT_NEAR(exact_contraction_factor(10), 0.93333, 1e-5);
}

TEST(Coupling, ContractionExperimentD10) {
  const auto r = contraction_experiment(10, 80, 2000, 1);
  EXPECT_TRUE(r.ratio_pass) << r.ratio << " vs " << r.exact_factor << " se " << r.ratio_se;
  EXPECT_TRUE(r.envelope_pass);
  EXPECT_EQ(r.series.size(), 81u);
  EXPECT_DOUBLE_EQ(r.series[0].mean, 2.0);
}

// ---- moments ----

TEST(Moments, SkBasics) {
  std::vector<double> x{0.6, 0.8, 0.0};
  EXPECT_EQ(s_k(x, 0), 3.0);
  EXPECT_NEAR(s_k(x, 1), 0.5, 1e-15);
  // the lgamma branch agrees with direct evaluation
  const std::vector<double> y{0.9, -0.3, 0.2};
  long double direct = 0.0L, fact = 1.0L;
  for (int m = 2; m <= 22; ++m) fact *= m;
  for (double v : y) direct += std::pow(static_cast<long double>(v), 22) / fact;
  EXPECT_NEAR(s_k(y, 11), static_cast<double>(direct), 1e-12 * static_cast<double>(direct));
}

TEST(Moments, BoundFormula) {
  EXPECT_NEAR(moment_bound(25, 2), 0.02, 1e-15);
  EXPECT_NEAR(moment_bound(25, 1), 0.5, 1e-15);
  EXPECT_NEAR(moment_bound(25, 3), 2.0 / (25.0 * 25.0 * 6.0), 1e-15);
}

TEST(Moments, FirstMomentIsDeterministic) {
  const auto m = moment_experiment(25, 1, 2.25, 500, 3);
  EXPECT_NEAR(m.estimate, 0.5, 1e-12);
  EXPECT_LE(m.std_error, 1e-12);
  EXPECT_TRUE(m.pass);
}

TEST(Moments, SecondMomentD25) {
  const auto m = moment_experiment(25, 2, 2.25, 5000, 4);
  EXPECT_TRUE(m.pass);
  EXPECT_LE(m.estimate, 0.01 + 3.0 * m.std_error);
  EXPECT_TRUE(m.hypothesis_ok);
  EXPECT_FALSE(moment_experiment(10, 2, 2.25, 10, 4).hypothesis_ok);
}

TEST(Moments, OneStepRecursionAgainstEnumeration) {
  const std::size_t d = 5;
  std::vector<double> x(d, 0.0);
  x[0] = 1.0;
  double exact = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      auto y = x;
      apply_event(y, {i, j, 0.0}, WalkKind::ORA);
      exact += s_k(y, 2) / static_cast<double>(d * (d - 1));
    }
  const double bound = ora_step_bound(x, 2);
  EXPECT_LE(exact, bound + 1e-15);
  const auto mc = ora_step_experiment(x, 2, 20000, 5);
  EXPECT_NEAR(mc.estimate, exact, 3.0 * mc.std_error + 1e-15);
  EXPECT_TRUE(mc.pass);
}

TEST(MaxCoord, VacuousAtSmallD) {
  EXPECT_NEAR(max_coord_threshold(100), 2.1461, 1e-3);
  const auto r = max_coord_experiment(100, 4.0, 20, 1);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.violations, 0u);
}

TEST(MaxCoord, TimeMatters) {
  const auto r = max_coord_experiment(10000, 4.0, 10, 1, 0);
  EXPECT_DOUBLE_EQ(r.frequency, 1.0);
  EXPECT_FALSE(r.pass());
}

TEST(MaxCoord, LargeD) {
  EXPECT_NEAR(max_coord_threshold(10000), 0.30348, 1e-5);
  const auto r = max_coord_experiment(10000, 4.0, 1000, 2);
  EXPECT_LE(r.frequency, 0.005);
}

TEST(Subset, FullSubsetNeverFails) {
  const auto r = subset_concentration_experiment(64, 10, 0.1, 8.0, 2.25, 200, 1, 64);
  EXPECT_EQ(r.failures, 0u);
}

TEST(Subset, DeskScale) {
  const auto r = subset_concentration_experiment(512, 100, 0.5, 8.0, 2.25, 1000, 2);
  EXPECT_LE(r.frequency, 0.01);
  const auto wide = subset_concentration_experiment(512, 100, 0.99, 8.0, 2.25, 1000, 2, r.k);
  EXPECT_LE(wide.failures, r.failures);
}

// ---- RIP ----

TEST(Rip, OrthogonalHasZeroDelta) {
  EXPECT_EQ(delta_s_exact(Eigen::MatrixXd::Identity(10, 10), 3).delta_s, 0.0);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(6, 6);
  const int perm[6] = {3, 0, 5, 1, 4, 2};
  for (int r = 0; r < 6; ++r) P(r, perm[r]) = r % 2 ? -1.0 : 1.0;
  EXPECT_EQ(delta_s_exact(P, 2).delta_s, 0.0);
  const auto Q = walk_matrix({WalkKind::Uniform, 12, 400, 3});
  EXPECT_LE(delta_s_exact(Q, 3).delta_s, 1e-12);
}

TEST(Rip, MatchesJacobiOracle) {
  const auto A = rademacher_matrix(64, 16, 7);
  EXPECT_NEAR(delta_s_exact(A, 2).delta_s, oracle::delta_s(A, 2), 1e-8);
  EXPECT_NEAR(delta_s_exact(A, 3).delta_s, oracle::delta_s(A, 3), 1e-8);
}

TEST(Rip, MonotoneAndScaleLaw) {
  const auto A = rademacher_matrix(20, 12, 9);
  double prev = 0.0;
  for (std::size_t s = 1; s <= 5; ++s) {
    const double ds = delta_s_exact(A, s).delta_s;
    EXPECT_GE(ds, prev - 1e-15);
    prev = ds;
  }
  const auto r = delta_s_exact(A, 3);
  for (double c : {0.5, 2.0})
    EXPECT_NEAR(delta_s_exact(c * A, 3).delta_s, scaled_delta(r, c), 1e-8);
}

TEST(Rip, CapAndRange) {
  EXPECT_THROW(delta_s_exact(Eigen::MatrixXd::Identity(64, 64), 6), Error);
  EXPECT_THROW(delta_s_exact(Eigen::MatrixXd::Identity(4, 4), 5), Error);
}

TEST(Rip, DirksenTrend) {
  const auto r = dirksen_subsample_check(16, {4, 8, 12, 16}, 2, 50, 3);
  EXPECT_LE(r.rows[2].median_delta, r.rows[0].median_delta);
  EXPECT_TRUE(r.monotone);
}

TEST(KrahmerWard, OrthogonalPassesAlways) {
  const auto Q = walk_matrix({WalkKind::Uniform, 16, 600, 2});
  const auto r = krahmer_ward_check(Q, 2, random_unit_points(20, 16, 3), 0.1, 200, 4);
  EXPECT_DOUBLE_EQ(r.pass_rate, 1.0);
  EXPECT_TRUE(r.precondition_met);
}

TEST(KrahmerWard, RademacherInstance) {
  const auto r = krahmer_ward_check(rademacher_matrix(64, 16, 1), 2, cube_vertices(16), 0.6, 200, 5);
  EXPECT_GE(r.pass_rate, 0.75);
}

TEST(KrahmerWard, ZeroColumnFailsPrecondition) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(8, 8);
  A.col(3).setZero();
  const auto r = krahmer_ward_check(A, 1, cube_vertices(8), 0.5, 10, 1);
  EXPECT_DOUBLE_EQ(r.delta_s, 1.0);
  EXPECT_FALSE(r.precondition_met);
  EXPECT_NE(r.note.find("NOT met"), std::string::npos);
}

// ---- JL ----

TEST(Distortion, IdentityAndDoubling) {
  const auto pts = random_unit_points(10, 5, 1);
  const auto id = jl_distortion([](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); },
                                pts, 1e-9);
  EXPECT_TRUE(id.pass);
  for (double q : id.per_point_ratio) EXPECT_EQ(q, 1.0);
  const auto twice = jl_distortion(
      [](std::span<const double> x) {
        std::vector<double> y(x.begin(), x.end());
        for (auto& v : y) v *= 2.0;
        return y;
      },
      pts, 0.5);
  EXPECT_FALSE(twice.pass);
  EXPECT_DOUBLE_EQ(twice.per_point_ratio[0], 2.0);
}

TEST(Distortion, ZeroRowsExcluded) {
  PointSet p(2, 3, {0, 0, 0, 1, 0, 0});
  const auto spec = derive_params(3, 2, 0.9, Algorithm::KacFJLT);
  const auto r = transform_distortion(spec, p, 0.5);
  EXPECT_EQ(r.excluded, std::vector<std::size_t>{0});
  EXPECT_FALSE(r.note.empty());
}

TEST(Gaussian, UnbiasedAndColumnNorms) {
  const std::size_t d = 64, k = 16;
  std::vector<double> q, cols;
  std::vector<double> x(d, 0.0);
  x[0] = 0.6;
  x[5] = 0.8;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const Eigen::MatrixXd G = gaussian_baseline(d, k, substream_seed(3, s));
    q.push_back((G * Eigen::Map<Eigen::VectorXd>(x.data(), d)).squaredNorm());
    cols.push_back(G.col(0).squaredNorm());
  }
  const auto a = mean_se(q), b = mean_se(cols);
  EXPECT_NEAR(a.mean, 1.0, 3.0 * a.std_error);
  EXPECT_NEAR(b.mean, 1.0, 3.0 * b.std_error);
  EXPECT_THROW(gaussian_baseline(4, 5, 1), Error);
}

TEST(Gaussian, JlPassRate) {
  const auto r = gaussian_jl_experiment(512, 100, 0.3, 50, 2);
  EXPECT_GE(r.pass_rate, 2.0 / 3.0);
}

// ---- symmetry and permutations ----

TEST(Symmetry, OraRejected) {
  try {
    sign_symmetry_test(8, 10, WalkKind::ORA, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
    EXPECT_NE(std::string(e.what()).find("walk not symmetric"), std::string::npos);
  }
}

TEST(Symmetry, MixedWalkIsIndistinguishable) {
  const auto r = sign_symmetry_test(8, 200, WalkKind::Uniform, 10, 6);
  EXPECT_TRUE(symmetry_pass(r, true)) << r.indistinguishable;
  const auto s = sign_symmetry_test(8, 200, WalkKind::SORA, 10, 6);
  EXPECT_TRUE(symmetry_pass(s, true)) << s.indistinguishable;
}

TEST(Symmetry, EmptyWalkIsDetected) {
  const auto r = sign_symmetry_test(8, 0, WalkKind::Uniform, 10, 7);
  EXPECT_EQ(r.detected, 10u);
}

TEST(Symmetry, SignedPermutationHasUnitDeterminant) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    Eigen::MatrixXd M(5, 5);
    for (int c = 0; c < 5; ++c) {
      std::vector<double> e(5, 0.0);
      e[c] = 1.0;
      Rng copy = rng;
      random_signed_permutation(e, copy);
      M.col(c) = Eigen::Map<Eigen::VectorXd>(e.data(), 5);
    }
    EXPECT_NEAR(M.determinant(), 1.0, 1e-12);
    std::vector<double> burn(5, 0.0);
    random_signed_permutation(burn, rng);
  }
}

TEST(PermMixing, RankIsBijection) {
  std::vector<std::uint8_t> p{0, 1, 2, 3};
  std::vector<bool> seen(24, false);
  do {
    const auto r = permutation_rank(p);
    ASSERT_LT(r, 24u);
    EXPECT_FALSE(seen[r]);
    seen[r] = true;
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST(PermMixing, ZeroStepsIsPointMass) {
  const auto r = perm_mixing_tv(4, 0, 1000, 1);
  EXPECT_NEAR(r.tv, 1.0 - 1.0 / 24.0, 1e-15);
}

TEST(PermMixing, SmallGroupMixes) {
  const auto r = perm_mixing_tv(3, 200, 100000, 2);
  EXPECT_LE(r.tv, 0.05);
  EXPECT_TRUE(r.trials_sufficient);
}

TEST(PermMixing, TrendAndCap) {
  const double l = 5.0 * std::log(5.0);
  const auto a = perm_mixing_tv(5, 5, 100000, 3);
  const auto b = perm_mixing_tv(5, static_cast<std::uint64_t>(std::ceil(5 * l)), 100000, 4);
  EXPECT_LE(b.tv, a.tv - 2.0 * std::hypot(a.tv_se, b.tv_se));
  EXPECT_THROW(perm_mixing_tv(8, 1, 10, 1), Error);
}

// ---- reports ----

TEST(Reports, SeedsTravelAsStrings) {
  const auto r = contraction_experiment(5, 5, 100, 0xFFFFFFFFFFFFFFFFull);
  const auto j = to_json(r);
  EXPECT_EQ(j["parameters"]["seed"], "18446744073709551615");
  EXPECT_EQ(dump_json(j), dump_json(to_json(contraction_experiment(5, 5, 100, 0xFFFFFFFFFFFFFFFFull))));
  EXPECT_EQ(to_csv(r).substr(0, 2), "t,");
}
