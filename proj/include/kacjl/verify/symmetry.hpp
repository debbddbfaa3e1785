#pragma once

// Symmetry of symmetric q-Kac walks under signed permutations, and mixing of
// the lazy random-transposition walk on S_d.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/sketch.hpp"
#include "kacjl/verify/trials.hpp"
#include "kacjl/walk.hpp"

namespace kacjl::verify {

// Scalar statistics of a unit vector compared between the two samples.
inline constexpr std::array<const char*, 4> kSymmetryStatistics = {"v1_sq", "v1_pow4",
                                                                  "half_mass", "max_abs"};

inline std::array<double, 4> symmetry_statistics(std::span<const double> v) {
  double half = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < v.size() / 2) half += v[i] * v[i];
    mx = std::max(mx, std::abs(v[i]));
  }
  const double sq = v[0] * v[0];
  return {sq, sq * sq, half, mx};
}

// Applies a uniform signed permutation with determinant +1 to x in place.
inline void random_signed_permutation(std::vector<double>& x, Rng& rng) {
  const std::size_t d = x.size();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  int parity = 1;
  for (std::size_t i = d; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.index(i));
    if (j != i - 1) {
      std::swap(perm[i - 1], perm[j]);
      parity = -parity;
    }
  }
  std::vector<double> out(d);
  int sign_product = 1;
  for (std::size_t i = 0; i < d; ++i) {
    int s = rng.bit() ? -1 : 1;
    // last sign makes det = sign(perm) * prod(signs) = +1
    if (i + 1 == d) s = parity * sign_product;
    sign_product *= s;
    out[perm[i]] = s * x[i];
  }
  x.swap(out);
}

// Two-sided permutation test on the difference of means.
inline double permutation_p_value(std::span<const double> a, std::span<const double> b,
                                  std::size_t permutations, Rng& rng) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t na = a.size(), n = pooled.size();
  const double total = std::accumulate(pooled.begin(), pooled.end(), 0.0);
  auto diff = [&](const std::vector<double>& v) {
    double sa = 0.0;
    for (std::size_t i = 0; i < na; ++i) sa += v[i];
    return std::abs(sa / na - (total - sa) / (n - na));
  };
  const double observed = diff(pooled);
  // Tolerance absorbs summation-order round-off between identical samples.
  const double tol = 1e-12 * (1.0 + observed);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = n; i > 1; --i) std::swap(pooled[i - 1], pooled[rng.index(i)]);
    if (diff(pooled) >= observed - tol) ++extreme;
  }
  return (1.0 + static_cast<double>(extreme)) / (1.0 + static_cast<double>(permutations));
}

struct SymmetryRepetition {
  std::vector<double> p_values;  // one per statistic
  double min_p = 1.0;
};

struct SymmetryReport {
  std::size_t d = 0;
  std::uint64_t T = 0;
  WalkKind kind = WalkKind::Uniform;
  std::size_t samples = 0;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  std::vector<std::string> statistics;
  std::vector<SymmetryRepetition> repetitions;
  std::size_t indistinguishable = 0;  // repetitions with every p > alpha
  std::size_t detected = 0;           // repetitions with some p < alpha
};

// Compares samples of Q_T e1 against Sigma Q_T D_xi e1, with Sigma a uniform
// signed permutation of determinant +1 and xi uniform signs of product +1.
inline SymmetryReport sign_symmetry_test(std::size_t d, std::uint64_t T, WalkKind kind,
                                         std::size_t repetitions, std::uint64_t seed,
                                         std::size_t samples = 500,
                                         std::size_t permutations = 999, double alpha = 0.01) {
  if (!is_symmetric(kind)) throw Error(ErrorCode::NotSymmetric, "walk not symmetric (ORA)");
  if (d < 2) throw Error(ErrorCode::Parameter, "symmetry test needs d >= 2");
  SymmetryReport r;
  r.d = d;
  r.T = T;
  r.kind = kind;
  r.samples = samples;
  r.permutations = permutations;
  r.seed = seed;
  r.alpha = alpha;
  for (const char* s : kSymmetryStatistics) r.statistics.emplace_back(s);

  r.repetitions = run_trials<SymmetryRepetition>(repetitions, seed, [&](Rng& rng, std::size_t) {
    std::array<std::vector<double>, 4> plain, twisted;
    for (std::size_t k = 0; k < samples; ++k) {
      std::vector<double> v(d, 0.0);
      v[0] = 1.0;
      walk_apply(v, WalkSpec{kind, d, T, rng.next()});
      const auto a = symmetry_statistics(v);

      std::vector<double> w(d, 0.0);
      w[0] = 1.0;
      diag_sign_apply(w, true, rng.next());
      walk_apply(w, WalkSpec{kind, d, T, rng.next()});
      random_signed_permutation(w, rng);
      const auto b = symmetry_statistics(w);
      for (std::size_t s = 0; s < 4; ++s) {
        plain[s].push_back(a[s]);
        twisted[s].push_back(b[s]);
      }
    }
    SymmetryRepetition rep;
    for (std::size_t s = 0; s < 4; ++s) {
      rep.p_values.push_back(permutation_p_value(plain[s], twisted[s], permutations, rng));
      rep.min_p = std::min(rep.min_p, rep.p_values.back());
    }
    return rep;
  });
  for (const auto& rep : r.repetitions) {
    if (rep.min_p > alpha) ++r.indistinguishable;
    if (rep.min_p < alpha) ++r.detected;
  }
  return r;
}

inline constexpr std::size_t kPermMixingCap = 7;

// Rank of a permutation of {0..d-1} in [0, d!) via its Lehmer code.
inline std::size_t permutation_rank(std::span<const std::uint8_t> perm) {
  std::size_t rank = 0;
  const std::size_t d = perm.size();
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < d; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
    rank = rank * (d - i) + smaller;
  }
  return rank;
}

inline std::size_t factorial(std::size_t d) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= d; ++k) f *= k;
  return f;
}

// C (d^{1/2} e^{-T/(6d)} + (d!)^{1/2} ((sqrt5 - 1)/2)^{T/2})
inline double perm_mixing_bound(std::size_t d, std::uint64_t T, double C = 1.0) {
  const double dd = static_cast<double>(d), t = static_cast<double>(T);
  return C * (std::sqrt(dd) * std::exp(-t / (6.0 * dd)) +
              std::sqrt(static_cast<double>(factorial(d))) *
                  std::pow((std::sqrt(5.0) - 1.0) / 2.0, t / 2.0));
}

struct PermMixingReport {
  std::size_t d = 0;
  std::uint64_t T = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tv = 0.0;         // plug-in TV to uniform on S_d
  double tv_se = 0.0;      // delta-method standard error
  double bias_scale = 0.0; // sqrt(d! / trials): order of the plug-in upward bias
  double bound = 0.0;
  double bound_constant = 1.0;
  bool trials_sufficient = false;  // trials >= 100 d!
};

// P = s_1^{b_1} ... s_T^{b_T} with uniform transpositions s_t and fair coins b_t.
inline PermMixingReport perm_mixing_tv(std::size_t d, std::uint64_t T, std::size_t trials,
                                       std::uint64_t seed, double bound_constant = 1.0) {
  if (d > kPermMixingCap)
    throw Error(ErrorCode::Cap, "perm mixing needs d <= 7 (d! frequency table)");
  if (d < 2) throw Error(ErrorCode::Parameter, "perm mixing needs d >= 2");
  const std::size_t group = factorial(d);
  PermMixingReport r;
  r.d = d;
  r.T = T;
  r.trials = trials;
  r.seed = seed;
  r.bound_constant = bound_constant;
  r.bound = perm_mixing_bound(d, T, bound_constant);
  r.bias_scale = std::sqrt(static_cast<double>(group) / static_cast<double>(trials));
  r.trials_sufficient = trials >= 100 * group;

  // Trials are batched so each worker owns one frequency table.
  constexpr std::size_t kBatch = 4096;
  const std::size_t batches = (trials + kBatch - 1) / kBatch;
  const auto tables = run_trials<std::vector<std::uint32_t>>(
      batches, seed, [&](Rng& rng, std::size_t b) {
        std::vector<std::uint32_t> counts(group, 0);
        const std::size_t end = std::min(trials, (b + 1) * kBatch);
        std::vector<std::uint8_t> perm(d);
        for (std::size_t k = b * kBatch; k < end; ++k) {
          std::iota(perm.begin(), perm.end(), std::uint8_t{0});
          for (std::uint64_t t = 0; t < T; ++t) {
            const auto i = static_cast<std::size_t>(rng.index(d));
            auto j = static_cast<std::size_t>(rng.index(d - 1));
            if (j >= i) ++j;
            if (rng.bit()) std::swap(perm[i], perm[j]);
          }
          ++counts[permutation_rank(perm)];
        }
        return counts;
      });
  std::vector<double> freq(group, 0.0);
  for (const auto& tab : tables)
    for (std::size_t g = 0; g < group; ++g) freq[g] += tab[g];
  const double n = static_cast<double>(trials), u = 1.0 / static_cast<double>(group);
  double tv = 0.0, mean_sign = 0.0, second = 0.0;
  for (std::size_t g = 0; g < group; ++g) {
    const double p = freq[g] / n;
    tv += std::abs(p - u);
    const double sgn = p > u ? 1.0 : (p < u ? -1.0 : 0.0);
    mean_sign += sgn * p;
    second += sgn * sgn * p;
  }
  r.tv = 0.5 * tv;
  r.tv_se = 0.5 * std::sqrt(std::max(0.0, second - mean_sign * mean_sign) / n);
  return r;
}

struct PermMixingSeries {
  std::vector<PermMixingReport> points;  // ascending T
  double max_tv = 0.1;
  bool decreasing = false;  // tv non-increasing up to 2 combined se
  bool final_ok = false;    // tv at the largest T <= max_tv

  bool pass() const { return decreasing && final_ok; }
};

// One independent run per T, seeded substream_seed(seed, index).
inline PermMixingSeries perm_mixing_series(std::size_t d, std::vector<std::uint64_t> Ts,
                                           std::size_t trials, std::uint64_t seed,
                                           double max_tv = 0.1, double bound_constant = 1.0) {
  if (Ts.empty()) throw Error(ErrorCode::Parameter, "need at least one T");
  std::sort(Ts.begin(), Ts.end());
  PermMixingSeries s;
  s.max_tv = max_tv;
  for (std::size_t i = 0; i < Ts.size(); ++i)
    s.points.push_back(perm_mixing_tv(d, Ts[i], trials, substream_seed(seed, i), bound_constant));
  s.decreasing = true;
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    const auto& a = s.points[i - 1];
    const auto& b = s.points[i];
    if (b.tv > a.tv + 2.0 * std::hypot(a.tv_se, b.tv_se)) s.decreasing = false;
  }
  s.final_ok = s.points.back().tv <= max_tv;
  return s;
}

// Verdict for a symmetry run: expect_same asks for indistinguishable samples,
// otherwise for detection, in at least 90% of repetitions.
inline bool symmetry_pass(const SymmetryReport& r, bool expect_same) {
  const std::size_t reps = r.repetitions.size();
  const std::size_t need = (9 * reps + 9) / 10;
  return (expect_same ? r.indistinguishable : r.detected) >= need;
}

}  // namespace kacjl::verify
