#pragma once

// Even-moment statistics of ORA and the experiments built on them: the
// S_p moment bound, the max-coordinate bound, and concentration of random
// coordinate subsets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <optional>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/sketch.hpp"
#include "kacjl/verify/trials.hpp"
#include "kacjl/walk.hpp"

namespace kacjl::verify {

// S_k(x) = (1/(2k)!) sum_i x_i^{2k}
inline double s_k(std::span<const double> x, unsigned k) {
  if (k == 0) return static_cast<double>(x.size());
  if (k <= 10) {
    double fact = 1.0;
    for (unsigned m = 2; m <= 2 * k; ++m) fact *= m;
    double s = 0.0;
    for (double v : x) {
      const double sq = v * v;
      double p = 1.0;
      for (unsigned m = 0; m < k; ++m) p *= sq;
      s += p;
    }
    return s / fact;
  }
  const double log_fact = std::lgamma(2.0 * k + 1.0);
  double s = 0.0;
  for (double v : x)
    if (v != 0.0) s += std::exp(2.0 * k * std::log(std::abs(v)) - log_fact);
  return s;
}

inline constexpr double kRoundoff = 1e-12;

// 2^{p-2} d^{1-p} / p!
inline double moment_bound(std::size_t d, unsigned p) {
  const double dp = static_cast<double>(p);
  return std::exp((dp - 2.0) * std::log(2.0) + (1.0 - dp) * std::log(static_cast<double>(d)) -
                  std::lgamma(dp + 1.0));
}

inline std::uint64_t moment_mixing_time(std::size_t d, unsigned p, double c_moment) {
  const double dd = static_cast<double>(d);
  return static_cast<std::uint64_t>(std::ceil(c_moment * p * dd * std::log(dd)));
}

struct MomentStats {
  std::size_t d = 0;
  unsigned p = 0;
  std::uint64_t t = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool hypothesis_ok = true;  // d >= 25
  bool pass = false;          // estimate <= bound (1 + 1e-12) + 3 se
};

// ORA from e1 for t = ceil(c_moment p d log d) steps, trials times.
inline MomentStats moment_experiment(std::size_t d, unsigned p, double c_moment,
                                     std::size_t trials, std::uint64_t seed,
                                     std::optional<std::uint64_t> steps = std::nullopt) {
  if (d < 2) throw Error(ErrorCode::Parameter, "moment experiment needs d >= 2");
  if (p < 1 || p > d) throw Error(ErrorCode::Parameter, "moment order p must lie in [1, d]");
  if (trials < 1) throw Error(ErrorCode::Parameter, "need at least one trial");
  MomentStats m;
  m.d = d;
  m.p = p;
  m.t = steps.value_or(moment_mixing_time(d, p, c_moment));
  m.trials = trials;
  m.seed = seed;
  m.bound = moment_bound(d, p);
  m.hypothesis_ok = d >= 25;
  const auto values = run_trials<double>(trials, seed, [&](Rng& rng, std::size_t) {
    std::vector<double> x(d, 0.0);
    x[0] = 1.0;
    walk_apply(x, WalkSpec{WalkKind::ORA, d, m.t, rng.next()});
    return s_k(x, p);
  });
  const auto ms = mean_se(values);
  m.estimate = ms.mean;
  m.std_error = ms.std_error;
  // The relative slack absorbs round-off: rotations preserve norms only to ~1 ulp.
  m.pass = m.estimate <= m.bound * (1.0 + kRoundoff) + 3.0 * m.std_error;
  return m;
}

// Right-hand side of the one-step ORA recursion for a deterministic x:
// (1 - 2/d) S_k(x) + 2^{1-k} / (d(d-1)) sum_{a=0}^k S_a(x) S_{k-a}(x).
inline double ora_step_bound(std::span<const double> x, unsigned k) {
  const double d = static_cast<double>(x.size());
  double cross = 0.0;
  for (unsigned a = 0; a <= k; ++a) cross += s_k(x, a) * s_k(x, k - a);
  return (1.0 - 2.0 / d) * s_k(x, k) + std::pow(2.0, 1.0 - k) / (d * (d - 1.0)) * cross;
}

struct StepMomentStats {
  unsigned k = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Monte Carlo E[S_k(Rx)] for a single ORA step R.
inline StepMomentStats ora_step_experiment(std::span<const double> x, unsigned k,
                                           std::size_t trials, std::uint64_t seed) {
  const std::size_t d = x.size();
  StepMomentStats s;
  s.k = k;
  s.trials = trials;
  s.bound = ora_step_bound(x, k);
  const auto values = run_trials<double>(trials, seed, [&](Rng& rng, std::size_t) {
    std::vector<double> y(x.begin(), x.end());
    apply_event(y, sample_event(rng, WalkKind::ORA, d), WalkKind::ORA);
    return s_k(y, k);
  });
  const auto ms = mean_se(values);
  s.estimate = ms.mean;
  s.std_error = ms.std_error;
  s.pass = s.estimate <= s.bound + 3.0 * s.std_error;
  return s;
}

inline double max_coord_threshold(std::size_t d) {
  const double dd = static_cast<double>(d);
  return 10.0 * std::sqrt(std::log(dd) / dd);
}

inline std::uint64_t max_coord_time(std::size_t d, double c_maxcoord) {
  const double dd = static_cast<double>(d);
  const double log_d = std::log(dd);
  return static_cast<std::uint64_t>(
      std::ceil(c_maxcoord * dd * log_d * std::max(1.0, std::log(log_d))));
}

struct MaxCoordReport {
  std::size_t d = 0;
  std::uint64_t t = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;  // 10 sqrt(log d / d)
  std::size_t violations = 0;
  double frequency = 0.0;
  double reference = 0.0;  // d^-2
  bool vacuous = false;    // threshold > 1: no unit vector can violate it
  double tolerance = 0.005;

  bool pass() const { return frequency <= tolerance; }
};

// Frequency of ||Q_t e1||_inf >= 10 sqrt(log d / d) under ORA.
inline MaxCoordReport max_coord_experiment(std::size_t d, double c_maxcoord, std::size_t trials,
                                           std::uint64_t seed,
                                           std::optional<std::uint64_t> steps = std::nullopt) {
  if (d < 2) throw Error(ErrorCode::Parameter, "max-coordinate experiment needs d >= 2");
  MaxCoordReport r;
  r.d = d;
  r.t = steps.value_or(max_coord_time(d, c_maxcoord));
  r.trials = trials;
  r.seed = seed;
  r.threshold = max_coord_threshold(d);
  r.reference = 1.0 / (static_cast<double>(d) * static_cast<double>(d));
  r.vacuous = r.threshold > 1.0;
  const auto hits = run_trials<int>(trials, seed, [&](Rng& rng, std::size_t) {
    std::vector<double> x(d, 0.0);
    x[0] = 1.0;
    walk_apply(x, WalkSpec{WalkKind::ORA, d, r.t, rng.next()});
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m >= r.threshold ? 1 : 0;
  });
  for (int h : hits) r.violations += static_cast<std::size_t>(h);
  r.frequency = trials ? static_cast<double>(r.violations) / static_cast<double>(trials) : 0.0;
  return r;
}

struct SubsetConcentrationReport {
  std::size_t d = 0;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  std::size_t k = 0;
  std::uint64_t t = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
  double frequency = 0.0;
  double reference = 0.0;  // n^-3
  double tolerance = 0.01;

  bool pass() const { return frequency <= tolerance; }
};

// ORA from e1 for t = ceil(c_moment d log d log n) steps; each trial draws a
// uniform k-subset S and checks sum_{i in S} X_t[i]^2 in (k/d)[1-eps, 1+eps].
inline SubsetConcentrationReport subset_concentration_experiment(
    std::size_t d, std::uint64_t n, double epsilon, double c_k2, double c_moment,
    std::size_t trials, std::uint64_t seed, std::optional<std::size_t> k_override = std::nullopt) {
  if (n < 2) throw Error(ErrorCode::Parameter, "n must be at least 2");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Parameter, "epsilon must be positive");
  const double log_n = std::log(static_cast<double>(n));
  SubsetConcentrationReport r;
  r.d = d;
  r.n = n;
  r.epsilon = epsilon;
  r.k = k_override.value_or(
      static_cast<std::size_t>(std::ceil(c_k2 * log_n / (epsilon * epsilon))));
  if (r.k > d || r.k == 0)
    throw Error(ErrorCode::Parameter, "subset size k = " + std::to_string(r.k) +
                                          " must lie in [1, d = " + std::to_string(d) + "]");
  const double dd = static_cast<double>(d);
  r.t = static_cast<std::uint64_t>(std::ceil(c_moment * dd * std::log(dd) * log_n));
  r.trials = trials;
  r.seed = seed;
  r.reference = std::exp(-3.0 * log_n);
  const double centre = static_cast<double>(r.k) / dd;
  const auto fails = run_trials<int>(trials, seed, [&](Rng& rng, std::size_t) {
    std::vector<double> x(d, 0.0);
    x[0] = 1.0;
    walk_apply(x, WalkSpec{WalkKind::ORA, d, r.t, rng.next()});
    double mass = 0.0;
    select_fixed(d, r.k, rng.next()).for_each([&](std::size_t i) { mass += x[i] * x[i]; });
    return (mass < centre * (1.0 - epsilon) || mass > centre * (1.0 + epsilon)) ? 1 : 0;
  });
  for (int f : fails) r.failures += static_cast<std::size_t>(f);
  r.frequency = trials ? static_cast<double>(r.failures) / static_cast<double>(trials) : 0.0;
  return r;
}

}  // namespace kacjl::verify
