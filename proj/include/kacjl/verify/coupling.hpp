#pragma once

// Proportional coupling of two uniform Kac walks on the sphere and the
// contraction of sum_i (X[i]^2 - Y[i]^2)^2 it produces.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/verify/trials.hpp"
#include "kacjl/walk.hpp"

namespace kacjl::verify {

struct CoupledPair {
  std::vector<double> X;
  std::vector<double> Y;
};

// Below this radius the polar angle of X' is undefined and every angle
// satisfies the coupling equations.
inline constexpr double kDegenerateRadius = 1e-12;

// One coupled step: X takes a uniform Kac step on a shared pair (i, j); Y's
// (i, j) block is turned to point along X's new block, keeping Y's block
// radius. Rotations preserve the block radius, so scaling X's new block by
// r_y / r_x does this without trigonometry and is exact when the blocks agree.
inline void coupling_step(CoupledPair& pair, Rng& rng) {
  const std::size_t d = pair.X.size();
  if (pair.Y.size() != d) throw Error(ErrorCode::Dimension, "coupled vectors differ in length");
  const RotationEvent e = sample_event(rng, WalkKind::Uniform, d);
  const double r_x = std::hypot(pair.X[e.i], pair.X[e.j]);
  const double r_y = std::hypot(pair.Y[e.i], pair.Y[e.j]);
  apply_event(pair.X, e, WalkKind::Uniform);
  if (r_x < kDegenerateRadius) {
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    pair.Y[e.i] = r_y * std::cos(phi);
    pair.Y[e.j] = r_y * std::sin(phi);
    return;
  }
  const double scale = r_y / r_x;
  pair.Y[e.i] = scale * pair.X[e.i];
  pair.Y[e.j] = scale * pair.X[e.j];
}

inline double squared_coordinate_gap(const CoupledPair& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.X.size(); ++k) {
    const double g = p.X[k] * p.X[k] - p.Y[k] * p.Y[k];
    s += g * g;
  }
  return s;
}

// Exact one-step factor E[D_{t+1} | X_t, Y_t] / D_t for unit X_t, Y_t.
inline double exact_contraction_factor(std::size_t d) {
  const double dd = static_cast<double>(d);
  return 1.0 - 1.0 / (2.0 * dd) - 3.0 / (2.0 * dd * (dd - 1.0));
}

inline double contraction_envelope(std::size_t d, std::uint64_t t) {
  return 2.0 * std::exp(-static_cast<double>(t) / (2.0 * static_cast<double>(d)));
}

struct ContractionPoint {
  std::uint64_t t = 0;
  double mean = 0.0;       // Monte Carlo D_t
  double std_error = 0.0;
  double envelope = 0.0;   // 2 exp(-t / 2d)
  double step_ratio = 0.0; // D_{t+1} / D_t; 0 at t = t_max
  double step_ratio_se = 0.0;
};

struct ContractionReport {
  std::size_t d = 0;
  std::uint64_t t_max = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double exact_factor = 0.0;
  // Pooled one-step ratio sum_t D_{t+1} / sum_t D_t over t < t_max.
  double ratio = 0.0;
  double ratio_se = 0.0;
  double ratio_z = 0.0;
  bool ratio_pass = false;      // |ratio - exact| <= 3 se
  bool envelope_pass = false;   // D_t <= envelope + 3 se for all t
  std::vector<ContractionPoint> series;

  bool pass() const { return ratio_pass && envelope_pass; }
};

// Monte Carlo of the coupled pair started at X0 = e1, Y0 = e2.
inline ContractionReport contraction_experiment(std::size_t d, std::uint64_t t_max,
                                                std::size_t trials, std::uint64_t seed) {
  if (d < 3) throw Error(ErrorCode::Parameter, "contraction experiment needs d >= 3");
  if (trials < 100) throw Error(ErrorCode::Parameter, "contraction experiment needs >= 100 trials");
  if (t_max < 1) throw Error(ErrorCode::Parameter, "t_max must be at least 1");

  const std::size_t len = static_cast<std::size_t>(t_max) + 1;
  auto paths = run_trials<std::vector<double>>(trials, seed, [&](Rng& rng, std::size_t) {
    CoupledPair p{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    p.X[0] = 1.0;
    p.Y[1] = 1.0;
    std::vector<double> gaps(len);
    gaps[0] = squared_coordinate_gap(p);
    for (std::size_t t = 1; t < len; ++t) {
      coupling_step(p, rng);
      gaps[t] = squared_coordinate_gap(p);
    }
    return gaps;
  });

  ContractionReport r;
  r.d = d;
  r.t_max = t_max;
  r.trials = trials;
  r.seed = seed;
  r.exact_factor = exact_contraction_factor(d);
  r.envelope_pass = true;

  std::vector<double> col(trials), next(trials);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t k = 0; k < trials; ++k) col[k] = paths[k][t];
    const auto ms = mean_se(col);
    ContractionPoint pt{t, ms.mean, ms.std_error, contraction_envelope(d, t), 0.0, 0.0};
    if (t + 1 < len) {
      for (std::size_t k = 0; k < trials; ++k) next[k] = paths[k][t + 1];
      const auto rr = ratio_of_means(next, col);
      pt.step_ratio = rr.mean;
      pt.step_ratio_se = rr.std_error;
    }
    if (pt.mean > pt.envelope + 3.0 * pt.std_error) r.envelope_pass = false;
    r.series.push_back(pt);
  }

  std::vector<double> num(trials, 0.0), den(trials, 0.0);
  for (std::size_t k = 0; k < trials; ++k)
    for (std::size_t t = 0; t + 1 < len; ++t) {
      den[k] += paths[k][t];
      num[k] += paths[k][t + 1];
    }
  const auto pooled = ratio_of_means(num, den);
  r.ratio = pooled.mean;
  r.ratio_se = pooled.std_error;
  r.ratio_z = pooled.std_error > 0 ? (pooled.mean - r.exact_factor) / pooled.std_error : 0.0;
  r.ratio_pass = std::abs(r.ratio - r.exact_factor) <= 3.0 * r.ratio_se;
  return r;
}

}  // namespace kacjl::verify
