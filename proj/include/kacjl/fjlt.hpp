#pragma once

// Two-stage fast JL transforms built from Kac walks.
//
//   KacFJLT   uniform Kac walk in R^d, binomial-length prefix, then a second
//             uniform walk on the kept coordinates and a second binomial prefix.
//   OraFJLT   random signs, ORA walk, Bernoulli subsample; random signs, ORA
//             walk, uniform fixed-size subsample.
//   SOraFJLT  S-ORA walks with prefix projections and no sign flips.
//   Identity  used whenever eps^-2 log n >= d.
//
// A TransformSpec is resolved once from a master seed and never changes. The
// rotations are regenerated from the walk seeds on every apply, so applying a
// transform needs no memory beyond the caller's buffer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/points.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/sketch.hpp"
#include "kacjl/walk.hpp"

namespace kacjl {

enum class Algorithm { KacFJLT, OraFJLT, SOraFJLT, Identity };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::KacFJLT: return "kac";
    case Algorithm::OraFJLT: return "ora";
    case Algorithm::SOraFJLT: return "sora";
    case Algorithm::Identity: return "identity";
  }
  return "?";
}

inline Algorithm algorithm_from_string(std::string_view s) {
  if (s == "kac") return Algorithm::KacFJLT;
  if (s == "ora") return Algorithm::OraFJLT;
  if (s == "sora") return Algorithm::SOraFJLT;
  if (s == "identity") return Algorithm::Identity;
  throw Error(ErrorCode::Format, "unknown algorithm '" + std::string(s) + "'");
}

inline WalkKind walk_kind_of(Algorithm a) {
  switch (a) {
    case Algorithm::OraFJLT: return WalkKind::ORA;
    case Algorithm::SOraFJLT: return WalkKind::SORA;
    default: return WalkKind::Uniform;
  }
}

// Multipliers for the stage sizes and walk lengths. Only c_t1_kac = 12 and
// c_moment = 2.25 come with a proof; the rest are desk-scale empirical
// choices and should be treated as tunable.
struct ConstantsConfig {
  double c_k1 = 1.0;        // K1 = c_k1 eps^-2 log n (log log n)^2 (log d)^3
  double c_k2 = 8.0;        // K2 = c_k2 eps^-2 log n
  double c_t1_kac = 12.0;   // Kac T1 = c d log d
  double c_t2_kac = 12.0;   // Kac T2 = c K1 log n
  double c_moment = 2.25;   // ORA moment mixing time c p d log d
  double c_maxcoord = 4.0;  // ORA T1 = c d log d log log d
  double c_t2_ora = 2.25;   // ORA T2 = c K1 log n log d

  void validate() const {
    for (double c : {c_k1, c_k2, c_t1_kac, c_t2_kac, c_moment, c_maxcoord, c_t2_ora})
      if (!(c > 0.0) || !std::isfinite(c))
        throw Error(ErrorCode::Parameter, "all constants must be strictly positive");
  }

  friend bool operator==(const ConstantsConfig&, const ConstantsConfig&) = default;
};

struct TransformSpec {
  Algorithm algorithm = Algorithm::Identity;
  std::size_t d = 0;
  std::uint64_t n = 0;  // 0 when only log_n is known (net counts from rip_params)
  double log_n = 0.0;
  double epsilon = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t T1 = 0;
  std::uint64_t T2 = 0;
  std::size_t K1 = 0;  // target
  std::size_t K2 = 0;  // target
  std::size_t k_out = 0;
  CoordinateSelection stage1_selection;
  CoordinateSelection stage2_selection;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> sign_seeds;
  std::pair<std::uint64_t, std::uint64_t> walk_seeds{0, 0};
  ConstantsConfig constants;

  std::size_t K1_realized() const noexcept { return stage1_selection.count; }

  WalkSpec stage1_walk() const { return {walk_kind_of(algorithm), d, T1, walk_seeds.first}; }
  WalkSpec stage2_walk() const {
    return {walk_kind_of(algorithm), std::max<std::size_t>(K1_realized(), 1), T2,
            walk_seeds.second};
  }

  double stage1_scale() const {
    const auto k = K1_realized();
    return (k == 0 || k == d) ? 1.0 : std::sqrt(static_cast<double>(d) / static_cast<double>(k));
  }
  double stage2_scale() const {
    const auto k1 = K1_realized();
    return (k_out == 0 || k_out == k1)
               ? 1.0
               : std::sqrt(static_cast<double>(k1) / static_cast<double>(k_out));
  }

  friend bool operator==(const TransformSpec&, const TransformSpec&) = default;
};

namespace detail {

inline double clamped_loglog(double log_x) { return std::max(1.0, std::log(std::max(log_x, 1.0))); }

inline std::uint64_t ceil_u64(double v) { return static_cast<std::uint64_t>(std::ceil(v)); }

inline TransformSpec derive_from_log_n(std::size_t d, std::uint64_t n, double log_n,
                                       double epsilon, Algorithm algorithm,
                                       const ConstantsConfig& constants,
                                       std::uint64_t master_seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::Parameter, "epsilon must lie in (0,1)");
  if (!(log_n >= std::log(2.0)) || !std::isfinite(log_n))
    throw Error(ErrorCode::Parameter, "point budget n must be at least 2");
  if (d < 2) throw Error(ErrorCode::Parameter, "dimension d must be at least 2");
  constants.validate();

  TransformSpec s;
  s.d = d;
  s.n = n;
  s.log_n = log_n;
  s.epsilon = epsilon;
  s.master_seed = master_seed;
  s.constants = constants;
  s.walk_seeds = {substream_seed(master_seed, stream::kWalkStage1),
                  substream_seed(master_seed, stream::kWalkStage2)};

  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  const double dd = static_cast<double>(d);
  if (algorithm == Algorithm::Identity || inv_eps2 * log_n >= dd) {
    s.algorithm = Algorithm::Identity;
    s.K1 = s.K2 = s.k_out = d;
    s.stage1_selection = select_prefix(d, d);
    s.stage2_selection = select_prefix(d, d);
    return s;
  }
  s.algorithm = algorithm;

  const double log_d = std::log(dd);
  const double loglog_n = clamped_loglog(log_n);
  const double k1_target =
      std::ceil(constants.c_k1 * inv_eps2 * log_n * loglog_n * loglog_n * log_d * log_d * log_d);
  s.K1 = static_cast<std::size_t>(std::min(dd, k1_target));
  s.K2 = static_cast<std::size_t>(std::ceil(constants.c_k2 * inv_eps2 * log_n));
  const double q1 = static_cast<double>(s.K1) / dd;
  const std::uint64_t sel1_seed = substream_seed(master_seed, stream::kSelectStage1);
  const std::uint64_t sel2_seed = substream_seed(master_seed, stream::kSelectStage2);
  const double k1 = static_cast<double>(s.K1);

  switch (algorithm) {
    case Algorithm::KacFJLT: {
      s.T1 = ceil_u64(constants.c_t1_kac * dd * log_d);
      s.T2 = ceil_u64(constants.c_t2_kac * k1 * log_n);
      s.stage1_selection = select_binomial_prefix(d, q1, sel1_seed);
      const auto k1r = s.K1_realized();
      const double q2 = k1r == 0 ? 0.0 : std::min(1.0, static_cast<double>(s.K2) / k1r);
      s.stage2_selection = select_binomial_prefix(k1r, q2, sel2_seed);
      break;
    }
    case Algorithm::OraFJLT: {
      s.T1 = ceil_u64(constants.c_maxcoord * dd * log_d * clamped_loglog(log_d));
      s.T2 = ceil_u64(constants.c_t2_ora * k1 * log_n * log_d);
      s.stage1_selection = select_bernoulli(d, q1, sel1_seed);
      const auto k1r = s.K1_realized();
      s.stage2_selection = select_fixed(k1r, std::min(s.K2, k1r), sel2_seed);
      s.sign_seeds = std::pair{substream_seed(master_seed, stream::kSignStage1),
                               substream_seed(master_seed, stream::kSignStage2)};
      break;
    }
    case Algorithm::SOraFJLT: {
      s.T1 = ceil_u64(constants.c_maxcoord * dd * log_d * clamped_loglog(log_d));
      s.T2 = ceil_u64(constants.c_t2_ora * k1 * log_n * log_d);
      s.stage1_selection = select_binomial_prefix(d, q1, sel1_seed);
      const auto k1r = s.K1_realized();
      s.stage2_selection = select_prefix(k1r, std::min(s.K2, k1r));
      break;
    }
    case Algorithm::Identity:
      break;
  }
  // A walk on fewer than two coordinates is the identity.
  if (s.K1_realized() < 2) s.T2 = 0;
  s.k_out = s.stage2_selection.count;
  return s;
}

inline void scale_block(std::span<double> data, double factor) {
  if (factor == 1.0) return;
  for (auto& v : data) v *= factor;
}

}  // namespace detail

inline TransformSpec derive_params(std::size_t d, std::uint64_t n, double epsilon,
                                   Algorithm algorithm, const ConstantsConfig& constants = {},
                                   std::uint64_t master_seed = 0) {
  if (n < 2) throw Error(ErrorCode::Parameter, "point budget n must be at least 2");
  return detail::derive_from_log_n(d, n, std::log(static_cast<double>(n)), epsilon, algorithm,
                                   constants, master_seed);
}

// log of the net size d^s (1 + 2/delta)^s / s! for s-sparse unit vectors.
inline double rip_log_net_size(std::size_t d, std::size_t s, double delta) {
  const double ds = static_cast<double>(s);
  return ds * std::log(static_cast<double>(d)) + ds * std::log1p(2.0 / delta) -
         std::lgamma(ds + 1.0);
}

// KacFJLT parameterized to be RIP of order s at level ~delta.
inline TransformSpec rip_params(std::size_t d, std::size_t s, double delta,
                                const ConstantsConfig& constants = {},
                                std::uint64_t master_seed = 0) {
  if (s == 0 || s > d)
    throw Error(ErrorCode::Parameter, "sparsity s must lie in [1, d]");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::Parameter, "delta must lie in (0,1)");
  const double log_n = std::max(rip_log_net_size(d, s, delta), std::log(2.0));
  return detail::derive_from_log_n(d, 0, log_n, delta, Algorithm::KacFJLT, constants,
                                   master_seed);
}

// Applies the transform to a coordinate-major block of `width` vectors
// (coordinate c of vector o at data[c * width + o]). On return the first
// k_out * width entries hold the images in the same layout.
inline std::span<double> apply_block(const TransformSpec& spec, std::span<double> data,
                                     std::size_t width) {
  if (data.size() != spec.d * width)
    throw Error(ErrorCode::Dimension, "input block does not match transform dimension " +
                                          std::to_string(spec.d));
  if (spec.algorithm == Algorithm::Identity) return data;

  const bool signs = spec.sign_seeds.has_value();
  if (signs) diag_sign_apply_block(data, width, false, spec.sign_seeds->first);
  walk_apply_block(data, width, spec.stage1_walk());
  const std::size_t k1 = compact_block(data, width, spec.stage1_selection);
  auto stage1 = data.first(k1 * width);
  detail::scale_block(stage1, spec.stage1_scale());

  if (signs) diag_sign_apply_block(stage1, width, false, spec.sign_seeds->second);
  if (k1 >= 2) walk_apply_block(stage1, width, spec.stage2_walk());
  const std::size_t k2 = compact_block(stage1, width, spec.stage2_selection);
  auto out = data.first(k2 * width);
  detail::scale_block(out, spec.stage2_scale());
  return out;
}

// In-place apply. Returns the prefix of `x` holding Psi x (length k_out).
inline std::span<double> apply(const TransformSpec& spec, std::span<double> x) {
  if (x.size() != spec.d)
    throw Error(ErrorCode::Dimension, "vector length " + std::to_string(x.size()) +
                                          " != transform dimension " + std::to_string(spec.d));
  return apply_block(spec, x, 1);
}

inline std::vector<double> apply_copy(const TransformSpec& spec, std::span<const double> x) {
  std::vector<double> buf(x.begin(), x.end());
  const auto out = kacjl::apply(spec, buf);
  buf.resize(out.size());
  return buf;
}

// Row-wise apply. Events are generated once and swept across all rows, which
// gives bit-identical results to per-row apply.
inline PointSet apply_batch(const TransformSpec& spec, const PointSet& points) {
  if (points.d != spec.d && !(points.n == 0 && points.d == 0))
    throw Error(ErrorCode::Dimension, "point dimension " + std::to_string(points.d) +
                                          " != transform dimension " + std::to_string(spec.d));
  if (points.n == 0) return PointSet(0, spec.k_out);
  const std::size_t n = points.n, d = spec.d;
  std::vector<double> block(d * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < d; ++c) block[c * n + r] = points.data[r * d + c];
  const auto out = apply_block(spec, block, n);
  const std::size_t k = out.size() / n;
  PointSet result(n, k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < k; ++c) result.data[r * k + c] = out[c * n + r];
  return result;
}

}  // namespace kacjl
