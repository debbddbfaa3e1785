#pragma once

// q-Kac walks on R^d: the uniform Kac walk, orthogonal repeated averaging
// (ORA) and its symmetric variant S-ORA. A walk is fully described by its
// WalkSpec; rotation events are regenerated from the seed on every
// application and never stored.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"

namespace kacjl {

enum class WalkKind { Uniform, ORA, SORA };

inline std::string_view to_string(WalkKind k) {
  switch (k) {
    case WalkKind::Uniform: return "uniform";
    case WalkKind::ORA: return "ora";
    case WalkKind::SORA: return "sora";
  }
  return "?";
}

inline WalkKind walk_kind_from_string(std::string_view s) {
  if (s == "uniform" || s == "kac") return WalkKind::Uniform;
  if (s == "ora") return WalkKind::ORA;
  if (s == "sora") return WalkKind::SORA;
  throw Error(ErrorCode::Format, "unknown walk kind '" + std::string(s) + "'");
}

// Symmetric walks have an angle law invariant under theta -> -theta and
// theta -> theta + pi/2.
inline constexpr bool is_symmetric(WalkKind k) noexcept { return k != WalkKind::ORA; }

struct WalkSpec {
  WalkKind kind = WalkKind::Uniform;
  std::size_t d = 2;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (d == 0) throw Error(ErrorCode::Dimension, "walk dimension must be positive");
    if (steps > 0 && d < 2) throw Error(ErrorCode::Dimension, "a rotation needs d >= 2");
  }

  friend bool operator==(const WalkSpec&, const WalkSpec&) = default;
};

// One step (i, j, theta) of a walk. Indices are zero-based and distinct.
struct RotationEvent {
  std::size_t i = 0;
  std::size_t j = 1;
  double theta = 0.0;  // unused for ORA

  friend bool operator==(const RotationEvent&, const RotationEvent&) = default;
};

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

namespace detail {

// Quarter index k of an S-ORA angle pi/4 + k*pi/2.
inline int sora_quarter(double theta) noexcept {
  const long k = std::lround((theta - std::numbers::pi / 4) / (std::numbers::pi / 2));
  return static_cast<int>(((k % 4) + 4) % 4);
}

// Rotation of the coordinate pair (a[o], b[o]) for o in [0, width).
inline void rotate_pair(double* a, double* b, std::size_t width, const RotationEvent& e,
                        WalkKind kind) noexcept {
  switch (kind) {
    case WalkKind::ORA:
      for (std::size_t o = 0; o < width; ++o) {
        const double xi = a[o], xj = b[o];
        a[o] = (xi + xj) * kInvSqrt2;
        b[o] = (xi - xj) * kInvSqrt2;
      }
      return;
    case WalkKind::SORA: {
      // Exact +-1/sqrt(2) entries so every S-ORA step produces (x_i +- x_j)/sqrt(2)
      // bit-for-bit like ORA.
      switch (sora_quarter(e.theta)) {
        case 0:
          for (std::size_t o = 0; o < width; ++o) {
            const double xi = a[o], xj = b[o];
            a[o] = (xi - xj) * kInvSqrt2;
            b[o] = (xi + xj) * kInvSqrt2;
          }
          return;
        case 1:
          for (std::size_t o = 0; o < width; ++o) {
            const double xi = a[o], xj = b[o];
            a[o] = -(xi + xj) * kInvSqrt2;
            b[o] = (xi - xj) * kInvSqrt2;
          }
          return;
        case 2:
          for (std::size_t o = 0; o < width; ++o) {
            const double xi = a[o], xj = b[o];
            a[o] = (xj - xi) * kInvSqrt2;
            b[o] = -(xi + xj) * kInvSqrt2;
          }
          return;
        default:
          for (std::size_t o = 0; o < width; ++o) {
            const double xi = a[o], xj = b[o];
            a[o] = (xi + xj) * kInvSqrt2;
            b[o] = (xj - xi) * kInvSqrt2;
          }
          return;
      }
    }
    case WalkKind::Uniform: {
      const double c = std::cos(e.theta), s = std::sin(e.theta);
      for (std::size_t o = 0; o < width; ++o) {
        const double xi = a[o], xj = b[o];
        a[o] = xi * c - xj * s;
        b[o] = xi * s + xj * c;
      }
      return;
    }
  }
}

}  // namespace detail

// Draws (i, j) uniformly over the d(d-1) ordered distinct pairs, then the
// angle for the walk kind. ORA consumes no angle randomness.
inline RotationEvent sample_event(Rng& rng, WalkKind kind, std::size_t d) {
  if (d < 2) throw Error(ErrorCode::Dimension, "sample_event needs d >= 2");
  RotationEvent e;
  e.i = static_cast<std::size_t>(rng.index(d));
  e.j = static_cast<std::size_t>(rng.index(d - 1));
  if (e.j >= e.i) ++e.j;
  switch (kind) {
    case WalkKind::Uniform:
      e.theta = 2.0 * std::numbers::pi * rng.uniform01();
      break;
    case WalkKind::SORA:
      e.theta = std::numbers::pi / 4 + std::numbers::pi / 2 * static_cast<double>(rng.index(4));
      break;
    case WalkKind::ORA:
      e.theta = 0.0;
      break;
  }
  return e;
}

inline void apply_event(std::span<double> x, const RotationEvent& e, WalkKind kind) {
  if (e.i >= x.size() || e.j >= x.size() || e.i == e.j)
    throw Error(ErrorCode::Dimension, "rotation indices invalid for vector length");
  detail::rotate_pair(&x[e.i], &x[e.j], 1, e, kind);
}

// Applies the walk to a block of `width` vectors stored coordinate-major:
// coordinate c of vector o lives at data[c * width + o]. width == 1 is a
// single vector. Scratch memory is O(1) regardless of d, T, or width.
inline void walk_apply_block(std::span<double> data, std::size_t width, const WalkSpec& spec) {
  spec.validate();
  if (width == 0) return;
  if (data.size() != spec.d * width)
    throw Error(ErrorCode::Dimension, "block size does not match d * width");
  Rng rng(spec.seed);
  double* base = data.data();
  for (std::uint64_t t = 0; t < spec.steps; ++t) {
    const RotationEvent e = sample_event(rng, spec.kind, spec.d);
    detail::rotate_pair(base + e.i * width, base + e.j * width, width, e, spec.kind);
  }
}

inline void walk_apply(std::span<double> x, const WalkSpec& spec) {
  if (x.size() != spec.d)
    throw Error(ErrorCode::Dimension, "vector length " + std::to_string(x.size()) +
                                          " != walk dimension " + std::to_string(spec.d));
  walk_apply_block(x, 1, spec);
}

inline constexpr std::size_t kDenseWalkCap = 64;

// Dense Q_T; column k equals walk_apply(e_k).
inline Eigen::MatrixXd walk_matrix(const WalkSpec& spec, std::size_t cap = kDenseWalkCap) {
  if (spec.d > cap)
    throw Error(ErrorCode::Cap, "walk_matrix dimension " + std::to_string(spec.d) +
                                    " exceeds cap " + std::to_string(cap));
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor q = RowMajor::Identity(static_cast<Eigen::Index>(spec.d),
                                  static_cast<Eigen::Index>(spec.d));
  walk_apply_block(std::span<double>(q.data(), spec.d * spec.d), spec.d, spec);
  return q;
}

}  // namespace kacjl
