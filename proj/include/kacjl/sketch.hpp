#pragma once

// Coordinate projections, random subsampling and diagonal sign flips. Every
// random operator here is a pure function of its parameters and seed, and can
// be re-streamed in O(1) memory, which is what lets the transform path avoid
// materializing index lists.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"

namespace kacjl {

inline void check_probability(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw Error(ErrorCode::Parameter, "probability " + std::to_string(q) + " outside [0,1]");
}

inline std::vector<double> proj_prefix(std::span<const double> x, std::size_t k) {
  if (k > x.size())
    throw Error(ErrorCode::Range, "prefix length " + std::to_string(k) + " exceeds dimension " +
                                      std::to_string(x.size()));
  return {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k)};
}

// Binomial(d, q) as d Bernoulli draws from the seeded stream.
inline std::size_t binom_draw(std::size_t d, double q, std::uint64_t seed) {
  check_probability(q);
  Rng rng(seed);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < d; ++i) kept += rng.bernoulli(q) ? 1 : 0;
  return kept;
}

enum class SelectionMode { Prefix, Bernoulli, FixedSubset };

inline std::string_view to_string(SelectionMode m) {
  switch (m) {
    case SelectionMode::Prefix: return "prefix";
    case SelectionMode::Bernoulli: return "bernoulli";
    case SelectionMode::FixedSubset: return "fixed_subset";
  }
  return "?";
}

inline SelectionMode selection_mode_from_string(std::string_view s) {
  if (s == "prefix") return SelectionMode::Prefix;
  if (s == "bernoulli") return SelectionMode::Bernoulli;
  if (s == "fixed_subset") return SelectionMode::FixedSubset;
  throw Error(ErrorCode::Format, "unknown selection mode '" + std::string(s) + "'");
}

// A resolved coordinate selection out of [0, d_in).
//
// Prefix keeps the first `count` coordinates; when the prefix length came
// from a binomial draw, `q` and `seed` record that draw (q == 1 otherwise).
// Bernoulli keeps each coordinate independently w.p. q; `count` is the
// realized size. FixedSubset keeps a uniform `count`-subset drawn by
// sequential selection sampling from `seed`.
struct CoordinateSelection {
  SelectionMode mode = SelectionMode::Prefix;
  std::size_t d_in = 0;
  std::size_t count = 0;
  double q = 1.0;
  std::uint64_t seed = 0;

  // Calls fn(index) for each kept coordinate in increasing order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    switch (mode) {
      case SelectionMode::Prefix:
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
      case SelectionMode::Bernoulli: {
        Rng rng(seed);
        for (std::size_t i = 0; i < d_in; ++i)
          if (rng.bernoulli(q)) fn(i);
        return;
      }
      case SelectionMode::FixedSubset: {
        // Knuth's Algorithm S: keep i w.p. (needed)/(remaining).
        Rng rng(seed);
        std::size_t needed = count;
        for (std::size_t i = 0; i < d_in && needed > 0; ++i) {
          const std::uint64_t remaining = d_in - i;
          if (rng.index(remaining) < needed) {
            fn(i);
            --needed;
          }
        }
        return;
      }
    }
  }

  std::vector<std::size_t> resolved_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count);
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  bool is_all() const noexcept { return count == d_in; }

  friend bool operator==(const CoordinateSelection&, const CoordinateSelection&) = default;
};

inline CoordinateSelection select_prefix(std::size_t d, std::size_t k) {
  if (k > d) throw Error(ErrorCode::Range, "prefix length exceeds dimension");
  return {SelectionMode::Prefix, d, k, 1.0, 0};
}

// Prefix whose length is a Binomial(d, q) draw.
inline CoordinateSelection select_binomial_prefix(std::size_t d, double q, std::uint64_t seed) {
  return {SelectionMode::Prefix, d, binom_draw(d, q, seed), q, seed};
}

inline CoordinateSelection select_bernoulli(std::size_t d, double q, std::uint64_t seed) {
  check_probability(q);
  // Realized size is the same Bernoulli stream that for_each replays.
  return {SelectionMode::Bernoulli, d, binom_draw(d, q, seed), q, seed};
}

inline CoordinateSelection select_fixed(std::size_t d, std::size_t k, std::uint64_t seed) {
  if (k > d)
    throw Error(ErrorCode::Range, "subset size " + std::to_string(k) + " exceeds dimension " +
                                      std::to_string(d));
  return {SelectionMode::FixedSubset, d, k, 1.0, seed};
}

// Moves the selected coordinates of a coordinate-major block to its front,
// preserving order. Returns the number kept. O(1) extra memory.
inline std::size_t compact_block(std::span<double> data, std::size_t width,
                                 const CoordinateSelection& sel) {
  if (data.size() != sel.d_in * width)
    throw Error(ErrorCode::Dimension, "selection input dimension mismatch");
  if (sel.mode == SelectionMode::Prefix) return sel.count;
  std::size_t out = 0;
  sel.for_each([&](std::size_t i) {
    if (i != out)
      for (std::size_t o = 0; o < width; ++o) data[out * width + o] = data[i * width + o];
    ++out;
  });
  return out;
}

inline std::size_t compact(std::span<double> x, const CoordinateSelection& sel) {
  return compact_block(x, 1, sel);
}

struct SignVector {
  std::vector<int> signs;
  bool conditioned = false;
};

namespace detail {

template <class Fn>
void for_each_sign(std::size_t d, bool conditioned, std::uint64_t seed, Fn&& fn) {
  Rng rng(seed);
  int parity = 1;
  for (std::size_t i = 0; i < d; ++i) {
    int s = rng.bit() ? -1 : 1;
    if (conditioned && i + 1 == d) s = parity;  // forces the product to +1
    parity *= s;
    fn(i, s);
  }
}

}  // namespace detail

inline SignVector sign_vector(std::size_t d, bool conditioned, std::uint64_t seed) {
  SignVector v{std::vector<int>(d), conditioned};
  detail::for_each_sign(d, conditioned, seed, [&](std::size_t i, int s) { v.signs[i] = s; });
  return v;
}

inline void diag_sign_apply_block(std::span<double> data, std::size_t width, bool conditioned,
                                  std::uint64_t seed) {
  if (width == 0) return;
  detail::for_each_sign(data.size() / width, conditioned, seed, [&](std::size_t i, int s) {
    if (s < 0)
      for (std::size_t o = 0; o < width; ++o) data[i * width + o] = -data[i * width + o];
  });
}

inline void diag_sign_apply(std::span<double> x, bool conditioned, std::uint64_t seed) {
  diag_sign_apply_block(x, 1, conditioned, seed);
}

}  // namespace kacjl
