#pragma once

// Pinned random stream used everywhere in kacjl.
//
//   seeding      xoshiro256** state = four successive SplitMix64 outputs of the seed
//   substreams   substream_seed(parent, id) = mix64(parent ^ mix64(id + 0x632BE59BD9B4E019))
//   uniform01    (next() >> 11) * 2^-53, in [0, 1)
//   index(n)     Lemire multiply-shift with rejection, unbiased in [0, n)
//   bit()        top bit of next()
//   normal()     Marsaglia polar method on uniform01 pairs, caching the second value
//
// Only integer arithmetic and IEEE division/sqrt/log feed the integer and
// uniform outputs, so event streams are identical on every platform. Changing
// any line above changes every golden value in tests/.

#include <cmath>
#include <cstdint>
#include <limits>

namespace kacjl {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

inline constexpr std::uint64_t substream_seed(std::uint64_t parent, std::uint64_t id) noexcept {
  return mix64(parent ^ mix64(id + 0x632BE59BD9B4E019ULL));
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  constexpr void reseed(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
    has_spare_ = false;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return next(); }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) noexcept {
    __uint128_t m = static_cast<__uint128_t>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<__uint128_t>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bit() noexcept { return (next() >> 63) != 0; }

  bool bernoulli(double q) noexcept { return uniform01() < q; }

  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  friend constexpr bool operator==(const Rng& a, const Rng& b) noexcept {
    return a.s_[0] == b.s_[0] && a.s_[1] == b.s_[1] && a.s_[2] == b.s_[2] && a.s_[3] == b.s_[3] &&
           a.has_spare_ == b.has_spare_ && (!a.has_spare_ || a.spare_ == b.spare_);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Well-known stream ids under a master seed. Kept in one place so spec
// derivation and experiments never collide.
namespace stream {
inline constexpr std::uint64_t kWalkStage1 = 1;
inline constexpr std::uint64_t kWalkStage2 = 2;
inline constexpr std::uint64_t kSelectStage1 = 3;
inline constexpr std::uint64_t kSelectStage2 = 4;
inline constexpr std::uint64_t kSignStage1 = 5;
inline constexpr std::uint64_t kSignStage2 = 6;
inline constexpr std::uint64_t kPoints = 7;
inline constexpr std::uint64_t kTrialBase = 1000;
}  // namespace stream

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return substream_seed(seed, stream::kTrialBase + trial);
}

}  // namespace kacjl
