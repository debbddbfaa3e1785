#pragma once

// Apply-time measurement. Timing covers apply only; spec derivation and
// input generation happen outside the timed region. Single-threaded.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kacjl/error.hpp"
#include "kacjl/fjlt.hpp"
#include "kacjl/points.hpp"
#include "kacjl/verify/jl.hpp"
#include "kacjl/verify/trials.hpp"

namespace kacjl::bench {

struct BenchRecord {
  std::size_t d = 0;
  std::uint64_t n = 0;
  double epsilon = 0.0;
  std::string algorithm;
  std::int64_t median_apply_ns = 0;
  std::size_t reps = 0;
  std::size_t k_out = 0;

  double normalized() const {
    const double dd = static_cast<double>(d);
    return static_cast<double>(median_apply_ns) / (dd * std::log(dd));
  }
};

namespace detail {

inline void fill_unit(std::vector<double>& x, Rng& rng) {
  double s = 0.0;
  for (auto& v : x) {
    v = rng.normal();
    s += v * v;
  }
  const double inv = 1.0 / std::sqrt(s);
  for (auto& v : x) v *= inv;
}

// Keeps the optimizer from discarding a result.
inline volatile double g_sink = 0.0;

template <class Body>
std::int64_t median_ns(std::size_t reps, std::uint64_t seed, std::vector<double>& buf,
                       Body&& body) {
  if (reps < 5) throw Error(ErrorCode::Parameter, "bench needs reps >= 5");
  Rng rng(seed);
  fill_unit(buf, rng);
  body();  // warmup
  std::vector<double> times;
  times.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    fill_unit(buf, rng);
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(static_cast<double>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()));
  }
  return static_cast<std::int64_t>(verify::median(std::move(times)));
}

}  // namespace detail

// Median wall time of apply on a fresh random unit vector per rep, after one
// warmup.
inline BenchRecord time_apply(const TransformSpec& spec, std::size_t reps, std::uint64_t seed) {
  std::vector<double> buf(spec.d);
  BenchRecord rec;
  rec.d = spec.d;
  rec.n = spec.n;
  rec.epsilon = spec.epsilon;
  rec.algorithm = std::string(to_string(spec.algorithm));
  rec.reps = reps;
  rec.k_out = spec.k_out;
  rec.median_apply_ns = detail::median_ns(reps, seed, buf, [&] {
    const auto out = kacjl::apply(spec, buf);
    detail::g_sink = out.empty() ? 0.0 : out[0];
  });
  return rec;
}

// Median time of y = G x for a dense k x d Gaussian matrix.
inline BenchRecord time_gaussian(std::size_t d, std::uint64_t n, double epsilon,
                                 std::size_t reps, std::uint64_t seed) {
  const std::size_t k = std::min(d, verify::gaussian_rows(n, epsilon));
  const Eigen::MatrixXd G = verify::gaussian_baseline(d, k, seed);
  std::vector<double> buf(d);
  Eigen::VectorXd y(static_cast<Eigen::Index>(k));
  BenchRecord rec;
  rec.d = d;
  rec.n = n;
  rec.epsilon = epsilon;
  rec.algorithm = "gaussian";
  rec.reps = reps;
  rec.k_out = k;
  rec.median_apply_ns = detail::median_ns(reps, seed, buf, [&] {
    y.noalias() = G * Eigen::Map<const Eigen::VectorXd>(buf.data(), static_cast<Eigen::Index>(d));
    detail::g_sink = y.size() ? y(0) : 0.0;
  });
  return rec;
}

// One record per d (ascending), plus gaussian rows when requested.
inline std::vector<BenchRecord> scaling_experiment(const std::vector<std::size_t>& d_list,
                                                   std::uint64_t n, double epsilon,
                                                   Algorithm algorithm, std::uint64_t seed,
                                                   std::size_t reps = 7,
                                                   bool with_gaussian = false,
                                                   const ConstantsConfig& constants = {}) {
  for (std::size_t i = 1; i < d_list.size(); ++i)
    if (d_list[i] <= d_list[i - 1])
      throw Error(ErrorCode::Parameter, "d_list must be strictly ascending");
  std::vector<BenchRecord> out;
  for (std::size_t d : d_list) {
    const auto spec = derive_params(d, n, epsilon, algorithm, constants, seed);
    out.push_back(time_apply(spec, reps, seed));
    if (with_gaussian) out.push_back(time_gaussian(d, n, epsilon, reps, seed));
  }
  return out;
}

inline const char* kBenchCsvHeader = "d,algorithm,n,epsilon,k_out,median_apply_ns,normalized";

inline std::string to_csv(const std::vector<BenchRecord>& records) {
  std::string out = std::string(kBenchCsvHeader) + "\n";
  char buf[64];
  for (const auto& r : records) {
    out += std::to_string(r.d) + "," + r.algorithm + "," + std::to_string(r.n) + ",";
    std::snprintf(buf, sizeof buf, "%.17g", r.epsilon);
    out += buf;
    out += "," + std::to_string(r.k_out) + "," + std::to_string(r.median_apply_ns) + ",";
    std::snprintf(buf, sizeof buf, "%.6g", r.normalized());
    out += buf;
    out += "\n";
  }
  return out;
}

}  // namespace kacjl::bench
