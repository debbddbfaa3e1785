#pragma once

// Deterministic Monte Carlo fan-out. Trial t always draws from
// Rng(trial_seed(seed, t)) and results come back indexed by trial, so every
// reduction sees the same values in the same order for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "kacjl/rng.hpp"

namespace kacjl::verify {

// KACJL_THREADS caps the worker count; default is the machine's core count.
inline std::size_t thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KACJL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return n;
}

template <class R, class Fn>
std::vector<R> run_trials(std::size_t trials, std::uint64_t seed, Fn&& fn) {
  std::vector<R> out(trials);
  const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(trials, 1));
  auto body = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng(trial_seed(seed, t));
      out[t] = fn(rng, t);
    }
  };
  if (workers <= 1) {
    body(0, trials);
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (trials + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk, end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanSe mean_se(std::span<const double> v) {
  MeanSe r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  r.mean = s / n;
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.std_error = std::sqrt(ss / (n - 1.0) / n);
  return r;
}

// Ratio of means mean(a)/mean(b) over paired samples with a delta-method
// standard error.
inline MeanSe ratio_of_means(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const auto ma = mean_se(a), mb = mean_se(b);
  MeanSe r;
  r.mean = ma.mean / mb.mean;
  if (a.size() < 2) return r;
  double var = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double resid = a[k] - r.mean * b[k];
    var += resid * resid;
  }
  var /= (n - 1.0);
  r.std_error = std::sqrt(var / n) / std::abs(mb.mean);
  return r;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace kacjl::verify
