#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kacjl/error.hpp"
#include "kacjl/rng.hpp"

namespace kacjl {

// n vectors of dimension d, row-major.
struct PointSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> data;

  PointSet() = default;
  PointSet(std::size_t rows, std::size_t cols) : n(rows), d(cols), data(rows * cols, 0.0) {}
  PointSet(std::size_t rows, std::size_t cols, std::vector<double> values)
      : n(rows), d(cols), data(std::move(values)) {
    if (data.size() != n * d)
      throw Error(ErrorCode::Dimension, "point data size " + std::to_string(data.size()) +
                                            " != n*d = " + std::to_string(n * d));
  }

  std::span<double> row(std::size_t i) { return {data.data() + i * d, d}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * d, d}; }

  bool empty() const noexcept { return n == 0; }

  friend bool operator==(const PointSet&, const PointSet&) = default;
};

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// n i.i.d. uniform points on the unit sphere S^{d-1}.
inline PointSet random_unit_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  PointSet p(n, d);
  Rng rng(seed);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = p.row(r);
    double nrm = 0.0;
    do {
      for (auto& v : row) v = rng.normal();
      nrm = norm2(row);
    } while (nrm == 0.0);
    for (auto& v : row) v /= nrm;
  }
  return p;
}

}  // namespace kacjl
