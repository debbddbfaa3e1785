#pragma once

// Reference computations used as test oracles. They rebuild results from
// first principles (explicit matrices, brute-force enumeration, Jacobi
// eigenvalues) rather than reusing the library's kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "kacjl/kacjl.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;

// 2x2 block of one walk step acting on coordinates (i, j), as a dense d x d matrix.
inline Mat step_matrix(std::size_t d, const kacjl::RotationEvent& e, kacjl::WalkKind kind) {
  Mat R = Mat::Identity(d, d);
  const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
  if (kind == kacjl::WalkKind::ORA) {
    const double h = 1.0 / std::sqrt(2.0);
    R(i, i) = h;
    R(i, j) = h;
    R(j, i) = h;
    R(j, j) = -h;
  } else {
    R(i, i) = std::cos(e.theta);
    R(i, j) = -std::sin(e.theta);
    R(j, i) = std::sin(e.theta);
    R(j, j) = std::cos(e.theta);
  }
  return R;
}

// Q_T = R_T ... R_1 from explicit step matrices. Events are replayed from the
// walk seed with the documented draw order: i, then j from d-1 values with a
// skip over i, then the angle.
inline Mat walk_product(const kacjl::WalkSpec& spec) {
  kacjl::Rng rng(spec.seed);
  Mat Q = Mat::Identity(spec.d, spec.d);
  for (std::uint64_t t = 0; t < spec.steps; ++t) {
    kacjl::RotationEvent e;
    e.i = rng.index(spec.d);
    e.j = rng.index(spec.d - 1);
    if (e.j >= e.i) ++e.j;
    if (spec.kind == kacjl::WalkKind::Uniform)
      e.theta = 2.0 * std::numbers::pi * rng.uniform01();
    else if (spec.kind == kacjl::WalkKind::SORA)
      e.theta = std::numbers::pi / 4 + std::numbers::pi / 2 * static_cast<double>(rng.index(4));
    Q = step_matrix(spec.d, e, spec.kind) * Q;
  }
  return Q;
}

inline Mat sign_matrix(std::size_t d, std::uint64_t seed) {
  kacjl::Rng rng(seed);
  Mat D = Mat::Zero(d, d);
  for (std::size_t i = 0; i < d; ++i) D(i, i) = rng.bit() ? -1.0 : 1.0;
  return D;
}

// Rows of the identity picked by a selection, in order.
inline Mat selection_matrix(const kacjl::CoordinateSelection& sel) {
  const auto idx = sel.resolved_indices();
  Mat P = Mat::Zero(idx.size(), sel.d_in);
  for (std::size_t r = 0; r < idx.size(); ++r) P(r, idx[r]) = 1.0;
  return P;
}

// Dense k_out x d matrix of a transform spec.
inline Mat transform_matrix(const kacjl::TransformSpec& s) {
  if (s.algorithm == kacjl::Algorithm::Identity) return Mat::Identity(s.d, s.d);
  Mat M = Mat::Identity(s.d, s.d);
  if (s.sign_seeds) M = sign_matrix(s.d, s.sign_seeds->first) * M;
  M = walk_product(s.stage1_walk()) * M;
  M = s.stage1_scale() * selection_matrix(s.stage1_selection) * M;
  const std::size_t k1 = s.K1_realized();
  if (s.sign_seeds) M = sign_matrix(k1, s.sign_seeds->second) * M;
  if (k1 >= 2) M = walk_product(s.stage2_walk()) * M;
  M = s.stage2_scale() * selection_matrix(s.stage2_selection) * M;
  return M;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Mat A) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = A(k, k);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// delta_s by enumerating supports recursively and using the Jacobi oracle.
inline double delta_s(const Mat& A, std::size_t s) {
  const auto d = static_cast<std::size_t>(A.cols());
  std::vector<std::size_t> idx(s);
  double best = 0.0;
  auto visit = [&](auto&& self, std::size_t pos, std::size_t start) -> void {
    if (pos == s) {
      Mat sub(A.rows(), static_cast<Eigen::Index>(s));
      for (std::size_t k = 0; k < s; ++k) sub.col(k) = A.col(idx[k]);
      const auto ev = jacobi_eigenvalues(sub.transpose() * sub);
      best = std::max({best, ev.back() - 1.0, 1.0 - ev.front()});
      return;
    }
    for (std::size_t c = start; c < d; ++c) {
      idx[pos] = c;
      self(self, pos + 1, c + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

// Chi-square statistic of observed counts against equal expected cells.
inline double chi_square_uniform(const std::vector<double>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  const double e = total / static_cast<double>(counts.size());
  double x = 0.0;
  for (double c : counts) x += (c - e) * (c - e) / e;
  return x;
}

// Upper 0.1% points of chi-square with k degrees of freedom (k = 1..20).
inline double chi_square_crit_999(std::size_t k) {
  static const double table[] = {10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322,
                                 26.124, 27.877, 29.588, 31.264, 32.909, 34.528, 36.123,
                                 37.697, 39.252, 40.790, 42.312, 43.820, 45.315};
  return table[k - 1];
}

}  // namespace oracle
