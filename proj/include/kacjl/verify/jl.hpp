#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kacjl/error.hpp"
#include "kacjl/fjlt.hpp"
#include "kacjl/points.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/verify/trials.hpp"

namespace kacjl::verify {

struct DistortionReport {
  std::vector<double> per_point_ratio;  // ||Psi x|| / ||x||, zero rows skipped
  std::vector<std::size_t> excluded;    // indices of zero rows
  double max_abs_distortion = 0.0;
  double epsilon = 0.0;
  bool pass = false;
  std::string note;
};

inline DistortionReport distortion_from_norms(std::span<const double> in_norms,
                                              std::span<const double> out_norms, double epsilon) {
  DistortionReport r;
  r.epsilon = epsilon;
  for (std::size_t p = 0; p < in_norms.size(); ++p) {
    if (in_norms[p] == 0.0) {
      r.excluded.push_back(p);
      continue;
    }
    const double ratio = out_norms[p] / in_norms[p];
    r.per_point_ratio.push_back(ratio);
    r.max_abs_distortion = std::max(r.max_abs_distortion, std::abs(ratio - 1.0));
  }
  r.pass = std::all_of(r.per_point_ratio.begin(), r.per_point_ratio.end(), [&](double q) {
    return q >= 1.0 - epsilon && q <= 1.0 + epsilon;
  });
  if (!r.excluded.empty())
    r.note = std::to_string(r.excluded.size()) + " zero vector(s) excluded: ratio undefined";
  return r;
}

// `map` is any callable taking span<const double> and returning a vector.
template <class LinearMap>
DistortionReport jl_distortion(LinearMap&& map, const PointSet& points, double epsilon) {
  std::vector<double> in(points.n), out(points.n);
  for (std::size_t p = 0; p < points.n; ++p) {
    const auto row = points.row(p);
    in[p] = norm2(row);
    out[p] = in[p] == 0.0 ? 0.0 : norm2(map(row));
  }
  return distortion_from_norms(in, out, epsilon);
}

// Distortion of a transform over a point set via apply_batch.
inline DistortionReport transform_distortion(const TransformSpec& spec, const PointSet& points,
                                             double epsilon) {
  const PointSet images = apply_batch(spec, points);
  std::vector<double> in(points.n), out(points.n);
  for (std::size_t p = 0; p < points.n; ++p) {
    in[p] = norm2(points.row(p));
    out[p] = norm2(images.row(p));
  }
  return distortion_from_norms(in, out, epsilon);
}

// k x d with i.i.d. N(0, 1/k) entries.
inline Eigen::MatrixXd gaussian_baseline(std::size_t d, std::size_t k, std::uint64_t seed) {
  if (k > d) throw Error(ErrorCode::Range, "baseline rows k must not exceed d");
  Rng rng(seed);
  Eigen::MatrixXd G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  const double sd = 1.0 / std::sqrt(static_cast<double>(k));
  for (Eigen::Index r = 0; r < G.rows(); ++r)
    for (Eigen::Index c = 0; c < G.cols(); ++c) G(r, c) = sd * rng.normal();
  return G;
}

inline std::size_t gaussian_rows(std::uint64_t n, double epsilon, double c_k2 = 8.0) {
  return static_cast<std::size_t>(
      std::ceil(c_k2 * std::log(static_cast<double>(n)) / (epsilon * epsilon)));
}

struct JlSuccessReport {
  std::string algorithm;
  std::size_t d = 0;
  std::size_t n = 0;
  double epsilon = 0.0;
  std::size_t runs = 0;
  std::size_t passes = 0;
  double pass_rate = 0.0;
  double worst_distortion = 0.0;
  std::vector<std::size_t> k_out;
  std::uint64_t points_seed = 0;
  std::uint64_t seed = 0;
};

// Fixed set of n random unit vectors; each run derives a fresh transform from
// master seed trial_seed(seed, r) and checks all points at once.
inline JlSuccessReport jl_success_experiment(Algorithm algorithm, std::size_t d, std::size_t n,
                                             double epsilon, std::size_t runs,
                                             std::uint64_t seed,
                                             const ConstantsConfig& constants = {}) {
  JlSuccessReport r;
  r.algorithm = std::string(to_string(algorithm));
  r.d = d;
  r.n = n;
  r.epsilon = epsilon;
  r.runs = runs;
  r.seed = seed;
  r.points_seed = substream_seed(seed, stream::kPoints);
  const PointSet points = random_unit_points(n, d, r.points_seed);
  struct Out {
    bool pass = false;
    double distortion = 0.0;
    std::size_t k = 0;
  };
  const auto outs = run_trials<Out>(runs, seed, [&](Rng&, std::size_t t) {
    const auto spec = derive_params(d, n, epsilon, algorithm, constants, trial_seed(seed, t));
    const auto rep = transform_distortion(spec, points, epsilon);
    return Out{rep.pass, rep.max_abs_distortion, spec.k_out};
  });
  for (const auto& o : outs) {
    r.passes += o.pass ? 1 : 0;
    r.worst_distortion = std::max(r.worst_distortion, o.distortion);
    r.k_out.push_back(o.k);
  }
  r.pass_rate = runs ? static_cast<double>(r.passes) / static_cast<double>(runs) : 0.0;
  return r;
}

struct GaussianJlReport {
  std::size_t d = 0, n = 0, k = 0, runs = 0, passes = 0;
  double epsilon = 0.0;
  double pass_rate = 0.0;
};

inline GaussianJlReport gaussian_jl_experiment(std::size_t d, std::size_t n, double epsilon,
                                               std::size_t runs, std::uint64_t seed) {
  GaussianJlReport r;
  r.d = d;
  r.n = n;
  r.epsilon = epsilon;
  r.runs = runs;
  r.k = std::min(d, gaussian_rows(n, epsilon));
  const PointSet points = random_unit_points(n, d, substream_seed(seed, stream::kPoints));
  const auto ok = run_trials<int>(runs, seed, [&](Rng& rng, std::size_t) {
    const Eigen::MatrixXd G = gaussian_baseline(d, r.k, rng.next());
    const auto rep = jl_distortion(
        [&](std::span<const double> x) {
          const Eigen::VectorXd y =
              G * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
          return std::vector<double>(y.data(), y.data() + y.size());
        },
        points, epsilon);
    return rep.pass ? 1 : 0;
  });
  for (int v : ok) r.passes += static_cast<std::size_t>(v);
  r.pass_rate = runs ? static_cast<double>(r.passes) / static_cast<double>(runs) : 0.0;
  return r;
}

}  // namespace kacjl::verify
