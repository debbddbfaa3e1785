// Embeds random unit vectors with a Kac FJLT and reports the worst norm distortion.
//
//   embed_points [d] [n] [epsilon] [seed]

#include <cstdio>
#include <cstdlib>

#include "kacjl/kacjl.hpp"

int main(int argc, char** argv) {
  const std::size_t d = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1024;
  const std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 200;
  const double eps = argc > 3 ? std::strtod(argv[3], nullptr) : 0.3;
  const std::uint64_t seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 7;

  try {
    const auto spec = kacjl::derive_params(d, n, eps, kacjl::Algorithm::KacFJLT, {}, seed);
    const auto points = kacjl::random_unit_points(n, d, kacjl::substream_seed(seed, kacjl::stream::kPoints));
    const auto rep = kacjl::verify::transform_distortion(spec, points, eps);
    std::printf("d=%zu n=%zu eps=%g  K1=%zu k_out=%zu T1=%llu T2=%llu\n", d, n, eps,
                spec.K1_realized(), spec.k_out, static_cast<unsigned long long>(spec.T1),
                static_cast<unsigned long long>(spec.T2));
    std::printf("max |ratio - 1| = %.4f  %s\n", rep.max_abs_distortion, rep.pass ? "ok" : "FAILED");
    return rep.pass ? 0 : 1;
  } catch (const kacjl::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
}
