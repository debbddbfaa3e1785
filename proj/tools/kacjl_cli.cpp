// kacjl: build, apply and check Kac/ORA fast JL transforms from the shell.
//
// Exit status: 0 pass, 1 fail, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kacjl/kacjl.hpp"

namespace {

using namespace kacjl;
using kacjl::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Output {
  std::string path;
  bool overwrite = false;

  void add(CLI::App* app) {
    app->add_option("-o,--out", path, "write here instead of stdout");
    app->add_flag("--overwrite", overwrite, "replace an existing output file");
  }

  void emit(const std::string& text) const {
    if (path.empty())
      std::cout << text << std::flush;
    else
      detail::write_file(path, text, overwrite);
  }
};

void add_constants(CLI::App* app, ConstantsConfig& c) {
  app->add_option("--c-k1", c.c_k1, "stage-1 size multiplier");
  app->add_option("--c-k2", c.c_k2, "stage-2 size multiplier");
  app->add_option("--c-t1-kac", c.c_t1_kac, "Kac stage-1 walk length multiplier");
  app->add_option("--c-t2-kac", c.c_t2_kac, "Kac stage-2 walk length multiplier");
  app->add_option("--c-moment", c.c_moment, "ORA moment mixing multiplier");
  app->add_option("--c-maxcoord", c.c_maxcoord, "ORA stage-1 walk length multiplier");
  app->add_option("--c-t2-ora", c.c_t2_ora, "ORA stage-2 walk length multiplier");
}

Eigen::MatrixXd matrix_from_points(const PointSet& p) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(p.n), static_cast<Eigen::Index>(p.d));
  for (std::size_t r = 0; r < p.n; ++r)
    for (std::size_t c = 0; c < p.d; ++c)
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p.data[r * p.d + c];
  return A;
}

PointSet read_any(const std::string& path) { return read_points(path, point_format_from_path(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kac-walk and ORA fast Johnson-Lindenstrauss transforms"};
  app.require_subcommand(1);
  Output out;

  // build
  auto* build = app.add_subcommand("build", "derive a transform spec (JSON)");
  std::size_t b_d = 0;
  std::uint64_t b_n = 0, b_seed = 0;
  double b_eps = 0.0;
  std::string b_alg = "kac";
  ConstantsConfig b_const;
  build->add_option("--d", b_d, "input dimension")->required();
  build->add_option("--n", b_n, "number of points to preserve")->required();
  build->add_option("--epsilon", b_eps, "distortion")->required();
  build->add_option("--alg", b_alg, "kac | ora | sora")->check(CLI::IsMember({"kac", "ora", "sora"}));
  build->add_option("--seed", b_seed, "master seed");
  add_constants(build, b_const);
  out.add(build);

  // apply
  auto* apply_cmd = app.add_subcommand("apply", "apply a spec to every row of a point file");
  std::string a_spec, a_in, a_out;
  bool a_overwrite = false;
  apply_cmd->add_option("--spec", a_spec, "spec JSON")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--in", a_in, "points (.bin or .csv)")->required()->check(CLI::ExistingFile);
  apply_cmd->add_option("--out", a_out, "embedded points (.bin or .csv)")->required();
  apply_cmd->add_flag("--overwrite", a_overwrite, "replace an existing output file");

  // distortion
  auto* dist = app.add_subcommand("distortion", "norm distortion of a spec over a point file");
  std::string d_spec, d_in;
  std::optional<double> d_eps;
  dist->add_option("--spec", d_spec, "spec JSON")->required()->check(CLI::ExistingFile);
  dist->add_option("--in", d_in, "points (.bin or .csv)")->required()->check(CLI::ExistingFile);
  dist->add_option("--epsilon", d_eps, "tolerance (default: the spec's epsilon)");
  out.add(dist);

  // rip
  auto* rip = app.add_subcommand("rip", "exact delta_s of a matrix, or a RIP-sized spec");
  std::string r_matrix;
  std::size_t r_s = 0, r_d = 0;
  double r_delta = 0.0;
  std::uint64_t r_seed = 0;
  ConstantsConfig r_const;
  rip->add_option("--matrix", r_matrix, "matrix file, one row per line")->check(CLI::ExistingFile);
  rip->add_option("--s", r_s, "sparsity")->required();
  rip->add_option("--d", r_d, "dimension (spec mode)");
  rip->add_option("--delta", r_delta, "RIP level (spec mode)");
  rip->add_option("--seed", r_seed, "master seed (spec mode)");
  add_constants(rip, r_const);
  out.add(rip);

  // verify
  auto* verify = app.add_subcommand("verify", "run a named verification experiment");
  verify->require_subcommand(1);
  verify->fallthrough();
  bool v_csv = false;
  verify->add_flag("--csv", v_csv, "CSV series instead of JSON where available");
  out.add(verify);
  std::uint64_t v_seed = 1;
  verify->add_option("--seed", v_seed, "experiment seed");

  auto* v_contr = verify->add_subcommand("contraction", "proportional coupling contraction");
  std::size_t vc_d = 10, vc_trials = 2000;
  std::optional<std::uint64_t> vc_tmax;
  v_contr->add_option("--d", vc_d)->required();
  v_contr->add_option("--t-max", vc_tmax, "last step (default 8d)");
  v_contr->add_option("--trials", vc_trials);

  auto* v_mom = verify->add_subcommand("moments", "S_p moments of the ORA walk");
  std::size_t vm_d = 25, vm_trials = 5000;
  unsigned vm_p = 2;
  double vm_c = 2.25;
  std::optional<std::uint64_t> vm_t;
  v_mom->add_option("--d", vm_d)->required();
  v_mom->add_option("--p", vm_p)->required();
  v_mom->add_option("--c-moment", vm_c);
  v_mom->add_option("--t", vm_t, "walk length (default from c-moment)");
  v_mom->add_option("--trials", vm_trials);

  auto* v_max = verify->add_subcommand("maxcoord", "max-coordinate bound of the ORA walk");
  std::size_t vx_d = 1024, vx_trials = 1000;
  double vx_c = 4.0, vx_tol = 0.005;
  std::optional<std::uint64_t> vx_t;
  v_max->add_option("--d", vx_d)->required();
  v_max->add_option("--c-maxcoord", vx_c);
  v_max->add_option("--t", vx_t);
  v_max->add_option("--trials", vx_trials);
  v_max->add_option("--tolerance", vx_tol, "largest accepted violation frequency");

  auto* v_sub = verify->add_subcommand("subset", "mass concentration on random coordinate subsets");
  std::size_t vs_d = 1024, vs_trials = 1000;
  std::uint64_t vs_n = 100;
  double vs_eps = 0.5, vs_ck2 = 8.0, vs_cm = 2.25, vs_tol = 0.01;
  std::optional<std::size_t> vs_k;
  v_sub->add_option("--d", vs_d)->required();
  v_sub->add_option("--n", vs_n)->required();
  v_sub->add_option("--epsilon", vs_eps)->required();
  v_sub->add_option("--c-k2", vs_ck2);
  v_sub->add_option("--c-moment", vs_cm);
  v_sub->add_option("--k", vs_k, "subset size (default from c-k2)");
  v_sub->add_option("--trials", vs_trials);
  v_sub->add_option("--tolerance", vs_tol, "largest accepted failure frequency");

  auto* v_sym = verify->add_subcommand("symmetry", "signed-permutation symmetry of Q_T e1");
  std::size_t vy_d = 8, vy_reps = 10, vy_samples = 500, vy_perms = 999;
  std::uint64_t vy_T = 200;
  std::string vy_kind = "uniform", vy_expect = "same";
  double vy_alpha = 0.01;
  v_sym->add_option("--d", vy_d);
  v_sym->add_option("--T", vy_T);
  v_sym->add_option("--kind", vy_kind, "uniform | sora");
  v_sym->add_option("--reps", vy_reps);
  v_sym->add_option("--samples", vy_samples);
  v_sym->add_option("--permutations", vy_perms);
  v_sym->add_option("--alpha", vy_alpha);
  v_sym->add_option("--expect", vy_expect, "same | different")
      ->check(CLI::IsMember({"same", "different"}));

  auto* v_perm = verify->add_subcommand("permtv", "TV mixing of the lazy transposition walk");
  std::size_t vp_d = 5, vp_trials = 1000000;
  std::vector<std::uint64_t> vp_T;
  double vp_max = 0.1, vp_C = 1.0;
  v_perm->add_option("--d", vp_d);
  v_perm->add_option("--T", vp_T, "step counts (default d, 3 d log d, 10 d log d)");
  v_perm->add_option("--trials", vp_trials);
  v_perm->add_option("--max-tv", vp_max, "largest accepted TV at the last T");
  v_perm->add_option("--bound-constant", vp_C);

  auto* v_kw = verify->add_subcommand("krahmerward", "random-sign JL from a RIP matrix");
  std::size_t vk_m = 64, vk_d = 16, vk_s = 2, vk_trials = 200;
  std::optional<std::size_t> vk_n;
  double vk_eps = 0.6, vk_eta = 0.25;
  std::string vk_matrix, vk_points;
  bool vk_orth = false;
  v_kw->add_option("--m", vk_m);
  v_kw->add_option("--d", vk_d);
  v_kw->add_option("--s", vk_s);
  v_kw->add_option("--n", vk_n, "random unit points instead of the cube vertices");
  v_kw->add_option("--epsilon", vk_eps);
  v_kw->add_option("--eta", vk_eta);
  v_kw->add_option("--trials", vk_trials);
  v_kw->add_option("--matrix", vk_matrix, "matrix file (default: Rademacher m x d)")
      ->check(CLI::ExistingFile);
  v_kw->add_option("--points", vk_points, "point file")->check(CLI::ExistingFile);
  v_kw->add_flag("--orthogonal", vk_orth, "use a d x d Kac walk matrix");

  auto* v_dir = verify->add_subcommand("dirksen", "delta_s of row-subsampled Kac matrices");
  std::size_t vd_d = 16, vd_s = 2, vd_trials = 50;
  std::vector<std::size_t> vd_m;
  v_dir->add_option("--d", vd_d);
  v_dir->add_option("--s", vd_s);
  v_dir->add_option("--m", vd_m, "row targets (default d/4, d/2, 3d/4, d)");
  v_dir->add_option("--trials", vd_trials);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "apply-time scaling (CSV)");
  std::vector<std::size_t> be_d{4096, 8192, 16384};
  std::uint64_t be_n = 1u << 20, be_seed = 1;
  double be_eps = 0.3;
  std::string be_alg = "kac";
  std::size_t be_reps = 7;
  bool be_gauss = false;
  bench_cmd->add_option("--d", be_d, "ascending dimensions");
  bench_cmd->add_option("--n", be_n);
  bench_cmd->add_option("--epsilon", be_eps);
  bench_cmd->add_option("--alg", be_alg)->check(CLI::IsMember({"kac", "ora", "sora"}));
  bench_cmd->add_option("--seed", be_seed);
  bench_cmd->add_option("--reps", be_reps);
  bench_cmd->add_flag("--gaussian", be_gauss, "add a dense Gaussian baseline row per d");
  out.add(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return kUsage;
  }

  try {
    if (build->parsed()) {
      const auto spec = derive_params(b_d, b_n, b_eps, algorithm_from_string(b_alg), b_const, b_seed);
      out.emit(dump_json(to_json(spec)));
      return kPass;
    }
    if (apply_cmd->parsed()) {
      const auto spec = read_transform_spec(a_spec);
      const auto images = apply_batch(spec, read_any(a_in));
      write_points(images, a_out, point_format_from_path(a_out), a_overwrite);
      return kPass;
    }
    if (dist->parsed()) {
      const auto spec = read_transform_spec(d_spec);
      const auto rep = verify::transform_distortion(spec, read_any(d_in), d_eps.value_or(spec.epsilon));
      out.emit(dump_json(verify::to_json(rep)));
      return rep.pass ? kPass : kFail;
    }
    if (rip->parsed()) {
      if (!r_matrix.empty()) {
        const auto rep = verify::delta_s_exact(matrix_from_points(read_any(r_matrix)), r_s);
        out.emit(dump_json(verify::to_json(rep)));
        return kPass;
      }
      if (r_d == 0 || r_delta == 0.0) {
        std::cerr << "rip: give --matrix, or --d and --delta\n" << rip->help();
        return kUsage;
      }
      out.emit(dump_json(to_json(rip_params(r_d, r_s, r_delta, r_const, r_seed))));
      return kPass;
    }
    if (verify->parsed()) {
      auto emit = [&](const json& j, const std::string& csv, bool pass) {
        out.emit(v_csv && !csv.empty() ? csv : dump_json(j));
        return pass ? kPass : kFail;
      };
      if (v_contr->parsed()) {
        const auto r = verify::contraction_experiment(vc_d, vc_tmax.value_or(8 * vc_d), vc_trials, v_seed);
        return emit(verify::to_json(r), verify::to_csv(r), r.pass());
      }
      if (v_mom->parsed()) {
        const auto r = verify::moment_experiment(vm_d, vm_p, vm_c, vm_trials, v_seed, vm_t);
        return emit(verify::to_json(r), "", r.pass);
      }
      if (v_max->parsed()) {
        auto r = verify::max_coord_experiment(vx_d, vx_c, vx_trials, v_seed, vx_t);
        r.tolerance = vx_tol;
        return emit(verify::to_json(r), "", r.pass());
      }
      if (v_sub->parsed()) {
        auto r = verify::subset_concentration_experiment(vs_d, vs_n, vs_eps, vs_ck2, vs_cm,
                                                         vs_trials, v_seed, vs_k);
        r.tolerance = vs_tol;
        return emit(verify::to_json(r), "", r.pass());
      }
      if (v_sym->parsed()) {
        const auto r = verify::sign_symmetry_test(vy_d, vy_T, walk_kind_from_string(vy_kind), vy_reps,
                                                  v_seed, vy_samples, vy_perms, vy_alpha);
        const bool pass = verify::symmetry_pass(r, vy_expect == "same");
        auto j = verify::to_json(r);
        j["expect"] = vy_expect;
        j["pass"] = pass;
        return emit(j, "", pass);
      }
      if (v_perm->parsed()) {
        if (vp_T.empty()) {
          const double dd = static_cast<double>(vp_d), l = dd * std::log(dd);
          vp_T = {vp_d, static_cast<std::uint64_t>(std::ceil(3.0 * l)),
                  static_cast<std::uint64_t>(std::ceil(10.0 * l))};
        }
        const auto r = verify::perm_mixing_series(vp_d, vp_T, vp_trials, v_seed, vp_max, vp_C);
        return emit(verify::to_json(r), verify::to_csv(r), r.pass());
      }
      if (v_kw->parsed()) {
        Eigen::MatrixXd A;
        if (vk_orth)
          A = walk_matrix(WalkSpec{WalkKind::Uniform, vk_d,
                                   static_cast<std::uint64_t>(std::ceil(12.0 * vk_d * std::log(double(vk_d)))),
                                   substream_seed(v_seed, stream::kWalkStage1)});
        else if (!vk_matrix.empty())
          A = matrix_from_points(read_any(vk_matrix));
        else
          A = verify::rademacher_matrix(vk_m, vk_d, substream_seed(v_seed, stream::kWalkStage1));
        const auto d = static_cast<std::size_t>(A.cols());
        PointSet points;
        if (!vk_points.empty())
          points = read_any(vk_points);
        else if (vk_n)
          points = random_unit_points(*vk_n, d, substream_seed(v_seed, stream::kPoints));
        else
          points = verify::cube_vertices(d);
        const auto r = verify::krahmer_ward_check(A, vk_s, points, vk_eps, vk_trials, v_seed, vk_eta);
        return emit(verify::to_json(r), "", r.pass_rate >= 1.0 - r.eta);
      }
      if (v_dir->parsed()) {
        if (vd_m.empty()) vd_m = {vd_d / 4, vd_d / 2, 3 * vd_d / 4, vd_d};
        const auto r = verify::dirksen_subsample_check(vd_d, vd_m, vd_s, vd_trials, v_seed);
        return emit(verify::to_json(r), verify::to_csv(r), r.monotone);
      }
    }
    if (bench_cmd->parsed()) {
      const auto recs = bench::scaling_experiment(be_d, be_n, be_eps, algorithm_from_string(be_alg),
                                                  be_seed, be_reps, be_gauss);
      out.emit(bench::to_csv(recs));
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "kacjl: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "kacjl: " << e.what() << "\n";
    return kUsage;
  }
  std::cerr << app.help();
  return kUsage;
}
