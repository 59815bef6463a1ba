// Copyright 2026 The gkb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gkb command line: KL divergences between Gaussian JSON documents, bound
// evaluation, extremal pair generation, verification sweeps, and plot data.
//
// Exit codes: 0 success; 1 verification found violations; 2 flag/parse/
// validation errors; 3 dimension mismatch; 4 write failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkb/extremal.hpp"
#include "gkb/gaussian_json.hpp"
#include "gkb/verify.hpp"

namespace {

struct WriteFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_num(const char* label, double v) { std::printf("%s %.17g\n", label, v); }

// Writes via a temporary sibling and renames, so failures leave no partial
// output behind.
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw WriteFailure("cannot open for writing: " + tmp);
    os << content;
    if (!os.good()) throw WriteFailure("write failure: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw WriteFailure("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

gkb::AffineMap random_frame(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd q1 = gkb::detail::random_orthogonal(static_cast<int>(dim), rng);
  const Eigen::MatrixXd q2 = gkb::detail::random_orthogonal(static_cast<int>(dim), rng);
  std::uniform_real_distribution<double> ud(-0.5, 0.5);
  Eigen::VectorXd diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) diag(i) = std::exp(ud(rng));
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd offset(dim);
  for (Eigen::Index i = 0; i < dim; ++i) offset(i) = nd(rng);
  return gkb::AffineMap(q1 * diag.asDiagonal() * q2.transpose(), offset);
}

int finish_verify(const gkb::VerificationReport& rep, const std::string& csv_path) {
  if (!csv_path.empty()) {
    try {
      rep.write_csv(csv_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  }
  std::printf("%s\n", rep.summary().c_str());
  return rep.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KL divergence between multivariate Gaussians: exact values, sharp bounds, "
               "extremal pairs, and verification sweeps"};
  app.require_subcommand(1);
  std::function<int()> action;

  // kl <file1> <file2>
  auto* c_kl = app.add_subcommand("kl", "Forward and reverse KL between two Gaussian JSON files");
  std::string kl_file1, kl_file2;
  c_kl->add_option("file1", kl_file1, "Gaussian JSON document")->required();
  c_kl->add_option("file2", kl_file2, "Gaussian JSON document")->required();
  c_kl->callback([&] {
    action = [&]() -> int {
      gkb::Gaussian g1 = gkb::load_gaussian(kl_file1);
      gkb::Gaussian g2 = gkb::load_gaussian(kl_file2);
      if (g1.dim() != g2.dim()) {
        std::cerr << "error: dimension mismatch (" << g1.dim() << " vs " << g2.dim() << ")\n";
        return 3;
      }
      print_num("forward", gkb::kl(g1, g2));
      print_num("reverse", gkb::kl(g2, g1));
      return 0;
    };
  });

  // bound {sup|inf|triangle}
  auto* c_bound = app.add_subcommand("bound", "Evaluate a closed-form bound");
  c_bound->require_subcommand(1);
  double b_eps = 0.0, b_m = 0.0, b_eps1 = 0.0, b_eps2 = 0.0;
  bool b_series = false, t_series = false;

  auto* c_bsup = c_bound->add_subcommand("sup", "Supremum of reverse KL given forward KL <= eps");
  c_bsup->add_option("--eps", b_eps, "forward KL budget")->required()->check(CLI::NonNegativeNumber);
  c_bsup->add_flag("--series", b_series, "print the small-eps series instead");
  c_bsup->callback([&] {
    action = [&]() -> int {
      if (b_series) {
        print_num("value", gkb::sup_reverse_kl_series(b_eps));
      } else {
        const auto r = gkb::sup_reverse_kl(b_eps);
        print_num("value", r.value);
        print_num("extremal_eigenvalue", *r.extremal_eigenvalue);
      }
      return 0;
    };
  });

  auto* c_binf = c_bound->add_subcommand("inf", "Infimum of reverse KL given forward KL >= M");
  c_binf->add_option("--M", b_m, "forward KL floor (M > 0)")->required()->check(CLI::PositiveNumber);
  c_binf->callback([&] {
    action = [&]() -> int {
      const auto r = gkb::inf_reverse_kl(b_m);
      print_num("value", r.value);
      print_num("extremal_eigenvalue", *r.extremal_eigenvalue);
      return 0;
    };
  });

  auto* c_btri = c_bound->add_subcommand("triangle", "Relaxed triangle bound on KL(N1||N3)");
  c_btri->add_option("--eps1", b_eps1, "budget on KL(N1||N2)")->required()->check(CLI::NonNegativeNumber);
  c_btri->add_option("--eps2", b_eps2, "budget on KL(N2||N3)")->required()->check(CLI::NonNegativeNumber);
  c_btri->add_flag("--series", t_series, "print the small-eps series instead");
  c_btri->callback([&] {
    action = [&]() -> int {
      print_num("value", t_series ? gkb::triangle_bound_series(b_eps1, b_eps2)
                                  : gkb::triangle_bound(b_eps1, b_eps2).value);
      return 0;
    };
  });

  // extremal {sup|inf}
  auto* c_ext = app.add_subcommand("extremal", "Emit a bound-attaining Gaussian pair as JSON");
  c_ext->require_subcommand(1);
  double e_eps = 0.0, e_m = 0.0;
  int e_dim = 1;
  std::string e_out;
  std::uint64_t e_frame_seed = 0;
  bool e_have_frame = false;

  const auto run_extremal = [&](gkb::ExtremalKind kind) -> int {
    gkb::ExtremalPair pair = kind == gkb::ExtremalKind::SupAttainer
                                 ? gkb::extremal_sup_pair(e_eps, e_dim)
                                 : gkb::extremal_inf_pair(e_m, e_dim);
    if (e_have_frame) pair = gkb::embed_in_frame(pair, random_frame(pair.g1.dim(), e_frame_seed));
    write_file_atomic(e_out, gkb::gaussian_pair_to_json(pair.g1, pair.g2).dump(2) + "\n");
    print_num("forward", gkb::kl(pair.g1, pair.g2));
    print_num("reverse", gkb::kl(pair.g2, pair.g1));
    return 0;
  };

  auto* c_esup = c_ext->add_subcommand("sup", "Pair attaining the supremum bound");
  c_esup->add_option("--eps", e_eps, "forward KL budget")->required()->check(CLI::PositiveNumber);
  c_esup->add_option("--dim", e_dim, "dimension")->required()->check(CLI::Range(1, 1 << 20));
  c_esup->add_option("--out", e_out, "output JSON path")->required();
  c_esup->add_option("--frame-seed", e_frame_seed, "embed in a seeded random affine frame")
      ->each([&](const std::string&) { e_have_frame = true; });
  c_esup->callback([&] { action = [&]() -> int { return run_extremal(gkb::ExtremalKind::SupAttainer); }; });

  auto* c_einf = c_ext->add_subcommand("inf", "Pair attaining the infimum bound");
  c_einf->add_option("--M", e_m, "forward KL floor")->required()->check(CLI::PositiveNumber);
  c_einf->add_option("--dim", e_dim, "dimension")->required()->check(CLI::Range(1, 1 << 20));
  c_einf->add_option("--out", e_out, "output JSON path")->required();
  c_einf->add_option("--frame-seed", e_frame_seed, "embed in a seeded random affine frame")
      ->each([&](const std::string&) { e_have_frame = true; });
  c_einf->callback([&] { action = [&]() -> int { return run_extremal(gkb::ExtremalKind::InfAttainer); }; });

  // verify {symmetry|infimum|triangle|allocation|trace|scalar}
  auto* c_ver = app.add_subcommand("verify", "Run a falsification sweep; exit 1 on any violation");
  c_ver->require_subcommand(1);
  std::vector<double> v_eps, v_m, v_eps1, v_eps2;
  std::vector<int> v_dims;
  int v_trials = 100, v_theta_points = 5, v_dim = 5;
  std::uint64_t v_seed = 1;
  std::string v_csv;
  bool v_corrupt = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", v_seed, "master seed (reports are reproducible)");
    cmd->add_option("--csv", v_csv, "write per-trial CSV report here");
    // test-harness hook: corrupts every bound by 0.99 so witnesses must fail
    cmd->add_flag("--corrupt-bounds", v_corrupt)->group("");
  };

  auto* c_vsym = c_ver->add_subcommand("symmetry", "Thm-1 sweep: reverse KL vs sup bound");
  c_vsym->add_option("--eps", v_eps, "forward KL budgets")->required()->delimiter(',');
  c_vsym->add_option("--dims", v_dims, "dimensions")->required()->delimiter(',');
  c_vsym->add_option("--trials", v_trials, "random trials per cell")->required()->check(CLI::NonNegativeNumber);
  add_common(c_vsym);
  c_vsym->callback([&] {
    action = [&]() -> int {
      return finish_verify(gkb::sweep_symmetry(v_eps, v_dims, v_trials, v_seed, v_corrupt ? 0.99 : 1.0), v_csv);
    };
  });

  auto* c_vinf = c_ver->add_subcommand("infimum", "Thm-4 sweep: reverse KL vs inf bound");
  c_vinf->add_option("--M", v_m, "forward KL floors")->required()->delimiter(',');
  c_vinf->add_option("--dims", v_dims, "dimensions")->required()->delimiter(',');
  c_vinf->add_option("--trials", v_trials, "random trials per cell")->required()->check(CLI::NonNegativeNumber);
  add_common(c_vinf);
  c_vinf->callback([&] {
    action = [&]() -> int {
      return finish_verify(gkb::sweep_infimum(v_m, v_dims, v_trials, v_seed, v_corrupt ? 0.99 : 1.0), v_csv);
    };
  });

  auto* c_vtri = c_ver->add_subcommand("triangle", "Thm-5 sweep: KL(N1||N3) vs triangle bound");
  c_vtri->add_option("--eps1", v_eps1, "budgets on KL(N1||N2)")->required()->delimiter(',');
  c_vtri->add_option("--eps2", v_eps2, "budgets on KL(N2||N3)")->required()->delimiter(',');
  c_vtri->add_option("--dims", v_dims, "dimensions")->required()->delimiter(',');
  c_vtri->add_option("--trials", v_trials, "random trials per cell")->required()->check(CLI::NonNegativeNumber);
  add_common(c_vtri);
  c_vtri->callback([&] {
    action = [&]() -> int {
      return finish_verify(
          gkb::sweep_triangle(v_eps1, v_eps2, v_dims, v_trials, v_seed, v_corrupt ? 0.99 : 1.0), v_csv);
    };
  });

  auto* c_vall = c_ver->add_subcommand("allocation", "Extreme-allocation inequality over a 4-D tuple grid");
  c_vall->add_option("--theta-points", v_theta_points, "theta scan density per axis")->check(CLI::Range(2, 1000));
  add_common(c_vall);
  c_vall->callback([&] {
    action = [&]() -> int {
      return finish_verify(gkb::check_allocation_inequality(gkb::default_allocation_grid(), v_theta_points),
                           v_csv);
    };
  });

  auto* c_vtrace = c_ver->add_subcommand("trace", "Tr(AB) vs ordered eigenvalue products");
  c_vtrace->add_option("--dim", v_dim, "matrix dimension")->check(CLI::Range(1, 4096));
  c_vtrace->add_option("--trials", v_trials, "random SPD pairs")->required()->check(CLI::PositiveNumber);
  add_common(c_vtrace);
  c_vtrace->callback([&] {
    action = [&]() -> int { return finish_verify(gkb::check_trace_inequality(v_dim, v_trials, v_seed), v_csv); };
  });

  auto* c_vscalar = c_ver->add_subcommand("scalar", "Scalar lemma suite on default grids");
  add_common(c_vscalar);
  c_vscalar->callback([&] {
    action = [&]() -> int { return finish_verify(gkb::check_scalar_lemmas(), v_csv); };
  });

  // plot-data
  auto* c_plot = app.add_subcommand("plot-data", "Log-spaced sup-bound curve data (CSV)");
  double p_min = 0.0, p_max = 0.0;
  int p_points = 0;
  std::string p_out;
  c_plot->add_option("--eps-min", p_min, "smallest eps")->required()->check(CLI::PositiveNumber);
  c_plot->add_option("--eps-max", p_max, "largest eps")->required()->check(CLI::PositiveNumber);
  c_plot->add_option("--points", p_points, "row count")->required()->check(CLI::Range(2, 100000000));
  c_plot->add_option("--out", p_out, "output CSV path")->required();
  c_plot->callback([&] {
    action = [&]() -> int {
      if (!(p_min < p_max)) {
        std::cerr << "error: requires eps-min < eps-max\n";
        return 2;
      }
      std::string csv = "eps,sup_bound,series\n";
      char buf[128];
      for (int i = 0; i < p_points; ++i) {
        const double u = static_cast<double>(i) / (p_points - 1);
        const double eps = p_min * std::pow(p_max / p_min, u);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", eps, gkb::sup_reverse_kl(eps).value,
                      gkb::sup_reverse_kl_series(eps));
        csv += buf;
      }
      write_file_atomic(p_out, csv);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const WriteFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
