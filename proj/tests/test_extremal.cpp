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

#include "gkb/extremal.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "gkb/verify.hpp"
#include "test_util.hpp"

using Catch::Approx;
using namespace gkb;

namespace {

// Perturbation probe for the necessary attainment condition: scale the
// special eigenvalue by (1 + dir*1e-3), then rescale the whole 2-D spectrum
// by c (monotone root find) so the forward KL returns to the budget exactly.
struct Probe {
  double forward = 0.0;
  double reverse = 0.0;
};

double fwd2(double l1, double c) { return 0.5 * (f(l1 * c) + f(c) - 2.0); }

Probe perturbed_pair(double spike, double budget, double dir) {
  const double l1 = spike * (1.0 + dir * 1e-3);
  const auto solve = [&](double lo, double hi) -> double {
    double flo = fwd2(l1, lo) - budget;
    if (flo * (fwd2(l1, hi) - budget) > 0.0) return std::nan("");
    while (true) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      ((fwd2(l1, m) - budget) * flo > 0.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
  };
  double c = solve(0.5, 1.0);
  if (std::isnan(c)) c = solve(1.0, 2.0);
  REQUIRE(!std::isnan(c));
  return Probe{fwd2(l1, c), 0.5 * (f(1.0 / (l1 * c)) + f(1.0 / c) - 2.0)};
}

}  // namespace

TEST_CASE("extremal_sup_pair canonical form and attainment") {
  const ExtremalPair p = extremal_sup_pair(0.5, 1);
  CHECK(p.kind == ExtremalKind::SupAttainer);
  CHECK(p.forward_constraint == 0.5);
  CHECK(p.g1.cov()(0, 0) == Approx(w1(1.0)).epsilon(1e-14));
  CHECK(kl(p.g1, p.g2) == Approx(0.5).epsilon(1e-9));
  CHECK(kl(p.g2, p.g1) == Approx(sup_reverse_kl(0.5).value).epsilon(1e-9));

  // dimension independence: padding with unit eigenvalues changes nothing
  const ExtremalPair p100 = extremal_sup_pair(0.5, 100);
  CHECK(kl(p100.g1, p100.g2) == Approx(0.5).epsilon(1e-9));
  CHECK(kl(p100.g2, p100.g1) == Approx(kl(p.g2, p.g1)).epsilon(1e-9));

  // tiny budget: reverse matches the bound, and the quoted small-eps scale
  const ExtremalPair tiny = extremal_sup_pair(1e-6, 2);
  CHECK(kl(tiny.g2, tiny.g1) == Approx(sup_reverse_kl(1e-6).value).epsilon(1e-9));
  CHECK(std::abs(kl(tiny.g2, tiny.g1) - (1e-6 + 2e-9)) <= 1e-9);

  CHECK_THROWS_AS(extremal_sup_pair(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(extremal_sup_pair(1.0, 0), std::domain_error);
}

TEST_CASE("extremal_inf_pair canonical form and attainment") {
  const ExtremalPair p = extremal_inf_pair(1.0, 1);
  CHECK(p.g1.cov()(0, 0) == Approx(w2(2.0)).epsilon(1e-14));
  CHECK(kl(p.g1, p.g2) == Approx(1.0).epsilon(1e-9));
  CHECK(kl(p.g2, p.g1) == Approx(inf_reverse_kl(1.0).value).epsilon(1e-9));

  const ExtremalPair p50 = extremal_inf_pair(1.0, 50);
  CHECK(kl(p50.g1, p50.g2) == Approx(1.0).epsilon(1e-9));
  CHECK(kl(p50.g2, p50.g1) == Approx(kl(p.g2, p.g1)).epsilon(1e-9));

  // duality round-trip: budget sup(0.5) maps the reverse back to 0.5
  const double m = sup_reverse_kl(0.5).value;
  const ExtremalPair dual = extremal_inf_pair(m, 1);
  CHECK(kl(dual.g2, dual.g1) == Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(extremal_inf_pair(0.0, 1), std::domain_error);
}

TEST_CASE("attainment across the budget/dimension grid") {
  for (const double eps : {1e-4, 1e-2, 0.5, 2.0, 10.0}) {
    const double sup = sup_reverse_kl(eps).value;
    const double inf = inf_reverse_kl(eps).value;
    for (const int n : {1, 2, 10}) {
      const ExtremalPair s = extremal_sup_pair(eps, n);
      CHECK(std::abs(kl(s.g1, s.g2) - eps) <= 1e-9 * eps);
      CHECK(std::abs(kl(s.g2, s.g1) - sup) <= 1e-9 * sup);
      const ExtremalPair i = extremal_inf_pair(eps, n);
      CHECK(std::abs(kl(i.g1, i.g2) - eps) <= 1e-9 * eps);
      CHECK(std::abs(kl(i.g2, i.g1) - inf) <= 1e-9 * inf);
    }
  }
}

TEST_CASE("embed_in_frame preserves both divergences") {
  const ExtremalPair p = extremal_sup_pair(0.7, 3);
  const ExtremalPair same = embed_in_frame(p, identity_map(3));
  CHECK(kl(same.g1, same.g2) == Approx(kl(p.g1, p.g2)).epsilon(1e-14));

  std::mt19937_64 rng(2026);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd q = detail::random_orthogonal(3, rng);
    const ExtremalPair rot = embed_in_frame(p, AffineMap(q, Eigen::VectorXd::Zero(3)));
    CHECK(kl(rot.g1, rot.g2) == Approx(0.7).epsilon(1e-9));
    CHECK(kl(rot.g2, rot.g1) == Approx(kl(p.g2, p.g1)).epsilon(1e-9));

    Eigen::MatrixXd lin = detail::random_spd_impl(3, rng, -0.7, 0.7);
    Eigen::VectorXd off(3);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 3; ++i) off(i) = nd(rng);
    const ExtremalPair gen = embed_in_frame(p, AffineMap(lin, off));
    CHECK(kl(gen.g1, gen.g2) == Approx(0.7).epsilon(1e-8));
    CHECK(kl(gen.g2, gen.g1) == Approx(kl(p.g2, p.g1)).epsilon(1e-8));
  }

  Eigen::MatrixXd illcond = Eigen::MatrixXd::Identity(3, 3);
  illcond(0, 0) = 1e9;
  CHECK_THROWS_AS(embed_in_frame(p, AffineMap(illcond, Eigen::VectorXd::Zero(3))), std::invalid_argument);
  CHECK_THROWS_AS(embed_in_frame(p, identity_map(2)), std::invalid_argument);
}

TEST_CASE("perturbing the extremal eigenvalue moves off the bound") {
  for (const double eps : {0.5, 2.0}) {
    const double sup = sup_reverse_kl(eps).value;
    const double inf = inf_reverse_kl(eps).value;
    for (const double dir : {1.0, -1.0}) {
      const Probe s = perturbed_pair(w1(2.0 * eps), eps, dir);
      CHECK(std::abs(s.forward - eps) <= 1e-12 * eps);  // budget restored exactly
      CHECK(s.reverse < sup - 1e-8);                    // strictly below the supremum

      const Probe i = perturbed_pair(w2(2.0 * eps), eps, dir);
      CHECK(std::abs(i.forward - eps) <= 1e-12 * eps);
      CHECK(i.reverse > inf + 1e-8);  // strictly above the infimum
    }
  }
}
