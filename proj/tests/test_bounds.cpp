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

#include "gkb/bounds.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "test_util.hpp"

using Catch::Approx;
using namespace gkb;
using gkb_test::log_grid;

// Frozen from the bisection/high-precision oracle.
namespace frozen {
constexpr double sup_half = 1.7319948094173652702;       // sup bound at eps = 0.5
constexpr double sup_1em4 = 1.0134678313753417e-04;      // exact Lambert-W value at eps = 1e-4
constexpr double inf_one = 0.36360258992797618694;       // inf bound at M = 1
constexpr double nary_sup_1_1 = 4.4639896188347305404;   // f(1/w1(1))
constexpr double nary_inf_2_1 = 1.7272051798559523739;   // f(1/w2(2))
constexpr double tri_0p1_0p2 = 3.2601484633198372128;
constexpr double tri_1em4 = 8.1485860275450672847e-04;
}  // namespace frozen

TEST_CASE("sup_reverse_kl") {
  const auto zero = sup_reverse_kl(0.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.kind == BoundKind::SupReverse);
  CHECK(*zero.extremal_eigenvalue == 1.0);
  CHECK_FALSE(zero.strict);

  const auto half = sup_reverse_kl(0.5);
  CHECK(half.value == Approx(frozen::sup_half).epsilon(1e-12));
  CHECK(*half.extremal_eigenvalue == Approx(w1(1.0)).epsilon(1e-14));

  // exact value at 1e-4; the headline series sits within 1% of it there
  CHECK(sup_reverse_kl(1e-4).value == Approx(frozen::sup_1em4).epsilon(1e-11));
  CHECK(std::abs(sup_reverse_kl(1e-4).value - 1.02e-4) <= 0.01 * frozen::sup_1em4);

  CHECK_THROWS_AS(sup_reverse_kl(-1e-9), std::domain_error);
}

TEST_CASE("sup_reverse_kl_series formula") {
  CHECK(sup_reverse_kl_series(0.0) == 0.0);
  CHECK(sup_reverse_kl_series(1e-4) == Approx(1.02e-4).epsilon(1e-14));
  CHECK(sup_reverse_kl_series(1e-2) == Approx(0.012).epsilon(1e-14));
  CHECK_THROWS_AS(sup_reverse_kl_series(-1.0), std::domain_error);
  // the series stays an upper estimate of the exact bound at small eps
  for (const double e : log_grid(1e-8, 1e-2, 40)) {
    CHECK(sup_reverse_kl_series(e) >= sup_reverse_kl(e).value);
  }
}

TEST_CASE("inf_reverse_kl") {
  CHECK_THROWS_AS(inf_reverse_kl(0.0), std::domain_error);
  CHECK_THROWS_AS(inf_reverse_kl(-1.0), std::domain_error);
  CHECK(inf_reverse_kl(1e-12).value < 1e-11);  // -> 0 as M -> 0+

  const auto one = inf_reverse_kl(1.0);
  CHECK(one.value == Approx(frozen::inf_one).epsilon(1e-12));
  CHECK(one.kind == BoundKind::InfReverse);
  CHECK(*one.extremal_eigenvalue == Approx(w2(2.0)).epsilon(1e-14));
  CHECK(*one.extremal_eigenvalue >= 1.0);

  // duality example: M = sup(0.5) maps back to 0.5
  CHECK(inf_reverse_kl(sup_reverse_kl(0.5).value).value == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("nary bounds and exact additivity in n") {
  CHECK(nary_sup_bound(0.0, 3) == 3.0);
  CHECK(nary_inf_bound(0.0, 4) == 4.0);
  CHECK(nary_sup_bound(1.0, 1) == Approx(frozen::nary_sup_1_1).epsilon(1e-12));
  CHECK(nary_inf_bound(2.0, 1) == Approx(frozen::nary_inf_2_1).epsilon(1e-12));
  CHECK(nary_sup_bound(1.0, 7) == Approx(nary_sup_bound(1.0, 1) + 6.0).epsilon(1e-14));
  CHECK(nary_inf_bound(2.0, 5) == Approx(nary_inf_bound(2.0, 1) + 4.0).epsilon(1e-14));
  for (const double e : log_grid(1e-4, 1.0, 15)) {  // values O(1): difference is exact
    for (const int n : {2, 10, 100}) {
      CHECK(nary_sup_bound(e, n) - nary_sup_bound(e, 1) == Approx(n - 1.0).epsilon(1e-12));
      CHECK(nary_inf_bound(e, n) - nary_inf_bound(e, 1) == Approx(n - 1.0).epsilon(1e-12));
    }
  }
  for (const double e : log_grid(1.0, 50.0, 15)) {  // large values: additive form up to rounding
    for (const int n : {2, 10, 100}) {
      CHECK(nary_sup_bound(e, n) == Approx(nary_sup_bound(e, 1) + (n - 1.0)).epsilon(1e-12));
      CHECK(nary_inf_bound(e, n) == Approx(nary_inf_bound(e, 1) + (n - 1.0)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(nary_sup_bound(1.0, 0), std::domain_error);
  CHECK_THROWS_AS(nary_inf_bound(-1.0, 1), std::domain_error);
}

TEST_CASE("triangle_bound") {
  const auto zero = triangle_bound(0.0, 0.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.strict);
  CHECK(zero.kind == BoundKind::Triangle);
  CHECK_FALSE(zero.extremal_eigenvalue.has_value());

  CHECK(triangle_bound(1e-4, 1e-4).value == Approx(frozen::tri_1em4).epsilon(1e-12));
  // Thm-6 scale check: about 8 eps for equal small arguments
  CHECK(std::abs(triangle_bound(1e-4, 1e-4).value - 8e-4) <= 0.25 * 8e-4);
  CHECK(triangle_bound(0.1, 0.2).value == Approx(frozen::tri_0p1_0p2).epsilon(1e-12));
  CHECK_THROWS_AS(triangle_bound(-1.0, 0.0), std::domain_error);

  // raw Lambert-W evaluation agrees with the w1/w2 rewriting
  for (const double a : {0.0, 1e-4, 1e-2, 0.1, 0.2, 1.0, 5.0, 20.0}) {
    for (const double b : {0.0, 1e-4, 1e-2, 0.1, 0.2, 1.0, 5.0, 20.0}) {
      const double v = triangle_bound(a, b).value;
      CHECK(std::abs(v - detail::triangle_bound_raw_w(a, b)) <= 1e-10 * std::max(1.0, std::abs(v)));
    }
  }

  // monotone nondecreasing in each argument
  const auto grid = log_grid(1e-5, 20.0, 30);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    CHECK(triangle_bound(grid[i + 1], 0.3).value >= triangle_bound(grid[i], 0.3).value);
    CHECK(triangle_bound(0.3, grid[i + 1]).value >= triangle_bound(0.3, grid[i]).value);
  }
}

TEST_CASE("triangle_bound_series formula") {
  CHECK(triangle_bound_series(0.0, 0.0) == 0.0);
  CHECK(triangle_bound_series(1e-4, 1e-4) == Approx(8e-4).epsilon(1e-14));
  CHECK(triangle_bound_series(1e-4, 4e-4) == Approx(1.9e-3).epsilon(1e-14));
  CHECK_THROWS_AS(triangle_bound_series(0.0, -1.0), std::domain_error);
  // the exact bound approaches the series along the diagonal
  double prev = 1e300;
  for (const double e : log_grid(1e-2, 1e-5, 13)) {
    const double r = std::abs(triangle_bound(e, e).value - triangle_bound_series(e, e)) / (2.0 * e);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("dual_roundtrip recovers M") {
  for (const double m : {1.0, 1e-3, 20.0}) {
    CHECK(std::abs(dual_roundtrip(m) - m) <= 1e-9 * m);
  }
  for (const double m : log_grid(1e-3, 20.0, 60)) {
    CHECK(std::abs(dual_roundtrip(m) - m) <= 1e-9 * m);
  }
}

TEST_CASE("monotonicity and the asymmetry gap") {
  double prev_sup = -1.0, prev_inf = -1.0;
  for (const double t : log_grid(1e-6, 50.0, 120)) {
    const double s = sup_reverse_kl(t).value;
    const double i = inf_reverse_kl(t).value;
    CHECK(s > prev_sup);
    CHECK(i > prev_inf);
    prev_sup = s;
    prev_inf = i;
    CHECK(s > t);  // strict asymmetry
    CHECK(i < t);
    CHECK(i > 0.0);
  }
}

TEST_CASE("bounds take no dimension argument") {
  // the theorem-level bounds are dimension-free by construction; the n-ary
  // forms carry the whole n-dependence in the additive n - 1
  const double v = sup_reverse_kl(0.3).value;
  CHECK(2.0 * v + 1.0 == Approx(nary_sup_bound(0.6, 1.0)).epsilon(1e-12));
}
