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

#ifndef GKB_LAMBERT_W_HPP_
#define GKB_LAMBERT_W_HPP_

// Real branches W0 and W-1 of the Lambert W function (inverse of w * e^w),
// double precision. Region-dependent seeds followed by Halley iteration;
// near the branch point x = -1/e the series in p = sqrt(2*(1 + e*x)) is used.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gkb {

enum class WBranch { Principal, MinusOne };

namespace detail {

inline constexpr double kE = 2.7182818284590452354;
inline constexpr double kInvE = 0.36787944117144232160;
// Arguments this far below -1/e are floating-point slop, clamped to -1/e.
inline constexpr double kBranchSlop = 1e-15;
// Offsets 1 + e*x below this snap to the branch point itself.
inline constexpr double kBranchSnap = 1e-14;

// 1 + W as a series in the signed branch-point variable s (s = +p for W0,
// s = -p for W-1, p = sqrt(2*(1 + e*x))). Coefficients from the classical
// expansion of W about the branch point.
inline double w_plus_one_series(double s) {
  constexpr double c2 = -1.0 / 3.0;
  constexpr double c3 = 11.0 / 72.0;
  constexpr double c4 = -43.0 / 540.0;
  constexpr double c5 = 769.0 / 17280.0;
  constexpr double c6 = -221.0 / 8505.0;
  constexpr double c7 = 680863.0 / 43545600.0;
  constexpr double c8 = -1963.0 / 204120.0;
  constexpr double c9 = 226287557.0 / 37623398400.0;
  return s * (1.0 + s * (c2 + s * (c3 + s * (c4 + s * (c5 + s * (c6 + s * (c7 + s * (c8 + s * c9))))))));
}

// Halley iteration on w*e^w - x. Steps are clamped to the branch half-plane
// (w >= -1 for W0, w <= -1 for W-1).
inline double halley(double w, double x, WBranch branch) {
  for (int i = 0; i < 50; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) denom = ew * wp1;  // Newton fallback
    const double dw = f / denom;
    w -= dw;
    if (branch == WBranch::Principal) {
      if (w < -1.0) w = -1.0;
    } else {
      if (w > -1.0) w = -1.0;
    }
    if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

// Evaluation given the branch-point offset delta = 1 + e*x directly. Callers
// that know delta to full precision (e.g. delta = -expm1(-t)) avoid the
// cancellation incurred when x itself is formed first. Only intended for
// small delta (series region); p = sqrt(2*delta).
inline double w_near_branch(WBranch branch, double delta) {
  const double p = std::sqrt(2.0 * delta);
  const double s = branch == WBranch::Principal ? p : -p;
  double w = -1.0 + w_plus_one_series(s);
  if (p > 0.02) {
    const double x = (delta - 1.0) * kInvE;
    w = halley(w, x, branch);
  }
  return w;
}

}  // namespace detail

/// W0(x) for x >= -1/e or W-1(x) for -1/e <= x < 0. Arguments within 1e-15
/// below -1/e are treated as the branch point. Throws std::domain_error
/// outside the real branch domain.
inline double lambert_w(WBranch branch, double x) {
  using namespace detail;
  if (std::isnan(x)) throw std::domain_error("lambert_w: NaN argument");
  if (x < -kInvE) {
    if (x >= -kInvE - kBranchSlop) {
      x = -kInvE;
    } else {
      throw std::domain_error("lambert_w: argument below -1/e");
    }
  }

  if (branch == WBranch::Principal) {
    if (x == 0.0) return 0.0;
    if (x < -0.3235) {
      const double delta = std::max(0.0, std::fma(kE, x, 1.0));
      if (delta <= kBranchSnap) return -1.0;
      return w_near_branch(branch, delta);
    }
    double w;
    if (std::abs(x) < 1e-4) {
      w = x * (1.0 - x + 1.5 * x * x);
    } else if (x < 3.0) {
      const double l = std::log1p(x);
      w = l * (1.0 - std::log1p(l) / (2.0 + l));
    } else {
      const double l1 = std::log(x);
      const double l2 = std::log(l1);
      w = l1 - l2 + l2 / l1;
    }
    return halley(w, x, branch);
  }

  // branch -1
  if (x >= 0.0) throw std::domain_error("lambert_w: W-1 requires x < 0");
  if (x < -0.27) {
    const double delta = std::max(0.0, std::fma(kE, x, 1.0));
    if (delta <= kBranchSnap) return -1.0;
    return w_near_branch(branch, delta);
  }
  const double l1 = std::log(-x);
  const double w0 = l1 - std::log(-l1);
  return halley(w0, x, WBranch::MinusOne);
}

inline double lambert_w0(double x) { return lambert_w(WBranch::Principal, x); }
inline double lambert_wm1(double x) { return lambert_w(WBranch::MinusOne, x); }

/// dW/dx = W / (x * (1 + W)). Singular at x = 0 and at the branch point
/// x = -1/e; both raise std::domain_error, as do arguments outside the
/// branch domain.
inline double lambert_w_derivative(WBranch branch, double x) {
  using namespace detail;
  if (x == 0.0) throw std::domain_error("lambert_w_derivative: singular at x = 0");
  if (x <= -kInvE + kBranchSnap * kInvE && x >= -kInvE - kBranchSlop) {
    throw std::domain_error("lambert_w_derivative: singular at x = -1/e");
  }
  const double w = lambert_w(branch, x);
  return w / (x * (1.0 + w));
}

}  // namespace gkb

#endif  // GKB_LAMBERT_W_HPP_
