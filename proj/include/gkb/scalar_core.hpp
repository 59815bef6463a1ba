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

#ifndef GKB_SCALAR_CORE_HPP_
#define GKB_SCALAR_CORE_HPP_

// Scalar calculus of f(x) = x - log x: the two roots w1(t) <= 1 <= w2(t) of
// f(x) = 1 + t, their derivatives, the inverse helpers g_l/g_r, the Delta
// functions, and the one-dimensional sup/inf maps. Everything downstream
// (bounds, extremal pairs, verification) is built from these.
//
// w1/w2 are evaluated through the Lambert W branches; root_oracle solves the
// same equation by pure bisection and exists solely as an independent check.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gkb/lambert_w.hpp"

namespace gkb {

/// Non-negative slack above the minimum of f (the t in f(x) = 1 + t).
/// Rejects negatives, NaN and infinities at construction.
class EpsilonBudget {
 public:
  explicit EpsilonBudget(double t) : t_(t) {
    if (!std::isfinite(t) || t < 0.0) {
      throw std::domain_error("EpsilonBudget: requires finite t >= 0");
    }
  }
  double value() const { return t_; }

 private:
  double t_;
};

enum class RootSide { Lower, Upper };

/// f(x) = x - log x, x > 0. Minimum value 1 at x = 1.
inline double f(double x) {
  if (!(x > 0.0)) throw std::domain_error("f: requires x > 0");
  return x - std::log(x);
}

/// f'(x) = 1 - 1/x, x > 0.
inline double f_prime(double x) {
  if (!(x > 0.0)) throw std::domain_error("f_prime: requires x > 0");
  return 1.0 - 1.0 / x;
}

/// f_l(x) = f(1-x) - 1 on [0, 1): slack of f left of the minimum.
inline double f_l(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("f_l: requires 0 <= x < 1");
  return -x - std::log1p(-x);
}

/// f_r(x) = f(x+1) - 1 on [0, inf): slack of f right of the minimum.
inline double f_r(double x) {
  if (!(x >= 0.0)) throw std::domain_error("f_r: requires x >= 0");
  return x - std::log1p(x);
}

namespace detail {

// Below this t the roots are resolved in deviation space (q = 1 - w1,
// r = w2 - 1) from the W branch-point series plus Newton; the offset
// 1 + e*x = -expm1(-t) is formed without ever rounding x itself.
inline constexpr double kSmallT = 0.046;
// w1 below this underflow guard switches 1/w1 to the log-space identity.
inline constexpr double kTinyW1 = 1e-300;

// q = 1 - w1(t), full relative precision for small t.
inline double w1_deviation(double t) {
  if (t == 0.0) return 0.0;
  if (t < kSmallT) {
    const double p = std::sqrt(2.0 * -std::expm1(-t));
    double q = w_plus_one_series(p);
    for (int i = 0; i < 2; ++i) {
      const double h = -(std::log1p(-q) + q);
      q -= (h - t) * (1.0 - q) / q;
    }
    return q;
  }
  return 1.0 + lambert_w(WBranch::Principal, -std::exp(-(1.0 + t)));
}

// r = w2(t) - 1, full relative precision for small t.
inline double w2_deviation(double t);

inline double bisect_root(double t, RootSide side) {
  const double target = 1.0 + t;
  double lo, hi;
  if (side == RootSide::Lower) {
    lo = std::exp(-(1.0 + t));
    if (lo == 0.0) throw std::domain_error("root_oracle: t too large for Lower side");
    hi = 1.0;
    while (true) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      (f(m) >= target ? lo : hi) = m;
    }
  } else {
    lo = 1.0;
    hi = 2.0 + 2.0 * t + 2.0 * std::log(2.0 + 2.0 * t) + 10.0;
    while (true) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      (f(m) < target ? lo : hi) = m;
    }
  }
  return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
}

inline double w2_deviation(double t) {
  if (t == 0.0) return 0.0;
  if (t < kSmallT) {
    const double p = std::sqrt(2.0 * -std::expm1(-t));
    double r = -w_plus_one_series(-p);
    for (int i = 0; i < 2; ++i) {
      const double h = r - std::log1p(r);
      r -= (h - t) * (1.0 + r) / r;
    }
    return r;
  }
  if (t <= 700.0) {
    return -lambert_w(WBranch::MinusOne, -std::exp(-(1.0 + t))) - 1.0;
  }
  // -e^{-(1+t)} has underflowed; fall back to bisection.
  return bisect_root(t, RootSide::Upper) - 1.0;
}

inline double w1_impl(double t) {
  if (t == 0.0) return 1.0;
  if (t < kSmallT) return 1.0 - w1_deviation(t);
  return -lambert_w(WBranch::Principal, -std::exp(-(1.0 + t)));
}

inline double w2_impl(double t) { return 1.0 + w2_deviation(t); }

// 1/w1(t), via exp((1+t) - w1) once w1 underflows the guard.
inline double inv_w1(double w1v, double t) {
  if (w1v > kTinyW1) return 1.0 / w1v;
  return std::exp((1.0 + t) - w1v);
}

// f(1/w1(t)) - 1 >= 0, the excess of the scalar sup map over its value at
// t = 0. Equals q^2/(1-q) - t with q = 1 - w1.
inline double sup_excess(double t) {
  if (t == 0.0) return 0.0;
  if (t < kSmallT) {
    const double q = w1_deviation(t);
    return q * q / (1.0 - q) - t;
  }
  const double w1v = w1_impl(t);
  return (inv_w1(w1v, t) + w1v - 2.0) - t;
}

// f(1/w2(M)) - 1 >= 0, analogous excess through the larger root.
inline double inf_excess(double m) {
  if (m == 0.0) return 0.0;
  const double r = w2_deviation(m);
  return r * (r / (1.0 + r)) - m;
}

}  // namespace detail

/// Smaller root of x - log x = 1 + t, in (0, 1]. Underflows to 0 for
/// t beyond ~708 (the exact value is below the double range).
inline double w1(EpsilonBudget t) { return detail::w1_impl(t.value()); }
inline double w1(double t) { return w1(EpsilonBudget(t)); }

/// Larger root of x - log x = 1 + t, in [1, inf).
inline double w2(EpsilonBudget t) { return detail::w2_impl(t.value()); }
inline double w2(double t) { return w2(EpsilonBudget(t)); }

/// log w1(t), exact in the identity log w1 = w1 - (1 + t); stays finite even
/// where w1 itself underflows.
inline double log_w1(EpsilonBudget t) { return detail::w1_impl(t.value()) - (1.0 + t.value()); }
inline double log_w1(double t) { return log_w1(EpsilonBudget(t)); }

/// w1'(t) = -w1/(1 - w1) < 0. Singular at t = 0 (domain error).
inline double w1_prime(EpsilonBudget t) {
  if (t.value() == 0.0) throw std::domain_error("w1_prime: singular at t = 0");
  if (t.value() < detail::kSmallT) {
    const double q = detail::w1_deviation(t.value());
    return -(1.0 - q) / q;
  }
  const double w1v = detail::w1_impl(t.value());  // 1 - w1 has full precision here
  return -w1v / (1.0 - w1v);
}
inline double w1_prime(double t) { return w1_prime(EpsilonBudget(t)); }

/// w2'(t) = w2/(w2 - 1) > 0. Singular at t = 0 (domain error).
inline double w2_prime(EpsilonBudget t) {
  if (t.value() == 0.0) throw std::domain_error("w2_prime: singular at t = 0");
  const double r = detail::w2_deviation(t.value());
  return (1.0 + r) / r;
}
inline double w2_prime(double t) { return w2_prime(EpsilonBudget(t)); }

/// Solves f(x) = 1 + t by bisection alone, Lower on (0, 1], Upper on
/// [1, 2 + 2t + 2 log(2 + 2t) + 10]. Independent verification oracle for
/// the Lambert-W route; shares no code with it.
inline double root_oracle(EpsilonBudget t, RootSide side) {
  if (t.value() == 0.0) return 1.0;
  return detail::bisect_root(t.value(), side);
}
inline double root_oracle(double t, RootSide side) { return root_oracle(EpsilonBudget(t), side); }

/// g_l(e) = f_l^{-1}(e) = 1 - w1(e), in [0, 1).
inline double g_l(EpsilonBudget e) { return detail::w1_deviation(e.value()); }
inline double g_l(double e) { return g_l(EpsilonBudget(e)); }

/// g_r(e) = f_r^{-1}(e) = w2(e) - 1, in [0, inf).
inline double g_r(EpsilonBudget e) { return detail::w2_deviation(e.value()); }
inline double g_r(double e) { return g_r(EpsilonBudget(e)); }

/// g_l'(e) = 1/(1 - w1(e)) - 1. Singular at e = 0 (domain error; no
/// convention is given for this endpoint).
inline double g_l_prime(EpsilonBudget e) {
  if (e.value() == 0.0) throw std::domain_error("g_l_prime: singular at e = 0");
  if (e.value() < detail::kSmallT) {
    const double q = detail::w1_deviation(e.value());
    return (1.0 - q) / q;
  }
  const double w1v = detail::w1_impl(e.value());
  return w1v / (1.0 - w1v);
}
inline double g_l_prime(double e) { return g_l_prime(EpsilonBudget(e)); }

/// g_r'(e) = 1 + 1/(w2(e) - 1); g_r'(0) is the +infinity sentinel.
inline double g_r_prime(EpsilonBudget e) {
  if (e.value() == 0.0) return std::numeric_limits<double>::infinity();
  const double r = detail::w2_deviation(e.value());
  return (1.0 + r) / r;
}
inline double g_r_prime(double e) { return g_r_prime(EpsilonBudget(e)); }

/// Delta(e) = f(1/w1(e)) - f(w1(e)) = 1/w1 - w1 + 2 log w1. Zero at e = 0,
/// strictly increasing and convex.
inline double delta_sup(EpsilonBudget e) {
  const double t = e.value();
  if (t == 0.0) return 0.0;
  if (t < detail::kSmallT) {
    const double q = detail::w1_deviation(t);
    return q * (2.0 - q) / (1.0 - q) + 2.0 * std::log1p(-q);
  }
  const double w1v = detail::w1_impl(t);
  return detail::inv_w1(w1v, t) + w1v - 2.0 * (1.0 + t);
}
inline double delta_sup(double e) { return delta_sup(EpsilonBudget(e)); }

/// Delta(M) = f(w2(M)) - f(1/w2(M)) = w2 - 1/w2 - 2 log w2. Zero at M = 0,
/// increasing and convex.
inline double delta_inf(EpsilonBudget m) {
  const double t = m.value();
  if (t == 0.0) return 0.0;
  if (t < detail::kSmallT) {
    const double r = detail::w2_deviation(t);
    return r * (2.0 + r) / (1.0 + r) - 2.0 * std::log1p(r);
  }
  const double w2v = detail::w2_impl(t);
  return 2.0 * (1.0 + t) - w2v - 1.0 / w2v;
}
inline double delta_inf(double m) { return delta_inf(EpsilonBudget(m)); }

/// S(t) = sup{ f(1/x) : f(x) <= 1 + t } = f(1/w1(t)).
inline double scalar_sup_map(EpsilonBudget t) { return 1.0 + detail::sup_excess(t.value()); }
inline double scalar_sup_map(double t) { return scalar_sup_map(EpsilonBudget(t)); }

/// I(t) = inf{ f(1/x) : f(x) >= 1 + t } = f(1/w2(t)).
inline double scalar_inf_map(EpsilonBudget t) { return 1.0 + detail::inf_excess(t.value()); }
inline double scalar_inf_map(double t) { return scalar_inf_map(EpsilonBudget(t)); }

/// Both sides of the product identities
///   f(w1(t1) w1(t2)) = t1 + t2 + 2 + w1(t1) w1(t2) - w1(t1) - w1(t2)
///   f(w2(t1) w2(t2)) = t1 + t2 + 2 + w2(t1) w2(t2) - w2(t1) - w2(t2)
struct ProductIdentitySides {
  double w1_left, w1_right;
  double w2_left, w2_right;
};

inline ProductIdentitySides f_product_identity_check(EpsilonBudget t1, EpsilonBudget t2) {
  const double a = t1.value(), b = t2.value();
  const double w1a = detail::w1_impl(a), w1b = detail::w1_impl(b);
  const double w2a = detail::w2_impl(a), w2b = detail::w2_impl(b);
  ProductIdentitySides s;
  s.w1_left = f(w1a * w1b);
  s.w1_right = a + b + 2.0 + w1a * w1b - w1a - w1b;
  s.w2_left = f(w2a * w2b);
  s.w2_right = a + b + 2.0 + w2a * w2b - w2a - w2b;
  return s;
}
inline ProductIdentitySides f_product_identity_check(double t1, double t2) {
  return f_product_identity_check(EpsilonBudget(t1), EpsilonBudget(t2));
}

}  // namespace gkb

#endif  // GKB_SCALAR_CORE_HPP_
