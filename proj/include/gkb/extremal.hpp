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

#ifndef GKB_EXTREMAL_HPP_
#define GKB_EXTREMAL_HPP_

// Gaussian pairs attaining the sup/inf bounds with equality: one eigenvalue
// at w1(2 eps) (resp. w2(2M)), all others 1, equal means. Canonical form
// places the special eigenvalue in coordinate 0 against the standard
// Gaussian; attainment survives any common well-conditioned affine frame.

#include <stdexcept>

#include "gkb/bounds.hpp"
#include "gkb/gaussian.hpp"

namespace gkb {

enum class ExtremalKind { SupAttainer, InfAttainer };

struct ExtremalPair {
  double forward_constraint = 0.0;  // the eps or M the pair is built for
  Gaussian g1;
  Gaussian g2;
  ExtremalKind kind = ExtremalKind::SupAttainer;
};

namespace detail {

inline ExtremalPair spiked_pair(double budget, double lambda, int n, ExtremalKind kind) {
  if (n < 1) throw std::domain_error("extremal pair: requires n >= 1");
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
  cov(0, 0) = lambda;
  return ExtremalPair{budget, Gaussian(Eigen::VectorXd::Zero(n), cov), standard_gaussian(n), kind};
}

inline constexpr double kMaxFrameCondition = 1e8;

}  // namespace detail

/// Pair with kl(g1, g2) = eps whose reverse divergence attains
/// sup_reverse_kl(eps): g2 standard, g1 = N(0, diag(w1(2 eps), 1, ..., 1)).
inline ExtremalPair extremal_sup_pair(double eps, int n) {
  if (!std::isfinite(eps) || eps <= 0.0) throw std::domain_error("extremal_sup_pair: requires eps > 0");
  return detail::spiked_pair(eps, w1(2.0 * eps), n, ExtremalKind::SupAttainer);
}

/// Pair with kl(g1, g2) = M whose reverse divergence attains
/// inf_reverse_kl(M): g2 standard, g1 = N(0, diag(w2(2M), 1, ..., 1)).
inline ExtremalPair extremal_inf_pair(double M, int n) {
  if (!std::isfinite(M) || M <= 0.0) throw std::domain_error("extremal_inf_pair: requires M > 0");
  return detail::spiked_pair(M, w2(2.0 * M), n, ExtremalKind::InfAttainer);
}

/// Transports both Gaussians of the pair by the same affine map. Maps with
/// condition estimate above 1e8 are rejected; divergences are preserved.
inline ExtremalPair embed_in_frame(const ExtremalPair& pair, const AffineMap& map) {
  if (map.dim() != pair.g1.dim()) throw std::invalid_argument("embed_in_frame: dimension mismatch");
  if (map.condition() > detail::kMaxFrameCondition) {
    throw std::invalid_argument("embed_in_frame: map condition estimate above 1e8");
  }
  return ExtremalPair{pair.forward_constraint, apply_affine(map, pair.g1), apply_affine(map, pair.g2), pair.kind};
}

}  // namespace gkb

#endif  // GKB_EXTREMAL_HPP_
