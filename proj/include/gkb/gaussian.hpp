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

#ifndef GKB_GAUSSIAN_HPP_
#define GKB_GAUSSIAN_HPP_

// Multivariate Gaussian with validated SPD covariance, spectral
// factorization, whitening/affine transport, and the closed-form KL
// divergence
//   KL(N1||N2) = (log det S2/det S1 + Tr(S2^-1 S1)
//                 + (mu2-mu1)^T S2^-1 (mu2-mu1) - n) / 2
// computed through the Cholesky factor of S2.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace gkb {

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Neumaier-compensated accumulation; keeps long reductions at a couple of
// ulps so the trace-minus-n cancellation in kl() stays benign at n ~ 100.
struct KahanSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kMaxCondition = 1e12;
inline constexpr double kKlZeroSlop = 1e-10;

}  // namespace detail

/// Immutable validated Gaussian N(mean, cov). Construction enforces matching
/// dimensions, finite entries, symmetry within 1e-12 relative (averaged
/// away), positive definiteness (Cholesky), and condition number <= 1e12.
class Gaussian {
 public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const Eigen::Index n = mean_.size();
    if (n < 1 || cov_.rows() != n || cov_.cols() != n) {
      throw std::invalid_argument("Gaussian: mean/cov dimension mismatch");
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
      throw std::invalid_argument("Gaussian: non-finite entries");
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > detail::kSymmetryTol * scale) {
      throw std::invalid_argument("Gaussian: covariance asymmetry above tolerance");
    }
    cov_ = ((cov_ + cov_.transpose()) * 0.5).eval();
    llt_.compute(cov_);
    if (llt_.info() != Eigen::Success) {
      throw NotPositiveDefinite("Gaussian: covariance not positive definite");
    }
    const double rcond = llt_.rcond();
    if (!(rcond > 1.0 / detail::kMaxCondition)) {
      throw IllConditioned("Gaussian: covariance condition number above 1e12");
    }
    detail::KahanSum ld;
    const auto& L = llt_.matrixLLT();
    for (Eigen::Index i = 0; i < n; ++i) ld.add(std::log(L(i, i)));
    log_det_ = 2.0 * ld.value();
  }

  Eigen::Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  double log_det() const { return log_det_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
};

inline Gaussian make_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return Gaussian(std::move(mean), std::move(cov));
}

inline Gaussian standard_gaussian(Eigen::Index n) {
  return Gaussian(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n));
}

/// Eigen-factorization of a covariance: cov = frame * diag(eigenvalues) *
/// frame^T with an orthogonal frame and eigenvalues sorted decreasing.
struct Spectrum {
  Eigen::MatrixXd frame;
  Eigen::VectorXd eigenvalues;
};

inline Spectrum spectral(const Gaussian& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.cov());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral: eigendecomposition failed");
  }
  const Eigen::Index n = g.dim();
  // decreasing order, ties kept in the solver's (ascending-index) order, and
  // columns sign-fixed by their largest entry; diagonal input maps to the
  // identity frame
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });
  Spectrum s;
  s.frame.resize(n, n);
  s.eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues(i) = es.eigenvalues()(order[static_cast<std::size_t>(i)]);
    Eigen::VectorXd col = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    Eigen::Index peak = 0;
    col.cwiseAbs().maxCoeff(&peak);
    if (col(peak) < 0.0) col = -col;
    s.frame.col(i) = col;
  }
  return s;
}

/// Invertible affine map x -> linear * x + offset.
struct AffineMap {
  Eigen::MatrixXd linear;
  Eigen::VectorXd offset;

  AffineMap(Eigen::MatrixXd lin, Eigen::VectorXd off) : linear(std::move(lin)), offset(std::move(off)) {
    if (linear.rows() != linear.cols() || linear.rows() != offset.size()) {
      throw std::invalid_argument("AffineMap: dimension mismatch");
    }
    if (!linear.allFinite() || !offset.allFinite()) {
      throw std::invalid_argument("AffineMap: non-finite entries");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(linear);
    if (!lu.isInvertible()) throw std::invalid_argument("AffineMap: linear part not invertible");
  }

  Eigen::Index dim() const { return offset.size(); }

  /// Spectral condition number estimate of the linear part.
  double condition() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(linear);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
  }
};

inline AffineMap identity_map(Eigen::Index n) {
  return AffineMap(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));
}

/// Map sending g to the standard Gaussian: x -> B^{-1}(x - mean) with
/// B = P D^{1/2} from the spectral factorization.
inline AffineMap whitening_map(const Gaussian& g) {
  const Spectrum s = spectral(g);
  const Eigen::MatrixXd b_inv =
      s.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() * s.frame.transpose();
  return AffineMap(b_inv, -(b_inv * g.mean()).eval());
}

/// Pushforward of g under the map: N(A mu + b, A cov A^T).
inline Gaussian apply_affine(const AffineMap& map, const Gaussian& g) {
  if (map.dim() != g.dim()) throw std::invalid_argument("apply_affine: dimension mismatch");
  Eigen::MatrixXd cov = map.linear * g.cov() * map.linear.transpose();
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return Gaussian(map.linear * g.mean() + map.offset, std::move(cov));
}

/// KL(g1 || g2) via the Cholesky factor of g2's covariance. Nonnegative;
/// round-off within 1e-10 of zero is clamped to exactly 0.
inline double kl(const Gaussian& g1, const Gaussian& g2) {
  const Eigen::Index n = g1.dim();
  if (g2.dim() != n) throw std::invalid_argument("kl: dimension mismatch");
  const auto L2 = g2.llt().matrixL();

  // Tr(S2^-1 S1) = ||L2^-1 L1||_F^2
  Eigen::MatrixXd m = g1.llt().matrixL();
  L2.solveInPlace(m);
  detail::KahanSum tr;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) tr.add(m(i, j) * m(i, j));
  }

  Eigen::VectorXd d = g2.mean() - g1.mean();
  L2.solveInPlace(d);
  detail::KahanSum quad;
  for (Eigen::Index i = 0; i < n; ++i) quad.add(d(i) * d(i));

  double v = 0.5 * ((tr.value() - static_cast<double>(n)) + quad.value() + (g2.log_det() - g1.log_det()));
  if (v < 0.0 && v >= -detail::kKlZeroSlop) v = 0.0;
  return v;
}

}  // namespace gkb

#endif  // GKB_GAUSSIAN_HPP_
