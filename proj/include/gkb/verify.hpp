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

#ifndef GKB_VERIFY_HPP_
#define GKB_VERIFY_HPP_

// Randomized falsification harness: every theorem/lemma inequality is
// checked against sampled Gaussians and scalar grids with reproducible
// counter-based seeding. Sweeps calibrate the constraint exactly, compare
// the observed divergence against the closed-form bound, and include the
// extremal pair as a tightness witness whose |margin| must stay within
// tolerance. A bound_scale hook (normally 1.0) lets the test suite corrupt
// a bound and prove the witness trials actually fail.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gkb/bounds.hpp"
#include "gkb/extremal.hpp"
#include "gkb/gaussian.hpp"

namespace gkb {

// ---------------------------------------------------------------------------
// Deterministic seeding
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based per-trial seed; independent of execution order, so
/// parallel runs reproduce sequential ones exactly.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
  const std::uint64_t a = detail::splitmix64(master ^ detail::splitmix64(cell + 1));
  return detail::splitmix64(a ^ detail::splitmix64(trial + 0x51ED5EEDull));
}

/// Harness parallelism cap: GKB_THREADS when set to a positive integer,
/// otherwise the machine parallelism.
inline int harness_threads() {
  if (const char* env = std::getenv("GKB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 1024));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace detail {

// Runs fn(0..count-1); each invocation must touch only its own output slot.
template <typename F>
inline void parallel_for(int count, F&& fn) {
  const int threads = std::min(harness_threads(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Random SPD matrices and Gaussians
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd gauss(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) gauss(i, j) = nd(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {  // sign-correct so the frame is unique
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

inline Eigen::MatrixXd random_spd_impl(int dim, std::mt19937_64& rng, double log_lo, double log_hi) {
  std::uniform_real_distribution<double> ud(log_lo, log_hi);
  const Eigen::MatrixXd q = random_orthogonal(dim, rng);
  Eigen::VectorXd lambda(dim);
  for (int i = 0; i < dim; ++i) lambda(i) = std::exp(log_lo == log_hi ? log_lo : ud(rng));
  Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
  return ((a + a.transpose()) * 0.5).eval();
}

inline Gaussian random_gaussian(int dim, std::mt19937_64& rng, double mean_scale = 0.7,
                                double log_lo = -1.2, double log_hi = 1.2) {
  Eigen::MatrixXd cov = random_spd_impl(dim, rng, log_lo, log_hi);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd mean(dim);
  for (int i = 0; i < dim; ++i) mean(i) = mean_scale * nd(rng);
  return Gaussian(std::move(mean), std::move(cov));
}

}  // namespace detail

/// SPD matrix with log-uniform eigenvalues in [log_lo, log_hi] (natural-log
/// units within [-6, 6]) in a random orthogonal frame; deterministic in
/// (dim, seed, range).
inline Eigen::MatrixXd random_spd(int dim, std::uint64_t seed, double log_lo, double log_hi) {
  if (dim < 1) throw std::domain_error("random_spd: requires dim >= 1");
  if (!(log_lo >= -6.0 && log_hi <= 6.0 && log_lo <= log_hi)) {
    throw std::domain_error("random_spd: log eigenvalue range must lie within [-6, 6]");
  }
  std::mt19937_64 rng(seed);
  return detail::random_spd_impl(dim, rng, log_lo, log_hi);
}

// ---------------------------------------------------------------------------
// Constraint calibration
// ---------------------------------------------------------------------------

namespace detail {

template <typename H>
inline double bisect_to_target(H&& h, double lo, double hi, double target, double rel_tol) {
  // invariant: h(lo) < target <= h(hi) up to the final bracket
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = h(mid);
    if (std::abs(v - target) <= rel_tol * target) return mid;
    (v < target ? lo : hi) = mid;
  }
  return hi;
}

inline constexpr double kCalibrationRelTol = 1e-9;

}  // namespace detail

/// Gaussian g1' on the interpolation family
///   g1(s) = N(mu2 + s (mu1 - mu2), (1-s) S2 + s S1)
/// with kl(g1', g2) = target (relative 1e-9); targets above kl(g1, g2) are
/// reached by scaling the mean offset instead. Requires kl(g1, g2) > 0 and
/// target > 0.
inline Gaussian calibrate_pair_to_kl(const Gaussian& g1, const Gaussian& g2, double target) {
  if (!(std::isfinite(target) && target > 0.0)) {
    throw std::domain_error("calibrate_pair_to_kl: requires target > 0");
  }
  const double base = kl(g1, g2);
  if (!(base > 0.0)) throw std::domain_error("calibrate_pair_to_kl: requires kl(g1, g2) > 0");

  const Eigen::VectorXd dmu = g1.mean() - g2.mean();
  const Eigen::MatrixXd dcov = g1.cov() - g2.cov();
  const auto mix = [&](double s) {
    return Gaussian(g2.mean() + s * dmu, g2.cov() + s * dcov);
  };

  Gaussian out = g1;
  if (target <= base) {
    const double s = detail::bisect_to_target([&](double v) { return kl(mix(v), g2); }, 0.0, 1.0,
                                              target, 1e-12);
    out = mix(s);
  } else {
    // mean scaling: kl grows by (c^2 - 1)/2 * dmu^T S2^-1 dmu
    Eigen::VectorXd y = dmu;
    g2.llt().matrixL().solveInPlace(y);
    const double quad = y.squaredNorm();
    if (quad > 1e-12) {
      const double c = std::sqrt(1.0 + 2.0 * (target - base) / quad);
      out = Gaussian(g2.mean() + c * dmu, g1.cov());
    } else {
      Eigen::VectorXd e1 = Eigen::VectorXd::Zero(g1.dim());
      e1(0) = 1.0;
      Eigen::VectorXd ye = e1;
      g2.llt().matrixL().solveInPlace(ye);
      const double c = std::sqrt(2.0 * (target - base) / ye.squaredNorm());
      out = Gaussian(g1.mean() + c * e1, g1.cov());
    }
  }
  const double achieved = kl(out, g2);
  if (std::abs(achieved - target) > detail::kCalibrationRelTol * target) {
    throw std::runtime_error("calibrate_pair_to_kl: target not reached");
  }
  return out;
}

namespace detail {

// Same interpolation idea with the varying Gaussian in the second slot:
// returns g3' with kl(g2, g3') = target.
inline Gaussian calibrate_second_to_kl(const Gaussian& g2, const Gaussian& g3, double target) {
  if (!(std::isfinite(target) && target > 0.0)) {
    throw std::domain_error("calibrate_second_to_kl: requires target > 0");
  }
  const double base = kl(g2, g3);
  if (!(base > 0.0)) throw std::domain_error("calibrate_second_to_kl: requires kl(g2, g3) > 0");

  const Eigen::VectorXd dmu = g3.mean() - g2.mean();
  const Eigen::MatrixXd dcov = g3.cov() - g2.cov();
  const auto mix = [&](double s) {
    return Gaussian(g2.mean() + s * dmu, g2.cov() + s * dcov);
  };

  Gaussian out = g3;
  if (target <= base) {
    const double s = bisect_to_target([&](double v) { return kl(g2, mix(v)); }, 0.0, 1.0, target, 1e-12);
    out = mix(s);
  } else {
    Eigen::VectorXd y = dmu;
    g3.llt().matrixL().solveInPlace(y);
    const double quad = y.squaredNorm();
    if (quad > 1e-12) {
      const double c = std::sqrt(1.0 + 2.0 * (target - base) / quad);
      out = Gaussian(g2.mean() + c * dmu, g3.cov());
    } else {
      Eigen::VectorXd e1 = Eigen::VectorXd::Zero(g3.dim());
      e1(0) = 1.0;
      Eigen::VectorXd ye = e1;
      g3.llt().matrixL().solveInPlace(ye);
      const double c = std::sqrt(2.0 * (target - base) / ye.squaredNorm());
      out = Gaussian(g3.mean() + c * e1, g3.cov());
    }
  }
  const double achieved = kl(g2, out);
  if (std::abs(achieved - target) > kCalibrationRelTol * target) {
    throw std::runtime_error("calibrate_second_to_kl: target not reached");
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Records and reports
// ---------------------------------------------------------------------------

// Which side of the inequality the bound sits on. Upper: observed <= bound;
// Lower: observed >= bound; UpperStrict: observed < bound with clearance.
enum class BoundDirection { Upper, Lower, UpperStrict };

struct TrialRecord {
  std::uint64_t seed = 0;
  int trial = 0;
  int dim = 0;
  double cell_p1 = 0.0;
  double cell_p2 = 0.0;
  double constraint_value = 0.0;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // always bound - observed, never clamped
  bool witness = false;
  bool degenerate = false;  // excluded from violation accounting
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t master_seed = 0;
  double tolerance = 0.0;
  BoundDirection direction = BoundDirection::Upper;
  bool tolerance_scales_with_bound = false;
  std::vector<TrialRecord> trials;
  std::vector<std::string> skipped;
  int violations = 0;
  double min_margin = std::numeric_limits<double>::quiet_NaN();

  bool record_violates(const TrialRecord& r) const {
    if (r.degenerate) return false;
    const double tol = tolerance * (tolerance_scales_with_bound ? std::max(1.0, std::abs(r.bound)) : 1.0);
    if (r.witness) return !(std::abs(r.margin) <= tol);  // tightness requirement
    switch (direction) {
      case BoundDirection::Upper:
        return r.margin < -tol;
      case BoundDirection::Lower:
        return r.margin > tol;
      case BoundDirection::UpperStrict:
        return r.margin <= tol;
    }
    return false;
  }

  void finalize() {
    violations = 0;
    min_margin = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : trials) {
      if (record_violates(r)) ++violations;
      if (!r.degenerate && (std::isnan(min_margin) || r.margin < min_margin)) min_margin = r.margin;
    }
  }

  void to_csv(std::ostream& os) const {
    const auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    os << "master_seed,cell_p1,cell_p2,trial,dim,constraint_value,observed,bound,margin\n";
    for (const auto& r : trials) {
      os << master_seed << ',' << num(r.cell_p1) << ',' << num(r.cell_p2) << ',' << r.trial << ','
         << r.dim << ',' << num(r.constraint_value) << ',' << num(r.observed) << ',' << num(r.bound)
         << ',' << num(r.margin) << '\n';
    }
  }

  // Writes to a temporary sibling and renames, so a failure never leaves a
  // partial CSV behind.
  void write_csv(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream os(tmp);
      if (!os) throw std::runtime_error("cannot open for writing: " + tmp);
      to_csv(os);
      if (!os.good()) throw std::runtime_error("write failure: " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  std::string summary() const {
    std::ostringstream os;
    os << "suite=" << suite << " master_seed=" << master_seed << " records=" << trials.size()
       << " violations=" << violations << " min_margin=" << min_margin
       << " skipped=" << skipped.size();
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace detail {

inline void record_skip(TrialRecord& r, const std::string& why) {
  r.degenerate = true;
  r.note = "skipped: " + why;
  r.constraint_value = r.observed = r.bound = r.margin = std::numeric_limits<double>::quiet_NaN();
}

inline void collect(VerificationReport& rep, std::vector<TrialRecord>&& recs) {
  for (auto& r : recs) {
    if (r.degenerate && r.note.rfind("skipped", 0) == 0) rep.skipped.push_back(r.note);
    rep.trials.push_back(std::move(r));
  }
}

}  // namespace detail

/// Thm-1 sweep: per (eps, dim) cell, random pairs are calibrated to forward
/// KL exactly eps and the reverse KL compared against sup_reverse_kl(eps);
/// the extremal pair is appended as the final trial of every cell.
inline VerificationReport sweep_symmetry(const std::vector<double>& eps_list, const std::vector<int>& dims,
                                         int trials_per_cell, std::uint64_t master_seed,
                                         double bound_scale = 1.0) {
  if (trials_per_cell < 0) throw std::domain_error("sweep_symmetry: trials_per_cell must be >= 0");
  VerificationReport rep;
  rep.suite = "symmetry";
  rep.master_seed = master_seed;
  rep.tolerance = 1e-8;
  rep.direction = BoundDirection::Upper;
  std::uint64_t cell = 0;
  for (const double eps : eps_list) {
    if (!(eps > 0.0)) throw std::domain_error("sweep_symmetry: eps must be > 0");
    const double bound = sup_reverse_kl(eps).value * bound_scale;
    for (const int dim : dims) {
      std::vector<TrialRecord> recs(static_cast<std::size_t>(trials_per_cell) + 1);
      detail::parallel_for(trials_per_cell, [&](int k) {
        TrialRecord& r = recs[static_cast<std::size_t>(k)];
        r.seed = derive_seed(master_seed, cell, static_cast<std::uint64_t>(k));
        r.trial = k;
        r.dim = dim;
        r.cell_p1 = eps;
        std::mt19937_64 rng(r.seed);
        try {
          const Gaussian g1 = detail::random_gaussian(dim, rng);
          const Gaussian g2 = detail::random_gaussian(dim, rng);
          const Gaussian c1 = calibrate_pair_to_kl(g1, g2, eps);
          r.constraint_value = kl(c1, g2);
          r.observed = kl(g2, c1);
          r.bound = bound;
          r.margin = bound - r.observed;
        } catch (const std::exception& e) {
          detail::record_skip(r, e.what());
        }
      });
      TrialRecord& w = recs.back();
      w.seed = derive_seed(master_seed, cell, static_cast<std::uint64_t>(trials_per_cell));
      w.trial = trials_per_cell;
      w.dim = dim;
      w.cell_p1 = eps;
      w.witness = true;
      const ExtremalPair p = extremal_sup_pair(eps, dim);
      w.constraint_value = kl(p.g1, p.g2);
      w.observed = kl(p.g2, p.g1);
      w.bound = bound;
      w.margin = bound - w.observed;
      detail::collect(rep, std::move(recs));
      ++cell;
    }
  }
  rep.finalize();
  return rep;
}

/// Thm-4 sweep, direction reversed: forward KL calibrated to exactly M and
/// the reverse KL must stay above inf_reverse_kl(M).
inline VerificationReport sweep_infimum(const std::vector<double>& M_list, const std::vector<int>& dims,
                                        int trials_per_cell, std::uint64_t master_seed,
                                        double bound_scale = 1.0) {
  if (trials_per_cell < 0) throw std::domain_error("sweep_infimum: trials_per_cell must be >= 0");
  VerificationReport rep;
  rep.suite = "infimum";
  rep.master_seed = master_seed;
  rep.tolerance = 1e-8;
  rep.direction = BoundDirection::Lower;
  std::uint64_t cell = 0;
  for (const double M : M_list) {
    if (!(M > 0.0)) throw std::domain_error("sweep_infimum: M must be > 0");
    const double bound = inf_reverse_kl(M).value * bound_scale;
    for (const int dim : dims) {
      std::vector<TrialRecord> recs(static_cast<std::size_t>(trials_per_cell) + 1);
      detail::parallel_for(trials_per_cell, [&](int k) {
        TrialRecord& r = recs[static_cast<std::size_t>(k)];
        r.seed = derive_seed(master_seed, cell, static_cast<std::uint64_t>(k));
        r.trial = k;
        r.dim = dim;
        r.cell_p1 = M;
        std::mt19937_64 rng(r.seed);
        try {
          const Gaussian g1 = detail::random_gaussian(dim, rng);
          const Gaussian g2 = detail::random_gaussian(dim, rng);
          const Gaussian c1 = calibrate_pair_to_kl(g1, g2, M);
          r.constraint_value = kl(c1, g2);
          r.observed = kl(g2, c1);
          r.bound = bound;
          r.margin = bound - r.observed;
        } catch (const std::exception& e) {
          detail::record_skip(r, e.what());
        }
      });
      TrialRecord& w = recs.back();
      w.seed = derive_seed(master_seed, cell, static_cast<std::uint64_t>(trials_per_cell));
      w.trial = trials_per_cell;
      w.dim = dim;
      w.cell_p1 = M;
      w.witness = true;
      const ExtremalPair p = extremal_inf_pair(M, dim);
      w.constraint_value = kl(p.g1, p.g2);
      w.observed = kl(p.g2, p.g1);
      w.bound = bound;
      w.margin = bound - w.observed;
      detail::collect(rep, std::move(recs));
      ++cell;
    }
  }
  rep.finalize();
  return rep;
}

/// Thm-5 sweep: triples with kl(N1,N2) = eps1 and kl(N2,N3) = eps2 exactly;
/// kl(N1,N3) must clear triangle_bound(eps1,eps2) strictly. The (0,0) cell
/// admits only N1=N2=N3 and is reported as a degenerate-equality record.
inline VerificationReport sweep_triangle(const std::vector<double>& eps1_list,
                                         const std::vector<double>& eps2_list,
                                         const std::vector<int>& dims, int trials_per_cell,
                                         std::uint64_t master_seed, double bound_scale = 1.0) {
  if (trials_per_cell < 0) throw std::domain_error("sweep_triangle: trials_per_cell must be >= 0");
  VerificationReport rep;
  rep.suite = "triangle";
  rep.master_seed = master_seed;
  rep.tolerance = 1e-8;
  rep.direction = BoundDirection::UpperStrict;
  std::uint64_t cell = 0;
  for (const double e1 : eps1_list) {
    for (const double e2 : eps2_list) {
      if (!(e1 >= 0.0) || !(e2 >= 0.0)) throw std::domain_error("sweep_triangle: eps must be >= 0");
      const double bound = triangle_bound(e1, e2).value * bound_scale;
      for (const int dim : dims) {
        if (e1 == 0.0 && e2 == 0.0) {
          TrialRecord r;
          r.seed = derive_seed(master_seed, cell, 0);
          r.dim = dim;
          r.degenerate = true;
          r.note = "degenerate-equality";
          detail::collect(rep, {std::move(r)});
          ++cell;
          continue;
        }
        std::vector<TrialRecord> recs(static_cast<std::size_t>(trials_per_cell));
        detail::parallel_for(trials_per_cell, [&](int k) {
          TrialRecord& r = recs[static_cast<std::size_t>(k)];
          r.seed = derive_seed(master_seed, cell, static_cast<std::uint64_t>(k));
          r.trial = k;
          r.dim = dim;
          r.cell_p1 = e1;
          r.cell_p2 = e2;
          std::mt19937_64 rng(r.seed);
          try {
            const Gaussian g1 = detail::random_gaussian(dim, rng);
            const Gaussian g2 = detail::random_gaussian(dim, rng);
            const Gaussian g3 = detail::random_gaussian(dim, rng);
            const Gaussian n1 = e1 > 0.0 ? calibrate_pair_to_kl(g1, g2, e1) : g2;
            const Gaussian n3 = e2 > 0.0 ? detail::calibrate_second_to_kl(g2, g3, e2) : g2;
            r.constraint_value = kl(n1, g2);
            r.observed = kl(n1, n3);
            r.bound = bound;
            r.margin = bound - r.observed;
          } catch (const std::exception& e) {
            detail::record_skip(r, e.what());
          }
        });
        detail::collect(rep, std::move(recs));
        ++cell;
      }
    }
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Allocation inequality (two-dimensional extreme-allocation lemma)
// ---------------------------------------------------------------------------

struct AllocationTuple {
  double eps_x1 = 0.0, eps_x2 = 0.0;
  double eps_y1 = 0.0, eps_y2 = 0.0;
};

/// S(theta_x, theta_y) for one tuple; thetas live in the admissible box
/// [-eps_1/eps_2, 1] per axis (all thetas admissible when eps_2 = 0).
class AllocationObjective {
 public:
  AllocationObjective(const AllocationTuple& t, double theta_x, double theta_y)
      : t_(t), theta_x_(theta_x), theta_y_(theta_y) {
    validate_tuple(t);
    if (t.eps_x2 > 0.0 && !(theta_x >= -t.eps_x1 / t.eps_x2 - 1e-12 && theta_x <= 1.0)) {
      throw std::domain_error("AllocationObjective: theta_x outside admissible box");
    }
    if (t.eps_y2 > 0.0 && !(theta_y >= -t.eps_y1 / t.eps_y2 - 1e-12 && theta_y <= 1.0)) {
      throw std::domain_error("AllocationObjective: theta_y outside admissible box");
    }
  }

  static void validate_tuple(const AllocationTuple& t) {
    if (!(t.eps_x1 >= t.eps_x2 && t.eps_x2 >= 0.0 && t.eps_y1 >= t.eps_y2 && t.eps_y2 >= 0.0)) {
      throw std::domain_error("AllocationTuple: requires eps_x1 >= eps_x2 >= 0 and eps_y1 >= eps_y2 >= 0");
    }
  }

  double value() const { return s_value(t_, theta_x_, theta_y_); }

  static double s_value(const AllocationTuple& t, double theta_x, double theta_y) {
    const double ax = std::max(0.0, t.eps_x1 + theta_x * t.eps_x2);
    const double bx = std::max(0.0, t.eps_x2 - theta_x * t.eps_x2);
    const double ay = std::max(0.0, t.eps_y1 + theta_y * t.eps_y2);
    const double by = std::max(0.0, t.eps_y2 - theta_y * t.eps_y2);
    return f(w2(ax) * w2(ay)) + f(w2(bx) * w2(by));
  }

 private:
  AllocationTuple t_;
  double theta_x_, theta_y_;
};

/// Checks S(theta_x, theta_y) <= S(1,1) + 1e-10 for every tuple, scanning a
/// theta grid over the admissible box (S(0,0) is always among the scanned
/// points). Case-1 tuples (eps_x2 = eps_y2 = 0) must give exact equality.
/// CSV columns carry (eps_x1, eps_y1) as the cell and eps_x2 + eps_y2 as the
/// constraint value; the note holds the full tuple.
inline VerificationReport check_allocation_inequality(const std::vector<AllocationTuple>& grid,
                                                      int theta_points = 5) {
  if (theta_points < 2) throw std::domain_error("check_allocation_inequality: theta_points >= 2");
  VerificationReport rep;
  rep.suite = "allocation";
  rep.tolerance = 1e-10;
  rep.direction = BoundDirection::Upper;
  rep.trials.resize(grid.size());
  detail::parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const AllocationTuple& t = grid[static_cast<std::size_t>(i)];
    AllocationObjective::validate_tuple(t);
    TrialRecord& r = rep.trials[static_cast<std::size_t>(i)];
    r.trial = i;
    r.cell_p1 = t.eps_x1;
    r.cell_p2 = t.eps_y1;
    r.constraint_value = t.eps_x2 + t.eps_y2;
    const double bound = AllocationObjective::s_value(t, 1.0, 1.0);

    std::vector<double> txs{0.0}, tys{0.0};
    if (t.eps_x2 > 0.0) {
      const double lo = -t.eps_x1 / t.eps_x2;
      for (int k = 0; k < theta_points; ++k) txs.push_back(lo + (1.0 - lo) * k / (theta_points - 1));
    }
    if (t.eps_y2 > 0.0) {
      const double lo = -t.eps_y1 / t.eps_y2;
      for (int k = 0; k < theta_points; ++k) tys.push_back(lo + (1.0 - lo) * k / (theta_points - 1));
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (const double tx : txs) {
      for (const double ty : tys) worst = std::max(worst, AllocationObjective::s_value(t, tx, ty));
    }
    r.observed = worst;
    r.bound = bound;
    r.margin = bound - worst;
    if (t.eps_x2 == 0.0 && t.eps_y2 == 0.0) r.note = "case1";
    {
      std::ostringstream os;
      os << (r.note.empty() ? "" : r.note + " ") << "tuple=(" << t.eps_x1 << ',' << t.eps_x2 << ','
         << t.eps_y1 << ',' << t.eps_y2 << ')';
      r.note = os.str();
    }
  });
  rep.finalize();
  return rep;
}

/// Default 4-D tuple grid (>= 10^4 admissible tuples including Case-1).
inline std::vector<AllocationTuple> default_allocation_grid() {
  const std::vector<double> primary{0.0, 0.05, 0.15, 0.3,  0.5, 0.8,  1.2, 1.8,
                                    2.5, 3.5,  5.0,  6.5,  8.0, 10.0, 13.0};
  const std::vector<double> fractions{0.0, 1.0 / 6, 1.0 / 3, 0.5, 2.0 / 3, 5.0 / 6, 1.0};
  std::vector<AllocationTuple> grid;
  grid.reserve(primary.size() * primary.size() * fractions.size() * fractions.size());
  for (const double x1 : primary) {
    for (const double fx : fractions) {
      for (const double y1 : primary) {
        for (const double fy : fractions) {
          grid.push_back(AllocationTuple{x1, fx * x1, y1, fy * y1});
        }
      }
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Trace inequality (Tr(AB) <= sum of ordered eigenvalue products)
// ---------------------------------------------------------------------------

inline VerificationReport check_trace_inequality(int dim, int trials, std::uint64_t master_seed) {
  if (dim < 1 || trials < 1) throw std::domain_error("check_trace_inequality: dim >= 1, trials >= 1");
  VerificationReport rep;
  rep.suite = "trace";
  rep.master_seed = master_seed;
  rep.tolerance = 1e-8;
  rep.tolerance_scales_with_bound = true;
  rep.direction = BoundDirection::Upper;
  rep.trials.resize(static_cast<std::size_t>(trials));
  detail::parallel_for(trials, [&](int k) {
    TrialRecord& r = rep.trials[static_cast<std::size_t>(k)];
    r.seed = derive_seed(master_seed, static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(k));
    r.trial = k;
    r.dim = dim;
    std::mt19937_64 rng(r.seed);
    const Eigen::MatrixXd a = detail::random_spd_impl(dim, rng, -2.0, 2.0);
    const Eigen::MatrixXd b = detail::random_spd_impl(dim, rng, -2.0, 2.0);
    r.observed = a.cwiseProduct(b).sum();  // Tr(AB) for symmetric A, B
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a), eb(b);
    double bound = 0.0;
    for (int i = 0; i < dim; ++i) bound += ea.eigenvalues()(i) * eb.eigenvalues()(i);
    r.bound = bound;  // both ascending <=> both descending
    r.margin = bound - r.observed;
  });
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Scalar lemma suite
// ---------------------------------------------------------------------------

/// Grid densities for check_scalar_lemmas. Defaults cover every stated range.
struct ScalarGridSpec {
  double t_max = 50.0;
  int t_points = 300;             // t grids on [0, t_max]
  int x_points = 400;             // log-x grids on [1e-6, 1e6]
  int pair_points = 12;           // (t1, t2) grids for the product identity
  int lemma6_eps_points = 6;      // (eps_x, eps_y) in [0, 5]^2
  int lemma6_x_points = 9;        // samples of x in [w1, w2]
  double series_eps_min = 1e-6;   // series residual grids
  double series_eps_max = 1e-2;
  int series_points = 25;

  void validate() const {
    if (!(t_max > 0.0) || t_points < 2 || x_points < 3 || pair_points < 2 || lemma6_eps_points < 2 ||
        lemma6_x_points < 2 || series_points < 2 || !(series_eps_min > 0.0) ||
        !(series_eps_max > series_eps_min)) {
      throw std::domain_error("ScalarGridSpec: malformed grid spec");
    }
  }
};

/// Runs every scalar-lemma invariant (the f-calculus lemmas, the root-oracle
/// cross-check, g_r >= g_l, the product bound f(xy) <= f(w2 w2), the Delta
/// convexity inequality, and the branch-point series residuals) on the given
/// grids. One record per lemma item; bound columns carry the allowed
/// thresholds.
inline VerificationReport check_scalar_lemmas(const ScalarGridSpec& spec = ScalarGridSpec{}) {
  spec.validate();
  VerificationReport rep;
  rep.suite = "scalar";
  rep.direction = BoundDirection::Upper;
  rep.tolerance = 0.0;

  const auto add_item = [&rep](const std::string& name, double observed, double bound) {
    TrialRecord r;
    r.trial = static_cast<int>(rep.trials.size());
    r.observed = observed;
    r.bound = bound;
    r.margin = bound - observed;
    r.note = name;
    rep.trials.push_back(std::move(r));
  };

  std::vector<double> tgrid;
  tgrid.reserve(static_cast<std::size_t>(spec.t_points) + 1);
  tgrid.push_back(0.0);
  for (int i = 0; i < spec.t_points; ++i) {
    // log-spaced from 1e-4 up to t_max
    const double u = static_cast<double>(i) / (spec.t_points - 1);
    tgrid.push_back(1e-4 * std::pow(spec.t_max / 1e-4, u));
  }
  std::vector<double> xgrid;
  xgrid.reserve(static_cast<std::size_t>(spec.x_points) + 1);
  for (int i = 0; i < spec.x_points; ++i) {
    const double u = static_cast<double>(i) / (spec.x_points - 1);
    xgrid.push_back(1e-6 * std::pow(1e12, u));
  }
  xgrid.push_back(1.0);

  {  // f >= 1 with equality only at x = 1, and convexity (divided differences)
    double worst = -std::numeric_limits<double>::infinity();
    for (const double x : xgrid) worst = std::max(worst, 1.0 - f(x));
    add_item("lemma1a_min", worst, 0.0);
    double worst_dd = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 2; i < xgrid.size() - 1; ++i) {  // skip appended 1.0
      const double x0 = xgrid[i - 2], x1 = xgrid[i - 1], x2 = xgrid[i];
      const double s1 = (f(x1) - f(x0)) / (x1 - x0);
      const double s2 = (f(x2) - f(x1)) / (x2 - x1);
      worst_dd = std::max(worst_dd, -(s2 - s1) / (x2 - x0));
    }
    add_item("lemma1a_convexity", worst_dd, 1e-12);
  }
  {  // f(x) > f(1/x) for x > 1, reversed below 1
    double worst = -std::numeric_limits<double>::infinity();
    for (const double x : xgrid) {
      if (x > 1.0) worst = std::max(worst, f(1.0 / x) - f(x));
      if (x < 1.0) worst = std::max(worst, f(x) - f(1.0 / x));
    }
    add_item("lemma1b_reciprocal", worst, 0.0);
  }
  {  // w1/w2 via Lambert W vs pure bisection
    double worst = 0.0;
    for (const double t : tgrid) {
      if (t > 700.0) continue;
      const double lo = root_oracle(t, RootSide::Lower);
      const double hi = root_oracle(t, RootSide::Upper);
      worst = std::max(worst, std::abs(w1(t) - lo) / lo);
      worst = std::max(worst, std::abs(w2(t) - hi) / hi);
    }
    add_item("lemma1cd_oracle", worst, 1e-10);
  }
  {  // f(w1) < f(1/w1), f(1/w2) < f(w2) for t > 0
    double worst = -std::numeric_limits<double>::infinity();
    for (const double t : tgrid) {
      if (t == 0.0) continue;
      worst = std::max(worst, -delta_sup(t));
      worst = std::max(worst, -delta_inf(t));
    }
    add_item("lemma1f_strict", worst, 0.0);
  }
  {  // f'(w2(t)) <= -f'(1/w2(t))
    double worst = -std::numeric_limits<double>::infinity();
    for (const double t : tgrid) {
      const double v = w2(t);
      worst = std::max(worst, f_prime(v) + f_prime(1.0 / v));
    }
    add_item("lemma1i_derivative", worst, 1e-12);
  }
  {  // product identities, both cases
    double worst = 0.0;
    for (int i = 0; i < spec.pair_points; ++i) {
      for (int j = 0; j < spec.pair_points; ++j) {
        const double t1 = spec.t_max * i / (spec.pair_points - 1);
        const double t2 = spec.t_max * j / (spec.pair_points - 1);
        if (t1 + t2 > 600.0) continue;  // w1 product underflow guard
        const auto s = f_product_identity_check(t1, t2);
        worst = std::max(worst, std::abs(s.w1_left - s.w1_right) / std::max(1.0, std::abs(s.w1_left)));
        worst = std::max(worst, std::abs(s.w2_left - s.w2_right) / std::max(1.0, std::abs(s.w2_left)));
      }
    }
    add_item("lemma1j_product_identity", worst, 1e-10);
  }
  {  // w2 - 1 >= 1 - w1, equality only at 0
    double worst = -std::numeric_limits<double>::infinity();
    for (const double t : tgrid) {
      if (t == 0.0) continue;
      worst = std::max(worst, g_l(t) - g_r(t));
    }
    add_item("lemma5_gr_ge_gl", worst, 0.0);
    add_item("lemma5_equality_at_0", std::abs(g_r(0.0) - g_l(0.0)), 0.0);
  }
  {  // f(xy) <= f(w2(ex) w2(ey)) for f(x) <= 1+ex, f(y) <= 1+ey
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.lemma6_eps_points; ++i) {
      for (int j = 0; j < spec.lemma6_eps_points; ++j) {
        const double ex = 5.0 * i / (spec.lemma6_eps_points - 1);
        const double ey = 5.0 * j / (spec.lemma6_eps_points - 1);
        const double rhs = f(w2(ex) * w2(ey));
        for (int a = 0; a < spec.lemma6_x_points; ++a) {
          const double ux = static_cast<double>(a) / (spec.lemma6_x_points - 1);
          const double x = w1(ex) + ux * (w2(ex) - w1(ex));
          for (int b = 0; b < spec.lemma6_x_points; ++b) {
            const double uy = static_cast<double>(b) / (spec.lemma6_x_points - 1);
            const double y = w1(ey) + uy * (w2(ey) - w1(ey));
            worst = std::max(worst, f(x * y) - rhs);
          }
        }
      }
    }
    add_item("lemma6_product_bound", worst, 1e-10);
  }
  {  // Delta(t e) <= t Delta(e), both Delta functions, normalized
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 9; ++i) {
      const double th = 0.1 * i;
      for (const double e : tgrid) {
        if (e == 0.0) continue;
        const double ds = delta_sup(e), di = delta_inf(e);
        worst = std::max(worst, (delta_sup(th * e) - th * ds) / std::max(1.0, th * ds));
        worst = std::max(worst, (delta_inf(th * e) - th * di) / std::max(1.0, th * di));
      }
    }
    add_item("delta_convexity", worst, 1e-12);
  }
  {  // branch-point series residuals
    double worst_d = 0.0, worst_i = 0.0;
    for (int i = 0; i < spec.series_points; ++i) {
      const double u = static_cast<double>(i) / (spec.series_points - 1);
      const double e = spec.series_eps_min * std::pow(spec.series_eps_max / spec.series_eps_min, u);
      const double x = -std::exp(-(1.0 + 2.0 * e));
      const double w0 = lambert_w(WBranch::Principal, x);
      const double wm1 = lambert_w(WBranch::MinusOne, x);
      const double se = std::sqrt(e);
      worst_d = std::max(worst_d, std::abs(w0 - (-1.0 + 2.0 * se - 4.0 / 3.0 * e)) / (e * se));
      worst_i = std::max(worst_i, std::abs(wm1 - (-1.0 - 2.0 * se)) / e);
    }
    add_item("seriesD_w0_residual", worst_d, 1.0);
    add_item("seriesI_wm1_residual", worst_i, 2.0);
  }

  rep.finalize();
  return rep;
}

}  // namespace gkb

#endif  // GKB_VERIFY_HPP_
