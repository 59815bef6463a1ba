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

#ifndef GKB_TESTS_TEST_UTIL_HPP_
#define GKB_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <vector>

namespace gkb_test {

// Richardson-extrapolated central difference (O(h^4)); the independent
// oracle for every analytic derivative in the library.
template <typename F>
double fd_derivative(F&& fn, double x, double h) {
  const double d1 = (fn(x + h) - fn(x - h)) / (2.0 * h);
  const double d2 = (fn(x + h / 2.0) - fn(x - h / 2.0)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  g.reserve(points);
  for (int i = 0; i < points; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return g;
}

inline std::vector<double> lin_grid(double lo, double hi, int points) {
  std::vector<double> g;
  g.reserve(points);
  for (int i = 0; i < points; ++i) {
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / (points - 1));
  }
  return g;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace gkb_test

#endif  // GKB_TESTS_TEST_UTIL_HPP_
