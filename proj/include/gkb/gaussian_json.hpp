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

#ifndef GKB_GAUSSIAN_JSON_HPP_
#define GKB_GAUSSIAN_JSON_HPP_

// JSON document form of a Gaussian: {"mean": [..], "cov": [[..],[..]]},
// row-major, ragged rows rejected. Parse errors name the offending field.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "gkb/gaussian.hpp"

namespace gkb {

inline Gaussian gaussian_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("gaussian document: not a JSON object");
  if (!j.contains("mean") || !j["mean"].is_array() || j["mean"].empty()) {
    throw std::invalid_argument("gaussian document: field 'mean' missing or not a non-empty array");
  }
  if (!j.contains("cov") || !j["cov"].is_array() || j["cov"].empty()) {
    throw std::invalid_argument("gaussian document: field 'cov' missing or not a non-empty array");
  }
  const auto& jm = j["mean"];
  const auto& jc = j["cov"];
  const Eigen::Index n = static_cast<Eigen::Index>(jm.size());
  Eigen::VectorXd mean(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!jm[i].is_number()) throw std::invalid_argument("gaussian document: field 'mean' has a non-numeric entry");
    mean(i) = jm[i].get<double>();
  }
  if (static_cast<Eigen::Index>(jc.size()) != n) {
    throw std::invalid_argument("gaussian document: field 'cov' row count does not match 'mean' length");
  }
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = jc[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw std::invalid_argument("gaussian document: field 'cov' has a ragged or non-array row " + std::to_string(i));
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!row[k].is_number()) throw std::invalid_argument("gaussian document: field 'cov' has a non-numeric entry");
      cov(i, k) = row[k].get<double>();
    }
  }
  return Gaussian(std::move(mean), std::move(cov));
}

inline nlohmann::json gaussian_to_json(const Gaussian& g) {
  nlohmann::json j;
  j["mean"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.dim(); ++i) j["mean"].push_back(g.mean()(i));
  j["cov"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < g.dim(); ++k) row.push_back(g.cov()(i, k));
    j["cov"].push_back(row);
  }
  return j;
}

inline Gaussian load_gaussian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("JSON parse error in " + path + ": " + e.what());
  }
  return gaussian_from_json(j);
}

inline std::pair<Gaussian, Gaussian> gaussian_pair_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("gaussian pair document: expected a JSON array of two gaussian documents");
  }
  return {gaussian_from_json(j[0]), gaussian_from_json(j[1])};
}

inline nlohmann::json gaussian_pair_to_json(const Gaussian& g1, const Gaussian& g2) {
  return nlohmann::json::array({gaussian_to_json(g1), gaussian_to_json(g2)});
}

}  // namespace gkb

#endif  // GKB_GAUSSIAN_JSON_HPP_
