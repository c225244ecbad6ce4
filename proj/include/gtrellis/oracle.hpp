// Copyright 2026 The gtrellis Authors
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

/**
 * @file oracle.hpp
 * @brief Exhaustive reference posteriors.
 *
 * Sums Q(t | x OR A^T) delta^w(x) (1 - delta)^(n - w(x)) over all 2^n
 * defectivity vectors, split by the value of each x_l. Shares nothing with
 * the trellis engine beyond the input types: the syndrome and the channel
 * likelihood are recomputed here from the raw matrix entries.
 */

#pragma once

#include <Eigen/Core>

#include "gtrellis/core.hpp"

namespace gtrellis::oracle {

inline constexpr Index kMaxOracleElements = 24;

struct OracleResult {
  /// Joint masses Pr{X_l = 0, T = t} and Pr{X_l = 1, T = t}.
  Eigen::VectorXd mass0;
  Eigen::VectorXd mass1;
  /// Pr{X_l = 1 | T = t}.
  Eigen::VectorXd posterior_defective;
  /// Pr{T = t} (taken from element 0; the same for every element).
  double evidence = 0.0;
  /// Number of x with nonzero likelihood.
  std::uint64_t compatible = 0;
};

/// Throws ResourceError for n > kMaxOracleElements.
OracleResult brute_posteriors(const TestMatrix& a, const TestVector& t, const PriorModel& prior,
                              const NoiseModel& noise);

}  // namespace gtrellis::oracle
