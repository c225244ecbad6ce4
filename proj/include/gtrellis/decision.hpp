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
 * @file decision.hpp
 * @brief Threshold decisions on log APP ratios.
 *
 * Element l is declared clear when its log APP ratio exceeds the threshold
 * and defective when it falls below. Two conventions make the extended reals
 * unambiguous: a ratio of +inf (certainly clear) is never flagged, and a
 * threshold of -inf flags nothing. Equality follows the tie policy.
 *
 * The same test in LLR form compares L_l = L^APP_l - log((1 - delta) / delta)
 * against Lambda' = Lambda - log((1 - delta) / delta).
 */

#pragma once

#include <limits>

#include <Eigen/Core>

#include "gtrellis/core.hpp"

namespace gtrellis {

enum class TiePolicy {
  /// Equality flags the element (default; conservative for screening).
  Defective,
  Clear,
};

class ThresholdRule {
 public:
  /// Threshold on log APP ratios.
  static ThresholdRule app(double lambda, TiePolicy tie = TiePolicy::Defective) {
    return ThresholdRule(lambda, tie);
  }
  /// Threshold on LLRs; stored as lambda_prime + log((1 - delta) / delta).
  static ThresholdRule llr(double lambda_prime, const PriorModel& prior,
                           TiePolicy tie = TiePolicy::Defective) {
    return ThresholdRule(lambda_prime + prior.log_odds(), tie);
  }

  double lambda() const { return lambda_; }
  double lambda_prime(const PriorModel& prior) const { return lambda_ - prior.log_odds(); }
  TiePolicy tie() const { return tie_; }

 private:
  ThresholdRule(double lambda, TiePolicy tie) : lambda_(lambda), tie_(tie) {}

  double lambda_;
  TiePolicy tie_;
};

/// True when an element with this score is flagged defective.
inline bool flags_defective(double score, double threshold, TiePolicy tie) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (score == inf || threshold == -inf) return false;
  if (score == threshold) return tie == TiePolicy::Defective;
  return score < threshold;
}

/// Estimate x-hat from log APP ratios.
DefectivityVector decide(const Eigen::VectorXd& lapp, const ThresholdRule& rule);

/// Same decision in LLR form.
DefectivityVector decide_llr(const Eigen::VectorXd& llr, double lambda_prime,
                             TiePolicy tie = TiePolicy::Defective);

/// L_l = L^APP_l - log((1 - delta) / delta).
Eigen::VectorXd llr_from_app(const Eigen::VectorXd& lapp, const PriorModel& prior);

/// COMP: every element that takes part in a negative test is clear, all
/// others are flagged. Independent of the trellis engine.
DefectivityVector comp_decide(const TestMatrix& a, const TestVector& t);

struct RocPoint {
  double p_fa = 0.0;
  double p_md = 0.0;
};

/// (1 - mix) * p1 + mix * p2, the operating point of a test that uses the
/// second threshold with probability mix. Throws DomainError for mix outside
/// [0, 1].
RocPoint randomized_interpolation(const RocPoint& p1, const RocPoint& p2, double mix);

}  // namespace gtrellis
