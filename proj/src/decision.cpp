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

#include "gtrellis/decision.hpp"

#include <string>

namespace gtrellis {

DefectivityVector decide(const Eigen::VectorXd& lapp, const ThresholdRule& rule) {
  DefectivityVector estimate(lapp.size());
  for (Index l = 0; l < lapp.size(); ++l) {
    estimate.set(l, flags_defective(lapp(l), rule.lambda(), rule.tie()));
  }
  return estimate;
}

DefectivityVector decide_llr(const Eigen::VectorXd& llr, double lambda_prime, TiePolicy tie) {
  DefectivityVector estimate(llr.size());
  for (Index l = 0; l < llr.size(); ++l) estimate.set(l, flags_defective(llr(l), lambda_prime, tie));
  return estimate;
}

Eigen::VectorXd llr_from_app(const Eigen::VectorXd& lapp, const PriorModel& prior) {
  return lapp.array() - prior.log_odds();
}

DefectivityVector comp_decide(const TestMatrix& a, const TestVector& t) {
  if (t.size() != a.rows()) throw DimensionError("test vector length does not match the matrix");
  DefectivityVector estimate(a.cols());
  for (Index l = 0; l < a.cols(); ++l) {
    bool cleared = false;
    for (Index i = 0; i < a.rows() && !cleared; ++i) cleared = a(i, l) && !t[i];
    estimate.set(l, !cleared);
  }
  return estimate;
}

RocPoint randomized_interpolation(const RocPoint& p1, const RocPoint& p2, double mix) {
  if (!(mix >= 0.0 && mix <= 1.0)) {
    throw DomainError("randomization probability must lie in [0, 1], got " + std::to_string(mix));
  }
  return {(1.0 - mix) * p1.p_fa + mix * p2.p_fa, (1.0 - mix) * p1.p_md + mix * p2.p_md};
}

}  // namespace gtrellis
