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

#include "gtrellis/forward_backward.hpp"

namespace gtrellis {

namespace detail {

void check_run_inputs(const Trellis& trellis, const NoiseModel& noise, const TestVector& t) {
  if (!noise.is_noiseless() && trellis.kind() != TrellisKind::Complete) {
    throw DomainError("the " + noise.name() + " noise model needs a complete trellis");
  }
  switch (trellis.kind()) {
    case TrellisKind::Complete:
    case TrellisKind::Expurgated:
      if (t.size() != trellis.tests()) {
        throw DimensionError("test vector has length " + std::to_string(t.size()) +
                             ", trellis has " + std::to_string(trellis.tests()) + " tests");
      }
      if (trellis.kind() == TrellisKind::Expurgated && decimal_index(t) != *trellis.final_state()) {
        throw DomainError("trellis was expurgated for a different test vector");
      }
      break;
    case TrellisKind::Reduced:
      if (!(trellis.reduced()->observed == t)) {
        throw DomainError("trellis was reduced for a different test vector");
      }
      break;
  }
}

}  // namespace detail

Eigen::ArrayX2d posteriors(const PosteriorResult& result) {
  Eigen::ArrayX2d out(result.lapp.size(), 2);
  out.col(0) = 1.0 / (1.0 + (-result.lapp.array()).exp());
  out.col(1) = 1.0 / (1.0 + result.lapp.array().exp());
  return out;
}

template PosteriorResult run<double>(const Trellis&, const PriorModel&, const NoiseModel&,
                                     const TestVector&, MetricTable<double>*);
template PosteriorResult run<long double>(const Trellis&, const PriorModel&, const NoiseModel&,
                                          const TestVector&, MetricTable<long double>*);

}  // namespace gtrellis
