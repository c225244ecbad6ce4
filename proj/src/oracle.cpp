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

#include "gtrellis/oracle.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace gtrellis::oracle {

OracleResult brute_posteriors(const TestMatrix& a, const TestVector& t, const PriorModel& prior,
                              const NoiseModel& noise) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (n > kMaxOracleElements) {
    throw ResourceError("oracle enumerates 2^n vectors; n = " + std::to_string(n) +
                        " exceeds the limit of " + std::to_string(kMaxOracleElements));
  }
  if (t.size() != m) throw DimensionError("test vector length does not match the matrix");

  const double delta = prior.delta();
  std::vector<double> prior_weight(static_cast<std::size_t>(n + 1));
  for (Index w = 0; w <= n; ++w) {
    prior_weight[static_cast<std::size_t>(w)] =
        std::pow(delta, static_cast<double>(w)) * std::pow(1.0 - delta, static_cast<double>(n - w));
  }

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    for (Index i = 0; i < m; ++i) {
      if (a.entries()(i, l) == 1) members[static_cast<std::size_t>(l)].push_back(i);
    }
  }

  // Likelihood of the current syndrome; `hits` counts defective members per test.
  std::vector<int> hits(static_cast<std::size_t>(m), 0);
  Index disagreements = 0;
  for (Index i = 0; i < m; ++i) disagreements += t[i] ? 1 : 0;
  auto likelihood = [&]() -> double {
    switch (noise.kind()) {
      case NoiseModel::Kind::Noiseless:
        return disagreements == 0 ? 1.0 : 0.0;
      case NoiseModel::Kind::Bsc: {
        const double eps = noise.epsilon();
        double q = 1.0;
        for (Index i = 0; i < m; ++i) q *= i < disagreements ? eps : 1.0 - eps;
        return q;
      }
      case NoiseModel::Kind::Generic: {
        Syndrome s(m);
        for (Index i = 0; i < m; ++i) s.set(i, hits[static_cast<std::size_t>(i)] > 0);
        return noise.likelihood(t, s);
      }
    }
    return 0.0;
  };

  OracleResult out;
  out.mass0 = Eigen::VectorXd::Zero(n);
  out.mass1 = Eigen::VectorXd::Zero(n);

  std::vector<char> x(static_cast<std::size_t>(n), 0);
  Index weight = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < total; ++k) {
    if (k > 0) {
      // Gray code: step k flips the bit at the position of its lowest set bit.
      const auto flip = static_cast<std::size_t>(std::countr_zero(k));
      const int step = x[flip] ? -1 : 1;
      x[flip] = static_cast<char>(!x[flip]);
      weight += step;
      for (Index i : members[flip]) {
        int& h = hits[static_cast<std::size_t>(i)];
        const bool before = h > 0;
        h += step;
        const bool after = h > 0;
        if (before != after) disagreements += (after == t[i]) ? -1 : 1;
      }
    }
    const double q = likelihood();
    if (q == 0.0) continue;
    ++out.compatible;
    const double w = q * prior_weight[static_cast<std::size_t>(weight)];
    for (Index l = 0; l < n; ++l) {
      if (x[static_cast<std::size_t>(l)]) {
        out.mass1(l) += w;
      } else {
        out.mass0(l) += w;
      }
    }
  }

  out.evidence = n > 0 ? out.mass0(0) + out.mass1(0) : 0.0;
  out.posterior_defective = out.mass1.array() / (out.mass0 + out.mass1).array();
  return out;
}

}  // namespace gtrellis::oracle
