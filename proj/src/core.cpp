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

#include "gtrellis/core.hpp"

#include <bit>
#include <cmath>

namespace gtrellis {

namespace {

double bsc_from_counts(int agreements, int disagreements, double epsilon) {
  return std::pow(1.0 - epsilon, agreements) * std::pow(epsilon, disagreements);
}

}  // namespace

TestMatrix::TestMatrix(BitMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw DimensionError("test matrix needs at least one test and one element");
  }
  if ((entries_.array() > 1).any()) throw DomainError("test matrix entries must be 0 or 1");
  if (entries_.rows() <= kMaxMaskTests) {
    column_masks_.resize(static_cast<std::size_t>(entries_.cols()));
    for (Index l = 0; l < entries_.cols(); ++l) {
      StateMask mask = 0;
      for (Index i = 0; i < entries_.rows(); ++i) {
        if (entries_(i, l)) mask |= StateMask{1} << i;
      }
      column_masks_[static_cast<std::size_t>(l)] = mask;
    }
  }
}

TestMatrix TestMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  const auto m = static_cast<Index>(rows.size());
  const auto n = m > 0 ? static_cast<Index>(rows.begin()->size()) : Index{0};
  BitMatrix entries(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n) throw DimensionError("ragged test matrix rows");
    Index l = 0;
    for (int v : row) {
      if (v != 0 && v != 1) throw DomainError("test matrix entries must be 0 or 1");
      entries(i, l++) = static_cast<std::uint8_t>(v);
    }
    ++i;
  }
  return TestMatrix(std::move(entries));
}

StateMask TestMatrix::column_mask(Index element) const {
  if (column_masks_.empty()) {
    throw ResourceError("packed columns need at most 64 tests, matrix has " +
                        std::to_string(rows()));
  }
  return column_masks_.at(static_cast<std::size_t>(element));
}

PriorModel::PriorModel(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("prevalence delta must lie strictly between 0 and 1, got " +
                      std::to_string(delta));
  }
}

double PriorModel::log_odds() const { return std::log1p(-delta_) - std::log(delta_); }

NoiseModel NoiseModel::noiseless() { return NoiseModel(Kind::Noiseless, 0.0, {}, "noiseless"); }

NoiseModel NoiseModel::bsc(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5)) {
    throw DomainError("BSC crossover epsilon must lie in [0, 0.5), got " +
                      std::to_string(epsilon));
  }
  return NoiseModel(Kind::Bsc, epsilon, {}, "bsc");
}

NoiseModel NoiseModel::generic(Likelihood likelihood, std::string name) {
  if (!likelihood) throw DomainError("generic noise model needs a likelihood function");
  return NoiseModel(Kind::Generic, 0.0, std::move(likelihood), std::move(name));
}

double NoiseModel::likelihood(const TestVector& t, const Syndrome& s) const {
  if (t.size() != s.size()) throw DimensionError("test vector and syndrome lengths differ");
  switch (kind_) {
    case Kind::Noiseless:
      return t == s ? 1.0 : 0.0;
    case Kind::Bsc:
      return bsc_likelihood(t, s, epsilon_);
    case Kind::Generic:
      return generic_(t, s);
  }
  return 0.0;
}

double NoiseModel::likelihood(StateMask t, StateMask s, int m) const {
  switch (kind_) {
    case Kind::Noiseless:
      return t == s ? 1.0 : 0.0;
    case Kind::Bsc: {
      const int flips = std::popcount(t ^ s);
      return bsc_from_counts(m - flips, flips, epsilon_);
    }
    case Kind::Generic:
      return generic_(binary_expand(t, m), binary_expand(s, m));
  }
  return 0.0;
}

Syndrome compute_syndrome(const DefectivityVector& x, const TestMatrix& a) {
  if (x.size() != a.cols()) {
    throw DimensionError("defectivity vector has length " + std::to_string(x.size()) +
                         ", matrix has " + std::to_string(a.cols()) + " columns");
  }
  BitVector s(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    s(i) = (a.entries().row(i).transpose().array() * x.bits().array()).any() ? 1 : 0;
  }
  return Syndrome(std::move(s));
}

StateMask syndrome_mask(const DefectivityVector& x, const TestMatrix& a) {
  if (x.size() != a.cols()) throw DimensionError("defectivity vector length mismatch");
  StateMask s = 0;
  for (Index l = 0; l < x.size(); ++l) {
    if (x[l]) s |= a.column_mask(l);
  }
  return s;
}

StateMask decimal_index(const Syndrome& s) {
  if (s.size() > kMaxMaskTests) throw ResourceError("state index needs at most 64 tests");
  StateMask index = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i]) index |= StateMask{1} << i;
  }
  return index;
}

Syndrome binary_expand(StateMask state, int m) {
  if (m < 0 || m > kMaxMaskTests) throw ResourceError("state index needs at most 64 tests");
  if (m < kMaxMaskTests && (state >> m) != 0) {
    throw DomainError("state " + std::to_string(state) + " out of range for " +
                      std::to_string(m) + " tests");
  }
  Syndrome s(static_cast<Index>(m));
  for (int i = 0; i < m; ++i) s.set(i, ((state >> i) & 1U) != 0);
  return s;
}

double bsc_likelihood(const TestVector& t, const Syndrome& s, double epsilon) {
  if (t.size() != s.size()) throw DimensionError("test vector and syndrome lengths differ");
  const auto flips = static_cast<int>((t.bits().array() != s.bits().array()).count());
  return bsc_from_counts(static_cast<int>(t.size()) - flips, flips, epsilon);
}

}  // namespace gtrellis
