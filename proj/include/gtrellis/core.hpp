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
 * @file core.hpp
 * @brief Domain types of non-adaptive group testing: the pooling matrix,
 * defectivity and test vectors, the i.i.d. prior and the test noise models,
 * together with the Boolean OR syndrome map.
 *
 * Binary vectors are Eigen column vectors of bytes. Syndromes of up to 64
 * tests can also be packed into a StateMask where bit i (0-based) carries
 * test i+1, so the packed value is the decimal state index of the syndrome.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gtrellis/errors.hpp"

namespace gtrellis {

using Index = Eigen::Index;
using BitVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Packed syndrome; bit i holds test i+1. Also the trellis state index.
using StateMask = std::uint64_t;

/// Largest number of tests a StateMask can hold.
inline constexpr int kMaxMaskTests = 64;

/// Binary vector with a tag, so that defectivity vectors and test vectors
/// cannot be mixed up.
template <class Tag>
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(Index size) : bits_(BitVector::Zero(size)) {}

  explicit BinaryVector(BitVector bits) : bits_(std::move(bits)) {
    for (Index i = 0; i < bits_.size(); ++i) {
      if (bits_(i) > 1) throw DomainError("binary vector entries must be 0 or 1");
    }
  }

  BinaryVector(std::initializer_list<int> bits) : bits_(static_cast<Index>(bits.size())) {
    Index i = 0;
    for (int b : bits) {
      if (b != 0 && b != 1) throw DomainError("binary vector entries must be 0 or 1");
      bits_(i++) = static_cast<std::uint8_t>(b);
    }
  }

  /// Parses a compact bit string such as "101".
  static BinaryVector from_string(std::string_view text) {
    BitVector bits(static_cast<Index>(text.size()));
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] != '0' && text[i] != '1') {
        throw ParseError("invalid bit '" + std::string(1, text[i]) + "' in bit string '" +
                         std::string(text) + "'");
      }
      bits(static_cast<Index>(i)) = static_cast<std::uint8_t>(text[i] - '0');
    }
    return BinaryVector(std::move(bits));
  }

  Index size() const { return bits_.size(); }
  bool operator[](Index i) const { return bits_(i) != 0; }
  void set(Index i, bool value) { bits_(i) = value ? 1 : 0; }
  const BitVector& bits() const { return bits_; }

  /// Hamming weight.
  Index weight() const { return bits_.template cast<Index>().sum(); }

  std::string to_string() const {
    std::string out(static_cast<std::size_t>(bits_.size()), '0');
    for (Index i = 0; i < bits_.size(); ++i) {
      if (bits_(i)) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
  }

  friend bool operator==(const BinaryVector& a, const BinaryVector& b) {
    return a.bits_.size() == b.bits_.size() && a.bits_ == b.bits_;
  }

 private:
  BitVector bits_;
};

struct DefectivityTag;
struct SyndromeTag;

/// Status of the population, 1 = defective.
using DefectivityVector = BinaryVector<DefectivityTag>;
/// Noiseless pool outcomes; observed test vectors share the type.
using Syndrome = BinaryVector<SyndromeTag>;
using TestVector = Syndrome;

/// m x n pooling matrix; entry (i, l) is 1 iff element l takes part in test i.
/// rows() is the number of tests m, cols() the population size n.
class TestMatrix {
 public:
  explicit TestMatrix(BitMatrix entries);

  /// Convenience for literals in tests and examples.
  static TestMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  bool operator()(Index test, Index element) const { return entries_(test, element) != 0; }
  const BitMatrix& entries() const { return entries_; }

  BitVector column(Index element) const { return entries_.col(element); }
  BitVector row(Index test) const { return entries_.row(test).transpose(); }

  /// Column packed as a StateMask. Throws ResourceError if m > 64.
  StateMask column_mask(Index element) const;

  friend bool operator==(const TestMatrix& a, const TestMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.entries_ == b.entries_;
  }

 private:
  BitMatrix entries_;
  std::vector<StateMask> column_masks_;
};

/// I.i.d. prior: every element is defective with probability delta in (0, 1).
class PriorModel {
 public:
  explicit PriorModel(double delta);
  double delta() const { return delta_; }
  /// log((1 - delta) / delta), the prior term separating APP and LLR forms.
  double log_odds() const;

 private:
  double delta_;
};

/// Test noise Q(t|s).
class NoiseModel {
 public:
  enum class Kind { Noiseless, Bsc, Generic };
  using Likelihood = std::function<double(const TestVector&, const Syndrome&)>;

  static NoiseModel noiseless();
  /// Binary symmetric channel applied to every test independently.
  static NoiseModel bsc(double epsilon);
  /// Arbitrary likelihood; evaluated only where the engine needs it.
  static NoiseModel generic(Likelihood likelihood, std::string name = "generic");

  Kind kind() const { return kind_; }
  bool is_noiseless() const { return kind_ == Kind::Noiseless; }
  double epsilon() const { return epsilon_; }
  const std::string& name() const { return name_; }

  double likelihood(const TestVector& t, const Syndrome& s) const;
  /// Same as above on packed vectors of m tests.
  double likelihood(StateMask t, StateMask s, int m) const;

 private:
  NoiseModel(Kind kind, double epsilon, Likelihood generic, std::string name)
      : kind_(kind), epsilon_(epsilon), generic_(std::move(generic)), name_(std::move(name)) {}

  Kind kind_;
  double epsilon_;
  Likelihood generic_;
  std::string name_;
};

/// s_i = OR_l (x_l AND a_{i,l}).
Syndrome compute_syndrome(const DefectivityVector& x, const TestMatrix& a);

/// Packed syndrome of x; requires m <= 64.
StateMask syndrome_mask(const DefectivityVector& x, const TestMatrix& a);

/// sum_i s_i 2^(i-1) with tests numbered from 1.
StateMask decimal_index(const Syndrome& s);

/// Inverse of decimal_index for a vector of m tests.
Syndrome binary_expand(StateMask state, int m);

/// (1 - eps)^agreements * eps^disagreements.
double bsc_likelihood(const TestVector& t, const Syndrome& s, double epsilon);

}  // namespace gtrellis
