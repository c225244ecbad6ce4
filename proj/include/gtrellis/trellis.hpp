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
 * @file trellis.hpp
 * @brief Syndrome trellis of a pooling matrix.
 *
 * States at depth l are the partial syndromes s_l = s_{l-1} OR (x_l AND a_l)
 * reachable from the all-zero state, indexed by their packed StateMask. Section
 * l (0-based here, element l) connects depth l to depth l+1 with one edge per
 * label; when a_l is already covered by the source state the two edges are
 * parallel self-loops and are kept as two entries.
 *
 * Three kinds exist:
 *  - Complete: every defectivity vector is a path.
 *  - Expurgated: only paths ending at the observed noiseless syndrome.
 *  - Reduced: rebuilt on the positive tests and on the elements that take
 *    part in no negative test; the other elements are certainly clear.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gtrellis/core.hpp"

namespace gtrellis {

/// Trellis width limits. Complete trellises need O(n 2^m) memory.
struct TrellisLimits {
  int max_tests = 24;
  /// Up to this many tests, state lookup uses a dense 2^m table.
  int dense_tests = 16;
};

/// Guard for enumerate_paths.
inline constexpr std::uint64_t kMaxEnumeratedPaths = std::uint64_t{1} << 20;

struct Edge {
  StateMask from;
  StateMask to;
  /// Positions of the endpoints in the sorted state lists of their depths.
  std::uint32_t from_pos;
  std::uint32_t to_pos;
  std::uint8_t label;
};

struct EdgeSection {
  /// Depth reached by the section's edges, 1..n.
  Index depth;
  std::vector<Edge> edges;
};

enum class TrellisKind { Complete, Expurgated, Reduced };

/// Bookkeeping of a reduced trellis, in terms of the original matrix.
struct ReducedInfo {
  int m0 = 0;
  Index n0 = 0;
  Index original_tests = 0;
  Index original_elements = 0;
  /// Original test vector the reduction was built for.
  TestVector observed;
  std::vector<Index> kept_tests;
  std::vector<Index> kept_elements;
  std::vector<Index> zero_covered_elements;
};

class Trellis {
 public:
  Trellis(TrellisKind kind, int tests, std::vector<std::vector<StateMask>> states,
          std::vector<EdgeSection> sections, std::optional<StateMask> final_state = std::nullopt,
          std::optional<ReducedInfo> reduced = std::nullopt);

  TrellisKind kind() const { return kind_; }
  /// Width of the state word: m, or m0 for a reduced trellis.
  int tests() const { return tests_; }
  /// Number of sections (n, or n0 for a reduced trellis).
  Index length() const { return static_cast<Index>(sections_.size()); }

  /// Sorted active states at depth 0..length().
  const std::vector<StateMask>& states(Index depth) const {
    return states_.at(static_cast<std::size_t>(depth));
  }
  const EdgeSection& section(Index element) const {
    return sections_.at(static_cast<std::size_t>(element));
  }
  const std::vector<EdgeSection>& sections() const { return sections_; }

  /// Terminal state of an expurgated or reduced trellis.
  const std::optional<StateMask>& final_state() const { return final_state_; }
  const std::optional<ReducedInfo>& reduced() const { return reduced_; }

  std::size_t edge_count() const;
  std::size_t max_states() const;

 private:
  TrellisKind kind_;
  int tests_;
  std::vector<std::vector<StateMask>> states_;
  std::vector<EdgeSection> sections_;
  std::optional<StateMask> final_state_;
  std::optional<ReducedInfo> reduced_;
};

Trellis build_complete(const TestMatrix& a, const TrellisLimits& limits = {});

/// Keeps the paths ending at the state index of t. Throws NotASyndromeError when that state
/// is not reachable.
Trellis expurgate(const Trellis& trellis, const TestVector& t);

Trellis build_reduced(const TestMatrix& a, const TestVector& t, const TrellisLimits& limits = {});

/// Every label path of the trellis, in lexicographic order. Throws
/// ResourceError beyond kMaxEnumeratedPaths paths.
std::vector<DefectivityVector> enumerate_paths(const Trellis& trellis);

/// Writes one `depth src dst label` line per edge, preceded by a `#` header.
void write_trellis(std::ostream& out, const Trellis& trellis);

}  // namespace gtrellis
