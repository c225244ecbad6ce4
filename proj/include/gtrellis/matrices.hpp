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
 * @file matrices.hpp
 * @brief Pooling matrix generators and the plain-text matrix format.
 *
 * Text format: a header line `m n`, then m lines of n space-separated 0/1
 * digits.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "gtrellis/core.hpp"

namespace gtrellis {

/// Complete k-uniform hypergraph on v vertices.
struct Hypergraph {
  int order = 9;
  int uniformity = 3;
};
/// 7 x 64 parity-check matrix of the (64,57) extended Hamming/BCH code.
struct ExtendedBch6457 {};
struct Bernoulli {
  Index rows = 0;
  Index cols = 0;
  double density = 0.5;
};
struct FromFile {
  std::filesystem::path path;
};

struct MatrixSpec {
  std::variant<Hypergraph, ExtendedBch6457, Bernoulli, FromFile> kind;
  /// Used by randomized kinds only.
  std::uint64_t seed = 0;
};

TestMatrix make_matrix(const MatrixSpec& spec);
/// Short identifier for output metadata, e.g. `hypergraph(v=9,k=3)`.
std::string describe(const MatrixSpec& spec);

/// v x C(v,k) incidence matrix; columns are the k-subsets of the vertices in
/// lexicographic order.
TestMatrix hypergraph_incidence(int order, int uniformity);

/// Rows 1..6 are the coordinate functions of alpha^j over GF(64) built from
/// x^6 + x + 1 (column j = alpha^j for j < 63, column 63 = overall parity
/// position); row 7 is the complement of row 1. All rows have weight 32 and
/// the rows span the dual of the (64,57) extended cyclic Hamming code.
TestMatrix ebch_64_57_parity_check();

/// I.i.d. Bernoulli(density) entries drawn row-major from CounterRng(seed, 0).
TestMatrix bernoulli_matrix(Index rows, Index cols, double density, std::uint64_t seed);

/// Rank over GF(2).
int gf2_rank(const TestMatrix& a);

TestMatrix parse_matrix(std::istream& in);
void format_matrix(std::ostream& out, const TestMatrix& a);

TestMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const TestMatrix& a);

}  // namespace gtrellis
