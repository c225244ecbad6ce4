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

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gtrellis/matrices.hpp"
#include "test_support.hpp"

using namespace gtrellis;

namespace {

const std::filesystem::path kFixtures = GTRELLIS_FIXTURE_DIR;

TestMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("hypergraph(9,3)") {
  const TestMatrix a = hypergraph_incidence(9, 3);
  CHECK(a.rows() == 9);
  CHECK(a.cols() == 84);
  for (Index i = 0; i < 9; ++i) CHECK(a.row(i).cast<int>().sum() == 28);
  std::set<StateMask> columns;
  for (Index l = 0; l < 84; ++l) {
    CHECK(a.column(l).cast<int>().sum() == 3);
    columns.insert(a.column_mask(l));
  }
  CHECK(columns.size() == 84);
  CHECK(a.column_mask(0) == 0b000000111);
  CHECK(a.column_mask(1) == 0b000001011);
  CHECK(a.column_mask(83) == 0b111000000);
  // Lexicographic order of subsets: strictly increasing by sorted vertex lists.
  CHECK(make_matrix({Hypergraph{9, 3}, 0}) == a);
}

TEST_CASE("small hypergraphs") {
  const TestMatrix a = hypergraph_incidence(4, 2);
  CHECK(a.cols() == 6);
  for (Index i = 0; i < 4; ++i) CHECK(a.row(i).cast<int>().sum() == 3);
  CHECK(hypergraph_incidence(5, 5).cols() == 1);
  CHECK(hypergraph_incidence(5, 1) == TestMatrix(BitMatrix::Identity(5, 5)));
  CHECK_THROWS_AS(hypergraph_incidence(3, 4), DomainError);
  CHECK_THROWS_AS(hypergraph_incidence(3, 0), DomainError);
  CHECK_THROWS_AS(hypergraph_incidence(60, 30), ResourceError);
  CHECK_THROWS_AS(hypergraph_incidence(200, 100), ResourceError);
}

TEST_CASE("extended BCH(64,57) parity check") {
  const TestMatrix h = ebch_64_57_parity_check();
  CHECK(h.rows() == 7);
  CHECK(h.cols() == 64);
  for (Index i = 0; i < 7; ++i) CHECK(h.row(i).cast<int>().sum() == 32);
  CHECK(gf2_rank(h) == 7);

  std::set<StateMask> columns;
  for (Index l = 0; l < 64; ++l) columns.insert(h.column_mask(l));
  CHECK(columns.size() == 64);
  CHECK(columns.count(0) == 0);

  // Shifts of g(x) = 1 + x + x^6 span the cyclic Hamming code of length 63;
  // each is extended by an overall parity bit at position 63.
  for (int shift = 0; shift < 57; ++shift) {
    BitVector c = BitVector::Zero(64);
    for (int d : {0, 1, 6}) c(shift + d) = 1;
    c(63) = 1;
    for (Index i = 0; i < 7; ++i) {
      int parity = 0;
      for (Index l = 0; l < 64; ++l) parity ^= h(i, l) & (c(l) != 0);
      REQUIRE(parity == 0);
    }
  }
  CHECK(make_matrix({ExtendedBch6457{}, 0}) == h);
}

TEST_CASE("Bernoulli matrices are reproducible from the seed") {
  const TestMatrix golden = read_matrix(kFixtures / "bernoulli_3x6_seed42.txt");
  CHECK(bernoulli_matrix(3, 6, 0.5, 42) == golden);
  CHECK(make_matrix({Bernoulli{3, 6, 0.5}, 42}) == golden);
  CHECK_FALSE(bernoulli_matrix(3, 6, 0.5, 43) == golden);
  CHECK_THROWS_AS(bernoulli_matrix(3, 6, 1.0, 1), DomainError);
  CHECK_THROWS_AS(bernoulli_matrix(0, 6, 0.5, 1), DimensionError);
}

TEST_CASE("Bernoulli density follows the requested rate") {
  for (double p : {0.05, 0.3, 0.5}) {
    const TestMatrix a = bernoulli_matrix(200, 500, p, 9);
    const double n = 200.0 * 500.0;
    const double ones = a.entries().cast<double>().sum();
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(ones - n * p) < 3 * sigma);
  }
}

TEST_CASE("gf2_rank") {
  CHECK(gf2_rank(TestMatrix::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}})) == 2);
  CHECK(gf2_rank(TestMatrix(BitMatrix::Identity(4, 4))) == 4);
  CHECK(gf2_rank(TestMatrix(BitMatrix::Zero(3, 3))) == 0);
  CHECK(gf2_rank(hypergraph_incidence(4, 2)) == 3);
}

TEST_CASE("text format round trip") {
  const TestMatrix a = read_matrix(kFixtures / "example1.txt");
  CHECK(a == gtrellis::testing::example1());
  std::ostringstream out;
  format_matrix(out, a);
  CHECK(out.str() == "3 6\n1 1 0 1 0 0\n0 1 1 0 1 0\n1 0 1 0 0 1\n");
  CHECK(parse(out.str()) == a);

  const auto tmp = std::filesystem::temp_directory_path() / "gtrellis_test_roundtrip.txt";
  const TestMatrix h = ebch_64_57_parity_check();
  write_matrix(tmp, h);
  CHECK(read_matrix(tmp) == h);
  std::filesystem::remove(tmp);
  // Blank lines and extra spacing are tolerated.
  CHECK(parse("2 2\n\n1  0\n 0 1 \n\n") == TestMatrix(BitMatrix::Identity(2, 2)));
}

TEST_CASE("parse errors name the problem") {
  CHECK(parse_error("") == "missing `m n` header");
  CHECK(parse_error("2\n1 0\n").find("malformed header") != std::string::npos);
  CHECK(parse_error("2 2 2\n").find("malformed header") != std::string::npos);
  CHECK(parse_error("0 2\n").find("malformed header") != std::string::npos);
  CHECK(parse_error("1 2\n1 2\n") == "invalid token '2' at row 1, expected 0 or 1");
  CHECK(parse_error("1 2\n1 0 1\n") == "row 1 has more than 2 entries");
  CHECK(parse_error("2 2\n1 0\n") == "matrix body has 1 rows, header declares 2");
  CHECK(parse_error("1 2\n1 0\n0 1\n") == "more than 1 rows in matrix body");
  CHECK_THROWS_AS(parse("100000000 100000000\n"), ResourceError);

  try {
    read_matrix(kFixtures / "short_row.txt");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("short_row.txt") != std::string::npos);
    CHECK(what.find("row 2 has 2 entries, expected 3") != std::string::npos);
  }
  CHECK_THROWS_AS(read_matrix(kFixtures / "does_not_exist.txt"), IoError);
}

TEST_CASE("describe") {
  CHECK(describe({Hypergraph{9, 3}, 0}) == "hypergraph(v=9,k=3)");
  CHECK(describe({ExtendedBch6457{}, 0}) == "ebch(64,57)");
  CHECK(describe({FromFile{"a.txt"}, 0}) == "file(a.txt)");
}
