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

#include "doctest.h"
#include "gtrellis/core.hpp"
#include "gtrellis/rng.hpp"
#include "test_support.hpp"

using namespace gtrellis;
using gtrellis::testing::example1;

TEST_CASE("compute_syndrome on the six-element example") {
  const TestMatrix a = example1();
  CHECK(compute_syndrome(DefectivityVector{1, 0, 0, 0, 0, 0}, a) == Syndrome{1, 0, 1});
  CHECK(compute_syndrome(DefectivityVector(6), a) == Syndrome{0, 0, 0});
  // Columns 2 = (1,1,0) and 5 = (0,1,0) OR to (1,1,0).
  CHECK(compute_syndrome(DefectivityVector{0, 1, 0, 0, 1, 0}, a) == Syndrome{1, 1, 0});
  CHECK(syndrome_mask(DefectivityVector{0, 1, 0, 0, 1, 0}, a) == 3);
}

TEST_CASE("compute_syndrome rejects a length mismatch") {
  CHECK_THROWS_AS(compute_syndrome(DefectivityVector{1, 0}, example1()), DimensionError);
}

TEST_CASE("decimal_index and binary_expand") {
  CHECK(decimal_index(Syndrome{1, 0, 1}) == 5);
  CHECK(decimal_index(Syndrome{0, 0, 0}) == 0);
  CHECK(decimal_index(Syndrome{1, 1, 1}) == 7);
  CHECK(binary_expand(5, 3) == Syndrome{1, 0, 1});
  CHECK(binary_expand(0, 4) == Syndrome{0, 0, 0, 0});
  CHECK(binary_expand(6, 3) == Syndrome{0, 1, 1});
  CHECK_THROWS_AS(binary_expand(8, 3), DomainError);

  for (int m = 1; m <= 8; ++m) {
    for (StateMask s = 0; s < (StateMask{1} << m); ++s) {
      REQUIRE(decimal_index(binary_expand(s, m)) == s);
    }
  }
}

TEST_CASE("bsc_likelihood") {
  const Syndrome s{1, 0, 1};
  CHECK(bsc_likelihood(s, s, 0.1) == doctest::Approx(0.729).epsilon(1e-15));
  CHECK(bsc_likelihood(Syndrome{0, 1, 0}, s, 0.1) == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(bsc_likelihood(Syndrome{1, 0, 1}, Syndrome{1, 1, 1}, 0.05) ==
        doctest::Approx(0.95 * 0.95 * 0.05).epsilon(1e-15));
  CHECK_THROWS_AS(bsc_likelihood(Syndrome{1, 0}, s, 0.1), DimensionError);
}

TEST_CASE("BSC likelihood sums to one over all test vectors") {
  for (int m = 1; m <= 6; ++m) {
    for (double eps : {0.0, 0.05, 0.2, 0.49}) {
      const NoiseModel noise = NoiseModel::bsc(eps);
      for (StateMask s = 0; s < (StateMask{1} << m); ++s) {
        double total = 0.0;
        double total_packed = 0.0;
        for (StateMask t = 0; t < (StateMask{1} << m); ++t) {
          total += noise.likelihood(binary_expand(t, m), binary_expand(s, m));
          total_packed += noise.likelihood(t, s, m);
        }
        REQUIRE(total == doctest::Approx(1.0).epsilon(1e-13));
        REQUIRE(total_packed == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("noiseless likelihood is the indicator and equals BSC(0)") {
  const NoiseModel noiseless = NoiseModel::noiseless();
  const NoiseModel bsc0 = NoiseModel::bsc(0.0);
  for (StateMask t = 0; t < 16; ++t) {
    for (StateMask s = 0; s < 16; ++s) {
      CHECK(noiseless.likelihood(t, s, 4) == (t == s ? 1.0 : 0.0));
      CHECK(bsc0.likelihood(t, s, 4) == noiseless.likelihood(t, s, 4));
    }
  }
}

TEST_CASE("syndrome map is monotone and folds column by column") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const TestMatrix a = gtrellis::testing::random_matrix(rng, 1 + Index(rng() % 6), 1 + Index(rng() % 12));
    DefectivityVector x(a.cols());
    DefectivityVector larger(a.cols());
    for (Index l = 0; l < a.cols(); ++l) {
      x.set(l, rng.bernoulli(0.3));
      larger.set(l, x[l] || rng.bernoulli(0.3));
    }
    const Syndrome s = compute_syndrome(x, a);
    const Syndrome s_larger = compute_syndrome(larger, a);
    for (Index i = 0; i < a.rows(); ++i) REQUIRE((!s[i] || s_larger[i]));

    Syndrome partial(a.rows());
    for (Index l = 0; l < a.cols(); ++l) {
      for (Index i = 0; i < a.rows(); ++i) partial.set(i, partial[i] || (x[l] && a(i, l)));
    }
    REQUIRE(partial == s);
    REQUIRE(decimal_index(s) == syndrome_mask(x, a));
  }
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS_AS(PriorModel(0.0), DomainError);
  CHECK_THROWS_AS(PriorModel(1.0), DomainError);
  CHECK_THROWS_AS(PriorModel(-0.1), DomainError);
  CHECK_THROWS_AS(PriorModel(std::nan("")), DomainError);
  CHECK(PriorModel(0.1).log_odds() == doctest::Approx(std::log(9.0)));
  CHECK_THROWS_AS(NoiseModel::bsc(0.5), DomainError);
  CHECK_THROWS_AS(NoiseModel::bsc(-0.01), DomainError);
  CHECK_NOTHROW(NoiseModel::bsc(0.0));
}

TEST_CASE("test matrix invariants") {
  const TestMatrix a = example1();
  CHECK(a.rows() == 3);
  CHECK(a.cols() == 6);
  CHECK(a.column_mask(0) == 5);
  CHECK(a.column(1) == (BitVector(3) << 1, 1, 0).finished());
  CHECK(a.row(2) == (BitVector(6) << 1, 0, 1, 0, 0, 1).finished());
  BitMatrix bad = BitMatrix::Zero(2, 2);
  bad(0, 0) = 2;
  CHECK_THROWS_AS(TestMatrix{bad}, DomainError);
  CHECK_THROWS_AS(TestMatrix{BitMatrix(0, 3)}, DimensionError);
}

TEST_CASE("bit strings") {
  CHECK(TestVector::from_string("101") == Syndrome{1, 0, 1});
  CHECK(TestVector::from_string("101").to_string() == "101");
  CHECK_THROWS_AS(TestVector::from_string("1a1"), ParseError);
  CHECK(DefectivityVector{1, 1, 0, 1}.weight() == 3);
}
