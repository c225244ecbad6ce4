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
#include <limits>
#include <numeric>

#include "doctest.h"
#include "gtrellis/forward_backward.hpp"
#include "gtrellis/matrices.hpp"
#include "gtrellis/oracle.hpp"
#include "test_support.hpp"

using namespace gtrellis;
using gtrellis::testing::example1;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Frozen from an independent enumeration over all 64 vectors.
const double kNoiselessPosterior[6] = {0.9174311926605505, 0.0, 0.0,
                                       0.1743119266055046, 0.0, 0.1743119266055046};
const double kNoiselessLapp[6] = {-2.407945608651872, kInf, kInf,
                                  1.5553706911638243, kInf, 1.5553706911638243};
constexpr double kNoiselessEvidence = 0.079461;

const double kBscPosterior[6] = {0.07560778131110502, 0.7071115991134826,
                                 0.075607781311105,   0.32063126261842745,
                                 0.32063126261842745, 0.04838295005473581};
constexpr double kBscEvidence = 0.11674988800000005;

void check_lapp(const Eigen::VectorXd& got, const double* expected, double tol) {
  for (Index l = 0; l < got.size(); ++l) {
    INFO("element " << l << " got " << got(l) << " expected " << expected[l]);
    CHECK(gtrellis::testing::same_extended(got(l), expected[l], tol));
  }
}

}  // namespace

TEST_CASE("noiseless example on all three trellis kinds") {
  const TestMatrix a = example1();
  const PriorModel prior(0.1);
  const NoiseModel noise = NoiseModel::noiseless();
  const TestVector t{1, 0, 1};
  const Trellis complete = build_complete(a);
  for (const Trellis& tr : {complete, expurgate(complete, t), build_reduced(a, t)}) {
    const PosteriorResult r = run(tr, prior, noise, t);
    REQUIRE(r.lapp.size() == 6);
    check_lapp(r.lapp, kNoiselessLapp, 1e-12);
    CHECK(std::exp(r.log_evidence) == doctest::Approx(kNoiselessEvidence).epsilon(1e-12));
    const Eigen::ArrayX2d p = posteriors(r);
    for (Index l = 0; l < 6; ++l) {
      CHECK(p(l, 1) == doctest::Approx(kNoiselessPosterior[l]).epsilon(1e-12));
      CHECK(p(l, 0) + p(l, 1) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(r.zero_forced == std::vector<Index>{1, 2, 4});
  }
}

TEST_CASE("BSC example") {
  const TestMatrix a = example1();
  const PosteriorResult r =
      run(build_complete(a), PriorModel(0.2), NoiseModel::bsc(0.1), TestVector{1, 1, 0});
  const Eigen::ArrayX2d p = posteriors(r);
  for (Index l = 0; l < 6; ++l) {
    CHECK(p(l, 1) == doctest::Approx(kBscPosterior[l]).epsilon(1e-12));
  }
  CHECK(std::exp(r.log_evidence) == doctest::Approx(kBscEvidence).epsilon(1e-12));
  CHECK(r.zero_forced.empty());
}

TEST_CASE("branch metric") {
  const PriorModel prior(0.1);
  CHECK(gamma(std::uint8_t{0}, prior) == doctest::Approx(0.9));
  CHECK(gamma(std::uint8_t{1}, prior) == doctest::Approx(0.1));
}

TEST_CASE("posteriors from log ratios") {
  PosteriorResult r;
  r.lapp.resize(4);
  r.lapp << std::log(9.0), 0.0, kInf, -kInf;
  const Eigen::ArrayX2d p = posteriors(r);
  CHECK(p(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p(1, 0) == 0.5);
  CHECK(p(2, 0) == 1.0);
  CHECK(p(2, 1) == 0.0);
  CHECK(p(3, 0) == 0.0);
  CHECK(p(3, 1) == 1.0);
}

TEST_CASE("an untested element keeps its prior log odds") {
  const TestMatrix a = TestMatrix::from_rows({{1, 0, 1}, {1, 0, 0}});
  const PriorModel prior(0.07);
  const double expected = std::log(0.93 / 0.07);
  for (const TestVector& t : {TestVector{1, 1}, TestVector{1, 0}, TestVector{0, 0}}) {
    const PosteriorResult r = run(build_complete(a), prior, NoiseModel::bsc(0.1), t);
    CHECK(r.lapp(1) == doctest::Approx(expected).epsilon(1e-12));
  }
  const PosteriorResult noiseless =
      run(build_complete(a), prior, NoiseModel::noiseless(), TestVector{1, 1});
  CHECK(noiseless.lapp(1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("identical columns have identical log ratios; permuting columns permutes them") {
  CounterRng rng(21, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 2 + Index(rng() % 4);
    const Index n = 3 + Index(rng() % 7);
    TestMatrix base = gtrellis::testing::random_matrix(rng, m, n);
    BitMatrix entries = base.entries();
    entries.col(n - 1) = entries.col(0);
    const TestMatrix a(entries);
    const DefectivityVector x = gtrellis::testing::random_vector(rng, n, 0.3);
    const TestVector t = compute_syndrome(x, a);
    const PriorModel prior(0.15);
    const NoiseModel noise = NoiseModel::bsc(0.05);
    const PosteriorResult r = run(build_complete(a), prior, noise, t);
    REQUIRE(gtrellis::testing::same_extended(r.lapp(0), r.lapp(n - 1), 1e-12));

    // Reverse the column order.
    BitMatrix reversed = entries.rowwise().reverse();
    const PosteriorResult rr = run(build_complete(TestMatrix(reversed)), prior, noise, t);
    for (Index l = 0; l < n; ++l) {
      REQUIRE(gtrellis::testing::same_extended(r.lapp(l), rr.lapp(n - 1 - l), 1e-11));
    }
    REQUIRE(r.log_evidence == doctest::Approx(rr.log_evidence).epsilon(1e-12));
  }
}

TEST_CASE("forward-backward agrees with exhaustive enumeration") {
  CounterRng rng(22, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 150; ++trial) {
    const Index m = 1 + Index(rng() % 6);
    const Index n = 1 + Index(rng() % 12);
    const TestMatrix a = gtrellis::testing::random_matrix(rng, m, n);
    const PriorModel prior(trial % 2 ? 0.05 : 0.3);
    const NoiseModel noise = trial % 3 == 0   ? NoiseModel::noiseless()
                             : trial % 3 == 1 ? NoiseModel::bsc(0.05)
                                              : NoiseModel::bsc(0.2);
    DefectivityVector x = gtrellis::testing::random_vector(rng, n, prior.delta());
    TestVector t = compute_syndrome(x, a);
    if (!noise.is_noiseless()) {
      for (Index i = 0; i < m; ++i) t.set(i, t[i] != rng.bernoulli(noise.epsilon()));
    }
    const auto ref = oracle::brute_posteriors(a, t, prior, noise);
    const PosteriorResult r = run(build_complete(a), prior, noise, t);
    const Eigen::ArrayX2d p = posteriors(r);
    for (Index l = 0; l < n; ++l) {
      worst = std::max(worst, gtrellis::testing::relative_deviation(p(l, 1), ref.posterior_defective(l)));
      worst = std::max(worst, gtrellis::testing::relative_deviation(p(l, 0), 1.0 - ref.posterior_defective(l)));
    }
    REQUIRE(std::exp(r.log_evidence) == doctest::Approx(ref.evidence).epsilon(1e-12));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("section evidence is constant across sections") {
  CounterRng rng(23, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const TestMatrix a = gtrellis::testing::random_matrix(rng, 2 + Index(rng() % 5), 4 + Index(rng() % 9));
    const PriorModel prior(0.1);
    const DefectivityVector x = gtrellis::testing::random_vector(rng, a.cols(), 0.1);
    const TestVector t = compute_syndrome(x, a);
    MetricTable<double> metrics;
    const Trellis tr = build_reduced(a, t);
    const PosteriorResult r = run(tr, prior, NoiseModel::noiseless(), t, &metrics);
    const Eigen::VectorXd per_section = section_log_evidence(tr, prior, metrics);
    for (Index l = 0; l < per_section.size(); ++l) {
      REQUIRE(per_section(l) == doctest::Approx(r.log_evidence).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalized forward metrics sum to one; the complete trellis divides out nothing") {
  CounterRng rng(24, 0);
  const TestMatrix a = gtrellis::testing::random_matrix(rng, 5, 10);
  MetricTable<double> metrics;
  run(build_complete(a), PriorModel(0.2), NoiseModel::bsc(0.1), TestVector{1, 0, 1, 1, 0},
      &metrics);
  for (Index d = 0; d <= 10; ++d) {
    CHECK(metrics.alpha[std::size_t(d)].sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(metrics.beta[std::size_t(d)].sum() == doctest::Approx(1.0).epsilon(1e-14));
    // Every path survives, so the forward mass stays 1 without rescaling.
    CHECK(metrics.alpha_scale(d) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("scaling the likelihood leaves the log ratios unchanged") {
  const TestMatrix a = example1();
  const PriorModel prior(0.2);
  const TestVector t{1, 1, 0};
  const NoiseModel bsc = NoiseModel::bsc(0.1);
  const NoiseModel scaled = NoiseModel::generic(
      [&](const TestVector& tv, const Syndrome& s) { return 1e-200 * bsc.likelihood(tv, s); },
      "scaled-bsc");
  const PosteriorResult r = run(build_complete(a), prior, bsc, t);
  const PosteriorResult rs = run(build_complete(a), prior, scaled, t);
  for (Index l = 0; l < 6; ++l) CHECK(rs.lapp(l) == doctest::Approx(r.lapp(l)).epsilon(1e-12));
  CHECK(rs.log_evidence - r.log_evidence == doctest::Approx(std::log(1e-200)).epsilon(1e-12));
}

TEST_CASE("BSC(0) on the complete trellis reproduces the noiseless result") {
  const TestMatrix a = example1();
  const TestVector t{1, 0, 1};
  const Trellis tr = build_complete(a);
  const PosteriorResult r0 = run(tr, PriorModel(0.1), NoiseModel::bsc(0.0), t);
  const PosteriorResult rn = run(tr, PriorModel(0.1), NoiseModel::noiseless(), t);
  for (Index l = 0; l < 6; ++l) CHECK(r0.lapp(l) == rn.lapp(l));
  CHECK(r0.log_evidence == rn.log_evidence);
}

TEST_CASE("long double metrics agree with double") {
  const TestMatrix a = make_matrix({Hypergraph{7, 3}, 0});
  CounterRng rng(25, 0);
  const DefectivityVector x = gtrellis::testing::random_vector(rng, a.cols(), 0.05);
  const TestVector t = compute_syndrome(x, a);
  const Trellis tr = build_complete(a);
  const PosteriorResult rd = run<double>(tr, PriorModel(0.05), NoiseModel::bsc(0.02), t);
  const PosteriorResult rl = run<long double>(tr, PriorModel(0.05), NoiseModel::bsc(0.02), t);
  for (Index l = 0; l < a.cols(); ++l) {
    CHECK(gtrellis::testing::same_extended(rd.lapp(l), rl.lapp(l), 1e-10));
  }
}

TEST_CASE("input validation") {
  const TestMatrix a = example1();
  const Trellis complete = build_complete(a);
  const PriorModel prior(0.1);
  CHECK_THROWS_AS(run(complete, prior, NoiseModel::noiseless(), TestVector{1, 0}), DimensionError);
  // Noisy models need every final state.
  CHECK_THROWS_AS(run(build_reduced(a, TestVector{1, 0, 1}), prior, NoiseModel::bsc(0.1),
                      TestVector{1, 0, 1}),
                  DomainError);
  CHECK_THROWS_AS(run(build_reduced(a, TestVector{1, 0, 1}), prior, NoiseModel::noiseless(),
                      TestVector{1, 1, 1}),
                  DomainError);
  const TestMatrix b = TestMatrix::from_rows({{1, 1}, {1, 1}});
  CHECK_THROWS_AS(run(build_complete(b), prior, NoiseModel::noiseless(), TestVector{1, 0}),
                  NotASyndromeError);
}
