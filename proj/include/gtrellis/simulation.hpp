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
 * @file simulation.hpp
 * @brief Monte Carlo estimation of false-alarm and miss-detection rates.
 *
 * Trial i draws x with CounterRng(seed, i): n Bernoulli(delta) draws for the
 * elements, then (BSC only) m Bernoulli(epsilon) flips of the syndrome. The
 * draws therefore depend only on (seed, i), and counts are summed over
 * workers, so results do not depend on the worker count.
 *
 * Rates pool events over elements and trials:
 *   P_FA = #{x_l = 0, x-hat_l = 1} / #{x_l = 0}
 *   P_MD = #{x_l = 1, x-hat_l = 0} / #{x_l = 1}
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtrellis/core.hpp"
#include "gtrellis/decision.hpp"
#include "gtrellis/forward_backward.hpp"

namespace gtrellis {

/// Environment variable consulted when no worker count is given.
inline constexpr const char* kWorkersEnv = "GTRELLIS_WORKERS";

struct SimulationOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  /// 0 = from GTRELLIS_WORKERS, else hardware concurrency.
  unsigned workers = 0;
  /// Noiseless trials run on the reduced trellis of each observation;
  /// otherwise on the shared complete trellis.
  bool reduced_trellis = true;
};

unsigned resolve_workers(unsigned requested);

struct OperatingPoint {
  double lambda = 0.0;
  std::uint64_t fa_events = 0;
  std::uint64_t fa_trials = 0;
  std::uint64_t md_events = 0;
  std::uint64_t md_trials = 0;
  /// Sums over trials of e^2, e c and c^2, with e the events and c the
  /// eligible elements of one trial.
  std::uint64_t fa_events_sq = 0;
  std::uint64_t fa_cross = 0;
  std::uint64_t fa_trials_sq = 0;
  std::uint64_t md_events_sq = 0;
  std::uint64_t md_cross = 0;
  std::uint64_t md_trials_sq = 0;

  /// Empty when no clear (resp. defective) element was ever drawn.
  std::optional<double> p_fa() const;
  std::optional<double> p_md() const;
  /// 95% half-widths, 1.96 times the standard error of the pooled ratio with
  /// trials as the sampling unit (elements of one trial share t). With one
  /// element per trial this is the binomial 1.96 sqrt(p (1 - p) / N).
  std::optional<double> p_fa_half_width() const;
  std::optional<double> p_md_half_width() const;
};

struct RocCurve {
  std::vector<OperatingPoint> points;
  /// Key/value pairs written as `# key=value` lines ahead of the CSV header.
  std::vector<std::pair<std::string, std::string>> metadata;
};

struct TrialRecord {
  std::uint64_t index;
  const DefectivityVector& x;
  const TestVector& t;
  const PosteriorResult& posterior;
};

/// Called from worker threads; `worker` < resolve_workers(options.workers).
using TrialVisitor = std::function<void(unsigned worker, const TrialRecord&)>;

/// Draws the trials and runs detection on each. Generic noise models are
/// rejected (they carry no sampler).
void simulate(const TestMatrix& a, const PriorModel& prior, const NoiseModel& noise,
              const SimulationOptions& options, const TrialVisitor& visitor);

OperatingPoint estimate_operating_point(const TestMatrix& a, const PriorModel& prior,
                                        const NoiseModel& noise, const ThresholdRule& rule,
                                        const SimulationOptions& options);

/// One operating point per threshold (APP domain, ascending), all from the
/// same trials. -inf and +inf are added when missing.
RocCurve sweep_roc(const TestMatrix& a, const PriorModel& prior, const NoiseModel& noise,
                   std::vector<double> lambdas, const SimulationOptions& options,
                   TiePolicy tie = TiePolicy::Defective);

/// 61 thresholds uniform in LLR over [-15, 15], mapped to the APP domain,
/// plus -inf and +inf.
std::vector<double> default_lambda_grid(const PriorModel& prior);

/// Exact (P_FA, P_MD) per threshold by enumerating every x (and every t for
/// the BSC), weighted by probability. Small instances only (n <= 20, m <= 12).
std::vector<RocPoint> expected_operating_points(const TestMatrix& a, const PriorModel& prior,
                                                const NoiseModel& noise,
                                                const std::vector<double>& lambdas,
                                                TiePolicy tie = TiePolicy::Defective);

/// `# key=value` metadata, then
/// `lambda,p_fa,p_md,fa_events,fa_trials,md_events,md_trials` rows.
/// Undefined rates are written as `nan`.
void write_roc_csv(std::ostream& out, const RocCurve& curve);

/// Shortest round-trip text for a double; `inf`, `-inf`, `nan` otherwise.
std::string format_double(double value);

}  // namespace gtrellis
