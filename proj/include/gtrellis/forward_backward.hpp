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
 * @file forward_backward.hpp
 * @brief Per-element a-posteriori log ratios on a syndrome trellis.
 *
 * The forward metric starts as the indicator of state 0 at depth 0 and the
 * backward metric as Q(t | s) over the final states (the indicator of the
 * observed syndrome in the noiseless case). Both recursions sum over edges,
 * parallel edges included, with branch metric 1 - delta on 0-labeled edges
 * and delta on 1-labeled edges. Section l then yields
 *
 *   L_l = log sum_{label 0} alpha gamma beta - log sum_{label 1} alpha gamma beta
 *
 * Metrics are kept in the linear domain and renormalized to unit sum at every
 * depth; the logarithms of the normalization factors are accumulated so the
 * evidence Pr{T = t} can be reported in the log domain.
 */

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gtrellis/core.hpp"
#include "gtrellis/trellis.hpp"

namespace gtrellis {

/// Branch metric of an edge: 1 - delta for label 0, delta for label 1.
inline double gamma(std::uint8_t label, const PriorModel& prior) {
  return label ? prior.delta() : 1.0 - prior.delta();
}
inline double gamma(const Edge& edge, const PriorModel& prior) { return gamma(edge.label, prior); }

/// Normalized forward/backward metrics of one run.
///
/// The unnormalized metrics are alpha[d] * exp(alpha_log_scale[d]) and
/// beta[d] * exp(beta_log_scale[d]). alpha_scale[d] and beta_scale[d] are the
/// factors divided out at depth d.
template <class Scalar = double>
struct MetricTable {
  using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  std::vector<Vector> alpha;
  std::vector<Vector> beta;
  Eigen::ArrayXd alpha_scale;
  Eigen::ArrayXd beta_scale;
  Eigen::ArrayXd alpha_log_scale;
  Eigen::ArrayXd beta_log_scale;
};

struct PosteriorResult {
  /// log Pr{X_l = 0 | t} - log Pr{X_l = 1 | t}, per element of the population;
  /// +inf for elements that are certainly clear, -inf for certain defectives.
  Eigen::VectorXd lapp;
  /// log Pr{T = t}.
  double log_evidence = 0.0;
  /// Elements with posterior defectivity exactly zero.
  std::vector<Index> zero_forced;
};

/// Runs the forward-backward recursions.
///
/// Noiseless models accept complete, expurgated and reduced trellises; other
/// models require a complete trellis. `t` is always the full observed test
/// vector. When `metrics` is given, the normalized metrics are stored there
/// (and its buffers reused).
template <class Scalar = double>
PosteriorResult run(const Trellis& trellis, const PriorModel& prior, const NoiseModel& noise,
                    const TestVector& t, MetricTable<Scalar>* metrics = nullptr);

/// Section-wise evidence log sum_{all edges of section l} alpha gamma beta,
/// rescaled. Every entry equals PosteriorResult::log_evidence up to rounding.
template <class Scalar = double>
Eigen::VectorXd section_log_evidence(const Trellis& trellis, const PriorModel& prior,
                                     const MetricTable<Scalar>& metrics);

/// Rows of (Pr{X_l = 0 | t}, Pr{X_l = 1 | t}).
Eigen::ArrayX2d posteriors(const PosteriorResult& result);

namespace detail {

inline double log_ratio(double clear, double defective) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (defective == 0.0) return inf;
  if (clear == 0.0) return -inf;
  return std::log(clear) - std::log(defective);
}

void check_run_inputs(const Trellis& trellis, const NoiseModel& noise, const TestVector& t);

/// Unnormalized backward metric at the last depth.
template <class Scalar>
void final_backward(const Trellis& trellis, const NoiseModel& noise, const TestVector& t,
                    Eigen::Array<Scalar, Eigen::Dynamic, 1>& beta) {
  const auto& last = trellis.states(trellis.length());
  beta.setZero(static_cast<Index>(last.size()));
  if (trellis.kind() != TrellisKind::Complete) {
    for (std::size_t p = 0; p < last.size(); ++p) {
      if (last[p] == *trellis.final_state()) beta(static_cast<Index>(p)) = Scalar(1);
    }
    return;
  }
  const StateMask observed = decimal_index(t);
  const int m = trellis.tests();
  for (std::size_t p = 0; p < last.size(); ++p) {
    beta(static_cast<Index>(p)) = static_cast<Scalar>(noise.likelihood(observed, last[p], m));
  }
}

inline double zero_covered_log_mass(const Trellis& trellis, const PriorModel& prior) {
  if (!trellis.reduced()) return 0.0;
  return static_cast<double>(trellis.reduced()->zero_covered_elements.size()) *
         std::log1p(-prior.delta());
}

}  // namespace detail

template <class Scalar>
PosteriorResult run(const Trellis& trellis, const PriorModel& prior, const NoiseModel& noise,
                    const TestVector& t, MetricTable<Scalar>* metrics) {
  using Vector = typename MetricTable<Scalar>::Vector;
  detail::check_run_inputs(trellis, noise, t);

  MetricTable<Scalar> local;
  MetricTable<Scalar>& table = metrics ? *metrics : local;
  const Index n = trellis.length();
  const auto depths = static_cast<std::size_t>(n + 1);
  table.alpha.resize(depths);
  table.beta.resize(depths);
  table.alpha_scale.resize(n + 1);
  table.beta_scale.resize(n + 1);
  table.alpha_log_scale.resize(n + 1);
  table.beta_log_scale.resize(n + 1);

  const Scalar g[2] = {Scalar(1) - Scalar(prior.delta()), Scalar(prior.delta())};

  // Forward.
  table.alpha[0].setZero(static_cast<Index>(trellis.states(0).size()));
  table.alpha[0](0) = Scalar(1);
  table.alpha_scale(0) = 1.0;
  table.alpha_log_scale(0) = 0.0;
  for (Index l = 0; l < n; ++l) {
    const Vector& prev = table.alpha[static_cast<std::size_t>(l)];
    Vector& next = table.alpha[static_cast<std::size_t>(l + 1)];
    next.setZero(static_cast<Index>(trellis.states(l + 1).size()));
    for (const Edge& e : trellis.section(l).edges) next(e.to_pos) += prev(e.from_pos) * g[e.label];
    const Scalar c = next.sum();
    if (!(c > Scalar(0))) throw NotASyndromeError("forward metric vanished");
    next /= c;
    table.alpha_scale(l + 1) = static_cast<double>(c);
    table.alpha_log_scale(l + 1) = table.alpha_log_scale(l) + static_cast<double>(std::log(c));
  }

  // Backward.
  Vector& last = table.beta[static_cast<std::size_t>(n)];
  detail::final_backward(trellis, noise, t, last);
  {
    const Scalar d = last.sum();
    if (!(d > Scalar(0))) {
      throw NotASyndromeError("test vector " + t.to_string() +
                              " has zero likelihood under the " + noise.name() + " model");
    }
    last /= d;
    table.beta_scale(n) = static_cast<double>(d);
    table.beta_log_scale(n) = static_cast<double>(std::log(d));
  }
  for (Index l = n; l-- > 0;) {
    const Vector& next = table.beta[static_cast<std::size_t>(l + 1)];
    Vector& prev = table.beta[static_cast<std::size_t>(l)];
    prev.setZero(static_cast<Index>(trellis.states(l).size()));
    for (const Edge& e : trellis.section(l).edges) prev(e.from_pos) += next(e.to_pos) * g[e.label];
    const Scalar d = prev.sum();
    if (!(d > Scalar(0))) throw NotASyndromeError("backward metric vanished");
    prev /= d;
    table.beta_scale(l) = static_cast<double>(d);
    table.beta_log_scale(l) = table.beta_log_scale(l + 1) + static_cast<double>(std::log(d));
  }

  // Section marginals.
  Eigen::VectorXd section_lapp(n);
  for (Index l = 0; l < n; ++l) {
    const Vector& a = table.alpha[static_cast<std::size_t>(l)];
    const Vector& b = table.beta[static_cast<std::size_t>(l + 1)];
    Scalar mass[2] = {Scalar(0), Scalar(0)};
    for (const Edge& e : trellis.section(l).edges) {
      mass[e.label] += a(e.from_pos) * g[e.label] * b(e.to_pos);
    }
    section_lapp(l) = detail::log_ratio(static_cast<double>(mass[0]), static_cast<double>(mass[1]));
  }

  PosteriorResult result;
  const Scalar final_mass = (table.alpha[depths - 1] * table.beta[depths - 1]).sum();
  result.log_evidence = static_cast<double>(std::log(final_mass)) + table.alpha_log_scale(n) +
                        table.beta_log_scale(n) + detail::zero_covered_log_mass(trellis, prior);

  if (const auto& info = trellis.reduced()) {
    result.lapp.setConstant(info->original_elements, std::numeric_limits<double>::infinity());
    for (Index k = 0; k < n; ++k) {
      result.lapp(info->kept_elements[static_cast<std::size_t>(k)]) = section_lapp(k);
    }
  } else {
    result.lapp = std::move(section_lapp);
  }
  for (Index l = 0; l < result.lapp.size(); ++l) {
    if (result.lapp(l) == std::numeric_limits<double>::infinity()) result.zero_forced.push_back(l);
  }
  return result;
}

template <class Scalar>
Eigen::VectorXd section_log_evidence(const Trellis& trellis, const PriorModel& prior,
                                     const MetricTable<Scalar>& metrics) {
  const Index n = trellis.length();
  const Scalar g[2] = {Scalar(1) - Scalar(prior.delta()), Scalar(prior.delta())};
  const double offset = detail::zero_covered_log_mass(trellis, prior);
  Eigen::VectorXd out(n);
  for (Index l = 0; l < n; ++l) {
    const auto& a = metrics.alpha[static_cast<std::size_t>(l)];
    const auto& b = metrics.beta[static_cast<std::size_t>(l + 1)];
    Scalar mass(0);
    for (const Edge& e : trellis.section(l).edges) mass += a(e.from_pos) * g[e.label] * b(e.to_pos);
    out(l) = static_cast<double>(std::log(mass)) + metrics.alpha_log_scale(l) +
             metrics.beta_log_scale(l + 1) + offset;
  }
  return out;
}

extern template PosteriorResult run<double>(const Trellis&, const PriorModel&, const NoiseModel&,
                                            const TestVector&, MetricTable<double>*);
extern template PosteriorResult run<long double>(const Trellis&, const PriorModel&,
                                                 const NoiseModel&, const TestVector&,
                                                 MetricTable<long double>*);

}  // namespace gtrellis
