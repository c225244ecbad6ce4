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

#include "gtrellis/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "gtrellis/rng.hpp"
#include "gtrellis/trellis.hpp"

namespace gtrellis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZ95 = 1.96;

std::optional<double> ratio(std::uint64_t events, std::uint64_t trials) {
  if (trials == 0) return std::nullopt;
  return static_cast<double>(events) / static_cast<double>(trials);
}

std::optional<double> half_width(std::uint64_t events, std::uint64_t trials, std::uint64_t events_sq,
                                 std::uint64_t cross, std::uint64_t trials_sq) {
  const auto p = ratio(events, trials);
  if (!p) return std::nullopt;
  // Linearized variance of sum(e) / sum(c): sum (e - p c)^2 / (sum c)^2.
  const double residual = static_cast<double>(events_sq) - 2.0 * *p * static_cast<double>(cross) +
                          *p * *p * static_cast<double>(trials_sq);
  const double total = static_cast<double>(trials);
  return kZ95 * std::sqrt(std::max(0.0, residual)) / total;
}

/// BSC(0) carries no noise; it is simulated exactly like the noiseless model.
bool behaves_noiseless(const NoiseModel& noise) {
  return noise.is_noiseless() || (noise.kind() == NoiseModel::Kind::Bsc && noise.epsilon() == 0.0);
}

std::vector<OperatingPoint> count_points(const TestMatrix& a, const PriorModel& prior,
                                         const NoiseModel& noise, const std::vector<double>& lambdas,
                                         TiePolicy tie, const SimulationOptions& options) {
  const unsigned workers = resolve_workers(options.workers);
  std::vector<std::vector<OperatingPoint>> per_worker(workers, std::vector<OperatingPoint>(lambdas.size()));

  simulate(a, prior, noise, options, [&](unsigned worker, const TrialRecord& trial) {
    auto& points = per_worker[worker];
    const Index n = trial.x.size();
    const auto defective = static_cast<std::uint64_t>(trial.x.weight());
    const auto clear = static_cast<std::uint64_t>(n) - defective;
    const Eigen::VectorXd& lapp = trial.posterior.lapp;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      std::uint64_t fa = 0;
      std::uint64_t md = 0;
      for (Index l = 0; l < n; ++l) {
        const bool flagged = flags_defective(lapp(l), lambdas[j], tie);
        if (trial.x[l]) {
          md += flagged ? 0 : 1;
        } else {
          fa += flagged ? 1 : 0;
        }
      }
      OperatingPoint& p = points[j];
      p.fa_events += fa;
      p.fa_trials += clear;
      p.fa_events_sq += fa * fa;
      p.fa_cross += fa * clear;
      p.fa_trials_sq += clear * clear;
      p.md_events += md;
      p.md_trials += defective;
      p.md_events_sq += md * md;
      p.md_cross += md * defective;
      p.md_trials_sq += defective * defective;
    }
  });

  std::vector<OperatingPoint> total(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    total[j].lambda = lambdas[j];
    for (const auto& points : per_worker) {
      total[j].fa_events += points[j].fa_events;
      total[j].fa_trials += points[j].fa_trials;
      total[j].md_events += points[j].md_events;
      total[j].md_trials += points[j].md_trials;
      total[j].fa_events_sq += points[j].fa_events_sq;
      total[j].fa_cross += points[j].fa_cross;
      total[j].fa_trials_sq += points[j].fa_trials_sq;
      total[j].md_events_sq += points[j].md_events_sq;
      total[j].md_cross += points[j].md_cross;
      total[j].md_trials_sq += points[j].md_trials_sq;
    }
  }
  return total;
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::optional<double> OperatingPoint::p_fa() const { return ratio(fa_events, fa_trials); }
std::optional<double> OperatingPoint::p_md() const { return ratio(md_events, md_trials); }
std::optional<double> OperatingPoint::p_fa_half_width() const {
  return half_width(fa_events, fa_trials, fa_events_sq, fa_cross, fa_trials_sq);
}
std::optional<double> OperatingPoint::p_md_half_width() const {
  return half_width(md_events, md_trials, md_events_sq, md_cross, md_trials_sq);
}

void simulate(const TestMatrix& a, const PriorModel& prior, const NoiseModel& noise,
              const SimulationOptions& options, const TrialVisitor& visitor) {
  if (noise.kind() == NoiseModel::Kind::Generic) {
    throw DomainError("Monte Carlo simulation supports the noiseless and BSC models only");
  }
  if (a.rows() > kMaxMaskTests) throw ResourceError("simulation needs at most 64 tests");

  const bool noiseless = behaves_noiseless(noise);
  const bool reduced = noiseless && options.reduced_trellis;
  const NoiseModel engine_noise = noiseless ? NoiseModel::noiseless() : noise;
  std::optional<Trellis> complete;
  if (!reduced) complete = build_complete(a);

  const unsigned workers = resolve_workers(options.workers);
  const Index n = a.cols();
  const Index m = a.rows();

  auto work = [&](unsigned worker, std::uint64_t begin, std::uint64_t end) {
    MetricTable<double> table;
    DefectivityVector x(n);
    TestVector t(m);
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      CounterRng rng(options.seed, trial);
      for (Index l = 0; l < n; ++l) x.set(l, rng.bernoulli(prior.delta()));
      StateMask observed = syndrome_mask(x, a);
      if (!noiseless) {
        for (Index i = 0; i < m; ++i) {
          if (rng.bernoulli(noise.epsilon())) observed ^= StateMask{1} << i;
        }
      }
      for (Index i = 0; i < m; ++i) t.set(i, ((observed >> i) & 1U) != 0);

      const PosteriorResult posterior =
          reduced ? run(build_reduced(a, t), prior, engine_noise, t, &table)
                  : run(*complete, prior, engine_noise, t, &table);
      visitor(worker, TrialRecord{trial, x, t, posterior});
    }
  };

  if (workers == 1 || options.trials < 2) {
    work(0, 0, options.trials);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = options.trials * w / workers;
    const std::uint64_t end = options.trials * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        work(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& thread : threads) thread.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

OperatingPoint estimate_operating_point(const TestMatrix& a, const PriorModel& prior,
                                        const NoiseModel& noise, const ThresholdRule& rule,
                                        const SimulationOptions& options) {
  return count_points(a, prior, noise, {rule.lambda()}, rule.tie(), options).front();
}

RocCurve sweep_roc(const TestMatrix& a, const PriorModel& prior, const NoiseModel& noise,
                   std::vector<double> lambdas, const SimulationOptions& options, TiePolicy tie) {
  if (std::any_of(lambdas.begin(), lambdas.end(), [](double v) { return std::isnan(v); })) {
    throw DomainError("thresholds must not be NaN");
  }
  lambdas.push_back(-kInf);
  lambdas.push_back(kInf);
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  RocCurve curve;
  curve.points = count_points(a, prior, noise, lambdas, tie, options);
  const bool noiseless = behaves_noiseless(noise);
  curve.metadata = {
      {"delta", format_double(prior.delta())},
      {"noise", noise.name()},
      {"epsilon", format_double(noise.epsilon())},
      {"trials", std::to_string(options.trials)},
      {"seed", std::to_string(options.seed)},
      {"tie", tie == TiePolicy::Defective ? "defective" : "clear"},
      {"trellis", noiseless && options.reduced_trellis ? "reduced" : "complete"},
  };
  return curve;
}

std::vector<double> default_lambda_grid(const PriorModel& prior) {
  constexpr int kPoints = 61;
  constexpr double kSpan = 15.0;
  std::vector<double> grid;
  grid.reserve(kPoints + 2);
  grid.push_back(-kInf);
  for (int k = 0; k < kPoints; ++k) {
    const double lambda_prime = -kSpan + 2.0 * kSpan * k / (kPoints - 1);
    grid.push_back(lambda_prime + prior.log_odds());
  }
  grid.push_back(kInf);
  return grid;
}

std::vector<RocPoint> expected_operating_points(const TestMatrix& a, const PriorModel& prior,
                                                const NoiseModel& noise,
                                                const std::vector<double>& lambdas, TiePolicy tie) {
  const Index n = a.cols();
  const int m = static_cast<int>(a.rows());
  if (n > 20 || m > 12) throw ResourceError("exact operating points need n <= 20 and m <= 12");

  const Trellis trellis = build_complete(a);
  std::unordered_map<StateMask, Eigen::VectorXd> lapp_cache;
  auto lapp_for = [&](StateMask t) -> const Eigen::VectorXd& {
    auto it = lapp_cache.find(t);
    if (it == lapp_cache.end()) {
      const TestVector tv = binary_expand(t, m);
      it = lapp_cache.emplace(t, run(trellis, prior, noise, tv).lapp).first;
    }
    return it->second;
  };

  std::vector<double> fa(lambdas.size(), 0.0);
  std::vector<double> md(lambdas.size(), 0.0);
  double clear_mass = 0.0;
  double defective_mass = 0.0;
  const double delta = prior.delta();
  const std::uint64_t vectors = std::uint64_t{1} << n;
  const std::uint64_t outcomes = std::uint64_t{1} << m;
  DefectivityVector x(n);
  for (std::uint64_t code = 0; code < vectors; ++code) {
    for (Index l = 0; l < n; ++l) x.set(l, ((code >> l) & 1U) != 0);
    const Index w = x.weight();
    const double px = std::pow(delta, static_cast<double>(w)) *
                      std::pow(1.0 - delta, static_cast<double>(n - w));
    const StateMask s = syndrome_mask(x, a);
    clear_mass += px * static_cast<double>(n - w);
    defective_mass += px * static_cast<double>(w);
    for (std::uint64_t t = 0; t < outcomes; ++t) {
      const double q = noise.likelihood(t, s, m);
      if (q == 0.0) continue;
      const Eigen::VectorXd& lapp = lapp_for(t);
      for (std::size_t j = 0; j < lambdas.size(); ++j) {
        for (Index l = 0; l < n; ++l) {
          const bool flagged = flags_defective(lapp(l), lambdas[j], tie);
          if (x[l] && !flagged) md[j] += px * q;
          if (!x[l] && flagged) fa[j] += px * q;
        }
      }
    }
  }

  std::vector<RocPoint> out(lambdas.size());
  for (std::size_t j = 0; j < lambdas.size(); ++j) out[j] = {fa[j] / clear_mass, md[j] / defective_mass};
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  for (const auto& [key, value] : curve.metadata) out << "# " << key << '=' << value << '\n';
  out << "lambda,p_fa,p_md,fa_events,fa_trials,md_events,md_trials\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const OperatingPoint& p : curve.points) {
    out << format_double(p.lambda) << ',' << format_double(p.p_fa().value_or(nan)) << ','
        << format_double(p.p_md().value_or(nan)) << ',' << p.fa_events << ',' << p.fa_trials << ','
        << p.md_events << ',' << p.md_trials << '\n';
  }
}

}  // namespace gtrellis
