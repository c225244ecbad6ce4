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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gtrellis/core.hpp"
#include "gtrellis/decision.hpp"
#include "gtrellis/forward_backward.hpp"
#include "gtrellis/matrices.hpp"
#include "gtrellis/oracle.hpp"
#include "gtrellis/rng.hpp"
#include "gtrellis/simulation.hpp"
#include "gtrellis/trellis.hpp"

namespace gtrellis::cli {

namespace {

/// Options shared by subcommands that need a matrix.
struct MatrixOptions {
  std::string file;
  std::string kind;
  int order = 9;
  int uniformity = 3;
  Index rows = 0;
  Index cols = 0;
  double density = 0.5;
  std::uint64_t seed = 0;

  void attach(CLI::App& cmd, bool require_kind) {
    auto* matrix = cmd.add_option("--matrix", file, "Matrix file (`m n` header, 0/1 rows)");
    auto* kind_opt = cmd.add_option("--kind", kind, "Generated matrix kind")
                         ->check(CLI::IsMember({"hypergraph", "ebch", "bernoulli"}));
    if (require_kind) {
      kind_opt->required();
    } else {
      matrix->excludes(kind_opt);
    }
    cmd.add_option("--order,-v", order, "Hypergraph order (vertices / tests)");
    cmd.add_option("--uniformity,-k", uniformity, "Hypergraph uniformity (column weight)");
    cmd.add_option("--rows", rows, "Bernoulli matrix tests m");
    cmd.add_option("--cols", cols, "Bernoulli matrix population n");
    cmd.add_option("--density", density, "Bernoulli matrix density");
    cmd.add_option("--matrix-seed", seed, "Bernoulli matrix seed");
  }

  MatrixSpec spec() const {
    MatrixSpec out;
    out.seed = seed;
    if (!file.empty()) {
      out.kind = FromFile{file};
    } else if (kind == "hypergraph") {
      out.kind = Hypergraph{order, uniformity};
    } else if (kind == "ebch") {
      out.kind = ExtendedBch6457{};
    } else if (kind == "bernoulli") {
      if (rows < 1 || cols < 1) throw DomainError("--rows and --cols are required for --kind bernoulli");
      out.kind = Bernoulli{rows, cols, density};
    } else {
      throw DomainError("either --matrix or --kind is required");
    }
    return out;
  }
};

struct ModelOptions {
  double delta = 0.0;
  std::optional<double> eps;
  bool noiseless = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--delta", delta, "Prevalence delta in (0, 1)")->required();
    auto* eps_opt = cmd.add_option("--eps", eps, "BSC crossover probability in [0, 0.5)");
    cmd.add_flag("--noiseless", noiseless, "Noiseless tests (default)")->excludes(eps_opt);
  }

  PriorModel prior() const { return PriorModel(delta); }
  NoiseModel noise() const { return eps ? NoiseModel::bsc(*eps) : NoiseModel::noiseless(); }
};

TiePolicy parse_tie(const std::string& text) {
  return text == "clear" ? TiePolicy::Clear : TiePolicy::Defective;
}

double parse_real(const std::string& text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || std::isnan(value)) {
    throw ParseError("invalid threshold '" + text + "'");
  }
  return value;
}

TestVector load_test_vector(const std::string& bits, const std::string& path) {
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open test vector file '" + path + "'");
    std::string text;
    char c = 0;
    while (in.get(c)) {
      if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
    }
    return TestVector::from_string(text);
  }
  return TestVector::from_string(bits);
}

void write_header(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
}

int cmd_app(const MatrixOptions& mopts, const ModelOptions& model, const std::string& bits,
            const std::string& t_file, const std::string& lambda_text,
            const std::string& lambda_prime_text, std::string trellis_kind, const std::string& tie,
            std::ostream& out) {
  const MatrixSpec spec = mopts.spec();
  const TestMatrix a = make_matrix(spec);
  const PriorModel prior = model.prior();
  const NoiseModel noise = model.noise();
  const TestVector t = load_test_vector(bits, t_file);
  if (t.size() != a.rows()) {
    throw DimensionError("--t has " + std::to_string(t.size()) + " bits, matrix has " +
                         std::to_string(a.rows()) + " tests");
  }
  const ThresholdRule rule = lambda_prime_text.empty()
                                 ? ThresholdRule::app(parse_real(lambda_text), parse_tie(tie))
                                 : ThresholdRule::llr(parse_real(lambda_prime_text), prior, parse_tie(tie));

  if (trellis_kind.empty()) trellis_kind = noise.is_noiseless() ? "reduced" : "complete";
  if (!noise.is_noiseless() && trellis_kind != "complete") {
    throw DomainError("--trellis " + trellis_kind + " needs the noiseless model");
  }
  PosteriorResult result;
  if (trellis_kind == "reduced") {
    result = run(build_reduced(a, t), prior, noise, t);
  } else if (trellis_kind == "expurgated") {
    result = run(expurgate(build_complete(a), t), prior, noise, t);
  } else {
    result = run(build_complete(a), prior, noise, t);
  }
  const Eigen::ArrayX2d post = posteriors(result);
  const DefectivityVector estimate = decide(result.lapp, rule);

  write_header(out, {{"command", "app"},
                     {"matrix", describe(spec)},
                     {"delta", format_double(prior.delta())},
                     {"noise", noise.name()},
                     {"epsilon", format_double(noise.epsilon())},
                     {"t", t.to_string()},
                     {"lambda", format_double(rule.lambda())},
                     {"tie", tie},
                     {"trellis", trellis_kind},
                     {"log_evidence", format_double(result.log_evidence)}});
  out << "element,lapp,p_clear,p_defective,decision\n";
  for (Index l = 0; l < result.lapp.size(); ++l) {
    out << (l + 1) << ',' << format_double(result.lapp(l)) << ',' << format_double(post(l, 0)) << ','
        << format_double(post(l, 1)) << ',' << (estimate[l] ? 1 : 0) << '\n';
  }
  return kOk;
}

int cmd_roc(const MatrixOptions& mopts, const ModelOptions& model, std::uint64_t trials,
            std::uint64_t seed, unsigned workers, const std::string& lambdas_text,
            const std::string& trellis_kind, const std::string& tie, const std::string& out_path,
            std::ostream& out) {
  const MatrixSpec spec = mopts.spec();
  const TestMatrix a = make_matrix(spec);
  const PriorModel prior = model.prior();
  const NoiseModel noise = model.noise();
  if (trials < 1) throw DomainError("--trials must be at least 1");

  std::vector<double> lambdas;
  if (lambdas_text.empty()) {
    lambdas = default_lambda_grid(prior);
  } else {
    std::stringstream list(lambdas_text);
    std::string item;
    while (std::getline(list, item, ',')) lambdas.push_back(parse_real(item));
    if (lambdas.empty()) throw DomainError("--lambdas must list at least one threshold");
  }

  SimulationOptions options;
  options.trials = trials;
  options.seed = seed;
  options.workers = workers;
  options.reduced_trellis = trellis_kind != "complete";
  RocCurve curve = sweep_roc(a, prior, noise, lambdas, options, parse_tie(tie));
  curve.metadata.insert(curve.metadata.begin(),
                        {{"command", "roc"},
                         {"matrix", describe(spec)},
                         {"lambdas", lambdas_text.empty() ? "default" : lambdas_text}});

  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + out_path + "' for writing");
  write_roc_csv(file, curve);
  file.close();
  if (!file) throw IoError("failed writing ROC CSV to '" + out_path + "'");
  out << "wrote " << curve.points.size() << " operating points to " << out_path << '\n';
  return kOk;
}

int cmd_genmat(const MatrixOptions& mopts, const std::string& out_path, std::ostream& out) {
  const MatrixSpec spec = mopts.spec();
  const TestMatrix a = make_matrix(spec);
  write_matrix(out_path, a);
  out << "wrote " << describe(spec) << " (" << a.rows() << " x " << a.cols() << ") to " << out_path
      << '\n';
  return kOk;
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_oracle_check(int cases, int max_m, int max_n, std::uint64_t seed, double tolerance,
                     double perturb_gamma, std::ostream& out) {
  if (cases < 1) throw DomainError("--cases must be at least 1");
  if (max_m < 1 || max_m > 16) throw ResourceError("--max-m must lie in [1, 16]");
  if (max_n < 1 || max_n > oracle::kMaxOracleElements) {
    throw ResourceError("--max-n must lie in [1, " + std::to_string(oracle::kMaxOracleElements) +
                        "] (the oracle enumerates 2^n vectors)");
  }
  const double deltas[] = {0.05, 0.3};
  const NoiseModel noises[] = {NoiseModel::noiseless(), NoiseModel::bsc(0.05), NoiseModel::bsc(0.2)};

  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    CounterRng rng(seed, static_cast<std::uint64_t>(c));
    const Index m = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_m));
    const Index n = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_n));
    BitMatrix entries(m, n);
    for (Index i = 0; i < m; ++i) {
      for (Index l = 0; l < n; ++l) entries(i, l) = rng.bernoulli(0.45) ? 1 : 0;
    }
    const TestMatrix a(std::move(entries));
    const PriorModel prior(deltas[c % 2]);
    const NoiseModel& noise = noises[(c / 2) % 3];

    DefectivityVector x(n);
    for (Index l = 0; l < n; ++l) x.set(l, rng.bernoulli(prior.delta()));
    TestVector t = compute_syndrome(x, a);
    if (!noise.is_noiseless()) {
      for (Index i = 0; i < m; ++i) {
        if (rng.bernoulli(noise.epsilon())) t.set(i, !t[i]);
      }
    }

    const PriorModel engine_prior(prior.delta() * (1.0 + perturb_gamma));
    const PosteriorResult engine = run(build_complete(a), engine_prior, noise, t);
    const Eigen::ArrayX2d post = posteriors(engine);
    const oracle::OracleResult reference = oracle::brute_posteriors(a, t, prior, noise);
    for (Index l = 0; l < n; ++l) {
      worst = std::max(worst, relative_deviation(post(l, 1), reference.posterior_defective(l)));
      worst = std::max(worst, relative_deviation(post(l, 0), 1.0 - reference.posterior_defective(l)));
    }
  }
  const bool pass = worst <= tolerance;
  out << "cases=" << cases << " max_m=" << max_m << " max_n=" << max_n << " seed=" << seed
      << " max_rel_dev=" << format_double(worst) << " tolerance=" << format_double(tolerance)
      << " status=" << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact a-posteriori defectivity probabilities for non-adaptive group testing"};
  app.require_subcommand(1);

  // app
  auto* app_cmd = app.add_subcommand("app", "Per-element log APP ratios for one test vector");
  MatrixOptions app_matrix;
  ModelOptions app_model;
  std::string bits;
  std::string t_file;
  std::string lambda_text = "0";
  std::string lambda_prime_text;
  std::string app_trellis;
  std::string tie = "defective";
  app_matrix.attach(*app_cmd, false);
  app_model.attach(*app_cmd);
  auto* t_opt = app_cmd->add_option("--t", bits, "Observed test vector as a bit string, e.g. 101");
  auto* tf_opt = app_cmd->add_option("--t-file", t_file, "File holding the test vector bits");
  t_opt->excludes(tf_opt);
  auto* lambda_opt = app_cmd->add_option("--lambda", lambda_text, "Threshold on log APP ratios");
  app_cmd->add_option("--lambda-prime", lambda_prime_text, "Threshold in LLR form")->excludes(lambda_opt);
  app_cmd->add_option("--trellis", app_trellis, "complete | expurgated | reduced")
      ->check(CLI::IsMember({"complete", "expurgated", "reduced"}));
  app_cmd->add_option("--tie", tie, "Decision at equality: defective | clear")
      ->check(CLI::IsMember({"defective", "clear"}));

  // roc
  auto* roc_cmd = app.add_subcommand("roc", "Monte Carlo ROC sweep written as CSV");
  MatrixOptions roc_matrix;
  ModelOptions roc_model;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string lambdas_text;
  std::string roc_trellis = "reduced";
  std::string roc_tie = "defective";
  std::string roc_out;
  roc_matrix.attach(*roc_cmd, false);
  roc_model.attach(*roc_cmd);
  roc_cmd->add_option("--trials", trials, "Monte Carlo trials");
  roc_cmd->add_option("--seed", seed, "RNG seed");
  roc_cmd->add_option("--workers", workers, "Worker threads (default: $GTRELLIS_WORKERS or all cores)");
  roc_cmd->add_option("--lambdas", lambdas_text, "Comma-separated APP-domain thresholds");
  roc_cmd->add_option("--trellis", roc_trellis, "Noiseless engine: reduced | complete")
      ->check(CLI::IsMember({"complete", "reduced"}));
  roc_cmd->add_option("--tie", roc_tie, "Decision at equality: defective | clear")
      ->check(CLI::IsMember({"defective", "clear"}));
  roc_cmd->add_option("--out,-o", roc_out, "Output CSV path")->required();

  // genmat
  auto* gen_cmd = app.add_subcommand("genmat", "Generate a test matrix file");
  MatrixOptions gen_matrix;
  std::string gen_out;
  gen_matrix.attach(*gen_cmd, true);
  gen_cmd->add_option("--seed", gen_matrix.seed, "Seed for --kind bernoulli");
  gen_cmd->add_option("--out,-o", gen_out, "Output path")->required();

  // oracle-check
  auto* check_cmd = app.add_subcommand("oracle-check", "Randomized trellis-vs-enumeration sweep");
  int cases = 200;
  int max_m = 6;
  int max_n = 12;
  std::uint64_t check_seed = 1;
  double tolerance = 1e-9;
  double perturb_gamma = 0.0;
  check_cmd->add_option("--cases", cases, "Number of random instances");
  check_cmd->add_option("--max-m", max_m, "Largest number of tests");
  check_cmd->add_option("--max-n", max_n, "Largest population");
  check_cmd->add_option("--seed", check_seed, "RNG seed");
  check_cmd->add_option("--tolerance", tolerance, "Maximum relative deviation");
  check_cmd->add_option("--perturb-gamma", perturb_gamma,
                        "Relative error injected into the engine's branch metric (negative control)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*app_cmd) {
      if (bits.empty() && t_file.empty()) throw DomainError("--t or --t-file is required");
      return cmd_app(app_matrix, app_model, bits, t_file, lambda_text, lambda_prime_text, app_trellis,
                     tie, out);
    }
    if (*roc_cmd) {
      return cmd_roc(roc_matrix, roc_model, trials, seed, workers, lambdas_text, roc_trellis, roc_tie,
                     roc_out, out);
    }
    if (*gen_cmd) return cmd_genmat(gen_matrix, gen_out, out);
    if (*check_cmd) {
      return cmd_oracle_check(cases, max_m, max_n, check_seed, tolerance, perturb_gamma, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace gtrellis::cli
