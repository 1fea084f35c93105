// Copyright 2026 The erasure-converse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Monte Carlo over Haar-random code states phi on A (x) B^n.
//
// Trial t draws its state from child_seed(seed, t), so a trial's result does
// not depend on how trials are scheduled across threads. Aggregates are
// always accumulated in trial order.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "esc/bounds.hpp"
#include "esc/erasure.hpp"
#include "esc/oracle.hpp"
#include "esc/qcore.hpp"

namespace esc {

struct EnsembleConfig {
  EnsembleConfig(CodeParams code_params, ErasureParams channel);

  std::size_t trials = 1;
  std::uint64_t seed = 0;
  CodeParams code;
  ErasureParams params;
  std::vector<double> alphas{2.0};
  bool with_oracle = false;
  /// Use min over alphas of the per-code bound in place of the oracle
  /// fidelity in fraction audits.
  bool bound_proxy = false;
  double tol = 1e-6;
  std::vector<double> thresholds;
  ConstantEstimates consts;
  /// 0 means one thread per hardware core.
  std::size_t threads = 1;
  bool keep_records = true;

  /// Throws ArgumentError on invalid fields and ResourceError when the
  /// oracle is requested outside its guards.
  void validate() const;
};

struct SampleStats {
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(trials)
  double min = 0.0;
  double max = 0.0;
};

/// Trial-ordered summary; throws ArgumentError on an empty input.
SampleStats summarize(std::span<const double> values);

struct AlphaSummary {
  double alpha = 0.0;
  SampleStats bound;
  double expected_bound = 1.0;       // with C = cfg.consts.big_c
  double expected_bound_c_hat = 1.0; // with C = c_hat
  /// mean <= expected_bound_c_hat + 3 stderr
  bool dominated = true;
};

struct ThresholdFraction {
  double alpha = 0.0;
  double threshold = 0.0;
  double fraction = 0.0;  // codes with bound > threshold
};

struct PatternEnvelope {
  std::uint32_t bits = 0;
  std::size_t erased = 0;
  double mean_lambda_max = 0.0;
  std::vector<double> mean_purity;  // per alpha, E Tr{phi_{A^{i}}^a}
  std::vector<double> envelope;     // per alpha, (c_hat d^{-|i|})^{a-1}
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed_child = 0;
  std::vector<double> bounds;  // per alpha
  std::optional<double> oracle_fidelity;
  double oracle_gap = 0.0;
};

struct EnsembleReport {
  std::size_t trials = 0;
  std::vector<AlphaSummary> alphas;
  std::vector<ThresholdFraction> fractions;
  std::optional<SampleStats> oracle;
  double oracle_max_gap = 0.0;
  /// max over patterns of d^{|i|} E lambda_max(phi_{A^{i}}); >= 1.
  double c_hat = 1.0;
  std::vector<PatternEnvelope> patterns;
  std::vector<TrialRecord> records;
};

/// Layout [M, d, ..., d] of a code state.
SubsystemLayout code_layout(const CodeParams& code, const ErasureParams& params);

EnsembleReport run_code_ensemble(const EnsembleConfig& cfg);

/// d_R times the empirical mean of lambda_max of the d_R marginal of Haar
/// states on d_R (x) d_S.
double estimate_opnorm_constant(std::size_t d_r, std::size_t d_s, std::size_t trials, std::uint64_t seed);

struct FractionRow {
  double threshold = 0.0;
  double fraction = 0.0;        // codes with fidelity >= threshold
  double fraction_stderr = 0.0; // binomial
  double empirical_mean = 0.0;
  double markov_empirical = 1.0;  // min(1, empirical_mean / threshold)
  double markov_analytic = 1.0;   // min(1, G / threshold)
  double levy = 1.0;              // levy_tail at delta = threshold - G
  bool consistent = true;         // fraction <= mean / threshold + 3 stderr
};

struct FractionAudit {
  bool bound_proxy = false;
  double alpha = 0.0;            // alpha used for G
  double expected_bound = 1.0;   // G
  MarkovTail markov;             // the sqrt(G) statement
  std::vector<FractionRow> rows;
  EnsembleReport ensemble;
};

/// Requires cfg.with_oracle or cfg.bound_proxy. Thresholds must lie in (0,1].
FractionAudit fraction_audit(const EnsembleConfig& cfg, std::span<const double> thresholds);

struct LipschitzAudit {
  std::size_t pairs = 0;
  std::size_t used = 0;  // pairs with ||phi1 - phi2|| >= 1e-12
  double max_ratio = 0.0;
};

/// Fidelity of a code through N_p^{(x)n} followed by one fixed random decoder.
double fixed_decoder_fidelity(const PureState& psi, const ErasureParams& params, const ChoiOperator& decoder);

/// max |F(phi1) - F(phi2)| / ||phi1 - phi2||_2 over `pairs` pairs. Even pairs
/// are independent Haar states, odd pairs are perturbations of a Haar state
/// at geometrically shrinking scale. Guard: M (d+1)^n <= 256.
LipschitzAudit lipschitz_audit(std::size_t pairs, const CodeParams& code, const ErasureParams& params,
                               std::uint64_t decoder_seed, std::uint64_t seed);

struct AdditivityRow {
  std::size_t uses = 0;
  std::size_t m = 0;
  double max_per_use = 0.0;
  double mean_per_use = 0.0;
};

/// (1/n) renyi_coherent_info_direct over Haar codes with M = d^n for
/// n = 1 and n = 2. Reported as data only.
std::vector<AdditivityRow> additivity_experiment(const ErasureParams& params, double alpha,
                                                 std::size_t samples, std::uint64_t seed);

}  // namespace esc
