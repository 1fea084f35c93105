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

#include "esc/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <exception>
#include <mutex>
#include <thread>

#include "esc/error.hpp"
#include "esc/numeric.hpp"
#include "esc/renyi.hpp"

namespace esc {
namespace {

constexpr std::size_t kMaxEnsembleStateDim = std::size_t{1} << 22;

// Runs body(t) for t in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_trials(std::size_t count, std::size_t threads, Body&& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t t = next.fetch_add(1);
        if (t >= count) return;
        try {
          body(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_oracle_scope(const CodeParams& code, const ErasureParams& params) {
  if (code.n() > 3) throw ResourceError("oracle_uses", "oracle supports n <= 3");
  if (params.d() != 2) throw ResourceError("oracle_input_dim", "oracle supports d = 2 only");
  if (code.m() > 8) throw ResourceError("oracle_code_dim", "oracle supports M <= 8");
}

std::size_t checked_state_dim(const CodeParams& code, const ErasureParams& params) {
  if (!code.m_exact()) throw ResourceError("ensemble_state_dim", "code dimension 2^{nR} is not representable");
  double dim = static_cast<double>(code.m()) * std::pow(static_cast<double>(params.d()), static_cast<double>(code.n()));
  if (dim > static_cast<double>(kMaxEnsembleStateDim))
    throw ResourceError("ensemble_state_dim", "M d^n exceeds 2^22");
  return static_cast<std::size_t>(dim);
}

}  // namespace

EnsembleConfig::EnsembleConfig(CodeParams code_params, ErasureParams channel)
    : code(code_params), params(channel) {}

void EnsembleConfig::validate() const {
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (alphas.empty()) throw ArgumentError("alphas must be nonempty");
  for (double a : alphas) check_renyi_order(a);
  if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
  for (double t : thresholds)
    if (!(t > 0.0 && t <= 1.0)) throw ArgumentError("thresholds must lie in (0, 1]");
  checked_state_dim(code, params);
  if (code.n() > kMaxBranchUses) throw ResourceError("branch_uses", "pattern sums support at most 20 channel uses");
  if (with_oracle) check_oracle_scope(code, params);
}

SampleStats summarize(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("summarize: no samples");
  CompensatedSum s;
  for (double v : values) s.add(v);
  const double n = static_cast<double>(values.size());
  SampleStats out;
  out.mean = s.value() / n;
  out.min = *std::min_element(values.begin(), values.end());
  out.max = *std::max_element(values.begin(), values.end());
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - out.mean) * (v - out.mean));
    out.stderr_mean = std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

SubsystemLayout code_layout(const CodeParams& code, const ErasureParams& params) {
  std::vector<std::size_t> dims(code.n() + 1, params.d());
  dims[0] = static_cast<std::size_t>(code.m());
  return SubsystemLayout(std::move(dims));
}

EnsembleReport run_code_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.code.n();
  const std::size_t na = cfg.alphas.size();
  const std::uint32_t patterns = 1U << n;
  const SubsystemLayout layout = code_layout(cfg.code, cfg.params);

  struct TrialData {
    TrialRecord record;
    std::vector<double> lambda_max;  // per pattern
    std::vector<double> purity;      // pattern-major, alpha-minor
  };
  std::vector<TrialData> data(cfg.trials);

  parallel_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    TrialData& out = data[t];
    out.record.trial = t;
    out.record.seed_child = child_seed(cfg.seed, t);
    const PureState psi = haar_random_pure(layout, out.record.seed_child);
    const PatternSpectra spectra(psi, cfg.params);
    out.record.bounds.reserve(na);
    for (double a : cfg.alphas) out.record.bounds.push_back(fidelity_upper_bound(spectra, cfg.code, cfg.params, a).value);
    out.lambda_max.resize(patterns);
    out.purity.resize(static_cast<std::size_t>(patterns) * na);
    for (std::uint32_t b = 0; b < patterns; ++b) {
      out.lambda_max[b] = spectra.largest_eigenvalue(b);
      for (std::size_t k = 0; k < na; ++k) out.purity[b * na + k] = spectra.purity(b, cfg.alphas[k]);
    }
    if (cfg.with_oracle) {
      const CodeFidelity f = optimal_code_fidelity(psi, cfg.code, cfg.params, cfg.tol);
      out.record.oracle_fidelity = f.primal;
      out.record.oracle_gap = f.max_gap;
    }
  });

  EnsembleReport report;
  report.trials = cfg.trials;
  const double d = static_cast<double>(cfg.params.d());

  // Operator-norm constant and the per-pattern purity envelope.
  report.patterns.resize(patterns);
  for (std::uint32_t b = 0; b < patterns; ++b) {
    PatternEnvelope& env = report.patterns[b];
    env.bits = b;
    env.erased = ErasurePattern(b, n).weight();
    CompensatedSum lm;
    for (const auto& td : data) lm.add(td.lambda_max[b]);
    env.mean_lambda_max = lm.value() / static_cast<double>(cfg.trials);
    report.c_hat = std::max(report.c_hat, std::pow(d, static_cast<double>(env.erased)) * env.mean_lambda_max);
    env.mean_purity.resize(na);
    for (std::size_t k = 0; k < na; ++k) {
      CompensatedSum pu;
      for (const auto& td : data) pu.add(td.purity[b * na + k]);
      env.mean_purity[k] = pu.value() / static_cast<double>(cfg.trials);
    }
  }
  for (auto& env : report.patterns) {
    env.envelope.resize(na);
    for (std::size_t k = 0; k < na; ++k)
      env.envelope[k] = std::pow(report.c_hat * std::pow(d, -static_cast<double>(env.erased)), cfg.alphas[k] - 1.0);
  }

  const ConstantEstimates c_hat_consts(report.c_hat, cfg.consts.levy_c);
  std::vector<double> column(cfg.trials);
  for (std::size_t k = 0; k < na; ++k) {
    for (std::size_t t = 0; t < cfg.trials; ++t) column[t] = data[t].record.bounds[k];
    AlphaSummary s;
    s.alpha = cfg.alphas[k];
    s.bound = summarize(column);
    s.expected_bound = expected_fidelity_bound(cfg.code, cfg.params, s.alpha, cfg.consts).value;
    s.expected_bound_c_hat = expected_fidelity_bound(cfg.code, cfg.params, s.alpha, c_hat_consts).value;
    s.dominated = s.bound.mean <= s.expected_bound_c_hat + 3.0 * s.bound.stderr_mean;
    report.alphas.push_back(s);
    for (double tau : cfg.thresholds) {
      std::size_t above = 0;
      for (double v : column) above += v > tau ? 1 : 0;
      report.fractions.push_back({s.alpha, tau, static_cast<double>(above) / static_cast<double>(cfg.trials)});
    }
  }

  if (cfg.with_oracle) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      column[t] = *data[t].record.oracle_fidelity;
      report.oracle_max_gap = std::max(report.oracle_max_gap, data[t].record.oracle_gap);
    }
    report.oracle = summarize(column);
  }

  if (cfg.keep_records) {
    report.records.reserve(cfg.trials);
    for (auto& td : data) report.records.push_back(std::move(td.record));
  }
  return report;
}

double estimate_opnorm_constant(std::size_t d_r, std::size_t d_s, std::size_t trials, std::uint64_t seed) {
  if (d_r < 2 || d_s < 2) throw ArgumentError("estimate_opnorm_constant: d_R and d_S must be >= 2");
  if (trials < 1) throw ArgumentError("estimate_opnorm_constant: trials must be >= 1");
  if (d_r * d_s > 4096) throw ResourceError("opnorm_dim", "d_R d_S exceeds 4096");
  const SubsystemLayout layout({d_r, d_s});
  const std::vector<std::size_t> keep{0};
  CompensatedSum s;
  for (std::size_t t = 0; t < trials; ++t) {
    const PureState psi = haar_random_pure(layout, child_seed(seed, t));
    s.add(marginal_spectrum(psi, keep)(0));
  }
  return static_cast<double>(d_r) * s.value() / static_cast<double>(trials);
}

FractionAudit fraction_audit(const EnsembleConfig& cfg, std::span<const double> thresholds) {
  if (!cfg.with_oracle && !cfg.bound_proxy)
    throw ArgumentError("fraction_audit: requires the oracle or bound-proxy mode");
  if (thresholds.empty()) throw ArgumentError("fraction_audit: no thresholds");
  for (double t : thresholds)
    if (!(t > 0.0 && t <= 1.0)) throw ArgumentError("thresholds must lie in (0, 1]");

  FractionAudit audit;
  audit.bound_proxy = !cfg.with_oracle;
  audit.ensemble = run_code_ensemble(cfg);
  audit.alpha = cfg.alphas.front();
  const BoundReport g = expected_fidelity_bound(cfg.code, cfg.params, audit.alpha, cfg.consts);
  audit.expected_bound = g.value;
  audit.markov = markov_from_expectation(g.value);

  const auto& recs = audit.ensemble.records;
  std::vector<double> fid(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    if (cfg.with_oracle) {
      fid[t] = *recs[t].oracle_fidelity;
    } else {
      fid[t] = *std::min_element(recs[t].bounds.begin(), recs[t].bounds.end());
    }
  }
  const double mean = summarize(fid).mean;
  const double trials = static_cast<double>(cfg.trials);
  for (double tau : thresholds) {
    FractionRow row;
    row.threshold = tau;
    std::size_t hits = 0;
    for (double f : fid) hits += f >= tau ? 1 : 0;
    row.fraction = static_cast<double>(hits) / trials;
    row.fraction_stderr = std::sqrt(row.fraction * (1.0 - row.fraction) / trials);
    row.empirical_mean = mean;
    row.markov_empirical = std::min(1.0, mean / tau);
    row.markov_analytic = std::min(1.0, g.value / tau);
    const double delta = tau - g.value;
    row.levy = delta > 0.0 ? levy_tail(cfg.code, cfg.params.d(), std::min(delta, 2.0), cfg.consts) : 1.0;
    row.consistent = row.fraction <= mean / tau + 3.0 * row.fraction_stderr;
    audit.rows.push_back(row);
  }
  return audit;
}

double fixed_decoder_fidelity(const PureState& psi, const ErasureParams& params, const ChoiOperator& decoder) {
  const std::size_t m = psi.layout().dim(0);
  const DensityMatrix out = apply_channel_uses(DensityMatrix::from_pure(psi), params);
  const DensityMatrix joint = DensityMatrix::trusted(out.matrix(), SubsystemLayout({m, out.dim() / m}));
  return decoded_fidelity(decoder, joint, m);
}

LipschitzAudit lipschitz_audit(std::size_t pairs, const CodeParams& code, const ErasureParams& params,
                               std::uint64_t decoder_seed, std::uint64_t seed) {
  if (pairs < 1) throw ArgumentError("lipschitz_audit: pairs must be >= 1");
  if (!code.m_exact()) throw ResourceError("oracle_joint_dim", "code dimension is not representable");
  const auto m = static_cast<std::size_t>(code.m());
  std::size_t out_dim = 1;
  for (std::size_t j = 0; j < code.n(); ++j) out_dim *= params.d() + 1;
  if (m * out_dim > kMaxOracleJointDim) throw ResourceError("oracle_joint_dim", "M (d+1)^n exceeds 256");

  const ChoiOperator decoder = ChoiOperator::random(out_dim, m, decoder_seed);
  const SubsystemLayout layout = code_layout(code, params);
  LipschitzAudit audit;
  audit.pairs = pairs;
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::uint64_t s1 = child_seed(seed, 2 * k);
    const std::uint64_t s2 = child_seed(seed, 2 * k + 1);
    const PureState phi1 = haar_random_pure(layout, s1);
    PureState phi2 = haar_random_pure(layout, s2);
    if (k % 2 == 1) {
      // Perturb phi1 in a random direction at scale 2^{-k/4}.
      const double scale = std::exp2(-static_cast<double>(k) / 4.0);
      Vector v = phi1.amplitudes() + scale * phi2.amplitudes();
      v.normalize();
      phi2 = PureState(std::move(v), layout);
    }
    const double dist = (phi1.amplitudes() - phi2.amplitudes()).norm();
    if (dist < 1e-12) continue;
    const double diff = std::abs(fixed_decoder_fidelity(phi1, params, decoder) -
                                 fixed_decoder_fidelity(phi2, params, decoder));
    audit.max_ratio = std::max(audit.max_ratio, diff / dist);
    ++audit.used;
  }
  return audit;
}

std::vector<AdditivityRow> additivity_experiment(const ErasureParams& params, double alpha,
                                                 std::size_t samples, std::uint64_t seed) {
  check_renyi_order(alpha);
  if (samples < 1) throw ArgumentError("additivity_experiment: samples must be >= 1");
  std::vector<AdditivityRow> rows;
  for (std::size_t n = 1; n <= 2; ++n) {
    std::uint64_t m = 1;
    for (std::size_t j = 0; j < n; ++j) m *= params.d();
    const CodeParams code = CodeParams::from_dimension(n, m);
    const SubsystemLayout layout = code_layout(code, params);
    AdditivityRow row;
    row.uses = n;
    row.m = static_cast<std::size_t>(m);
    row.max_per_use = -std::numeric_limits<double>::infinity();
    CompensatedSum total;
    for (std::size_t s = 0; s < samples; ++s) {
      const PureState psi = haar_random_pure(layout, child_seed(seed, (n - 1) * samples + s));
      const double v = renyi_coherent_info_direct(psi, params, alpha) / static_cast<double>(n);
      row.max_per_use = std::max(row.max_per_use, v);
      total.add(v);
    }
    row.mean_per_use = total.value() / static_cast<double>(samples);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace esc
