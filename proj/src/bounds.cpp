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

#include "esc/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "esc/error.hpp"
#include "esc/numeric.hpp"
#include "esc/renyi.hpp"

namespace esc {
namespace {

BoundReport from_exponent(double alpha, std::size_t n, double exponent) {
  BoundReport r;
  r.alpha = alpha;
  r.exponent = exponent;
  r.value = std::min(1.0, std::exp2(-static_cast<double>(n) * exponent));
  return r;
}

}  // namespace

CodeParams CodeParams::from_rate(std::size_t n, double rate) {
  if (n < 1) throw ArgumentError("number of channel uses n must be >= 1");
  if (!std::isfinite(rate) || rate <= 0.0) throw ArgumentError("rate must be positive and finite");
  const double nr = static_cast<double>(n) * rate;
  if (nr >= 62.0) return CodeParams(n, rate, std::nullopt, rate);
  // floor(2^{nR}), snapping to the nearest integer when 2^{nR} is within
  // round-off of it (e.g. R = log2(3)).
  const double x = std::exp2(nr);
  const double nearest = std::nearbyint(x);
  const auto m = static_cast<std::uint64_t>(std::abs(x - nearest) <= 1e-12 * x ? nearest : std::floor(x));
  if (m < 2) throw ArgumentError("M = floor(2^{nR}) must be >= 2 (n = " + std::to_string(n) + ")");
  return CodeParams(n, rate, m, std::log2(static_cast<double>(m)) / static_cast<double>(n));
}

CodeParams CodeParams::from_dimension(std::size_t n, std::uint64_t m) {
  if (n < 1) throw ArgumentError("number of channel uses n must be >= 1");
  if (m < 2) throw ArgumentError("code dimension M must be >= 2");
  const double r = std::log2(static_cast<double>(m)) / static_cast<double>(n);
  return CodeParams(n, r, m, r);
}

std::uint64_t CodeParams::m() const {
  if (!m_) throw ArgumentError("code dimension 2^{nR} is too large to represent");
  return *m_;
}

ConstantEstimates::ConstantEstimates(double c_opnorm, double c_levy) : big_c(c_opnorm), levy_c(c_levy) {
  if (!(c_opnorm > 0.0) || !(c_levy > 0.0)) throw ArgumentError("constants C and c must be positive");
}

PatternSpectra::PatternSpectra(const PureState& psi, const ErasureParams& params)
    : n_(code_uses(psi, params)) {
  if (n_ > kMaxBranchUses)
    throw ResourceError("branch_uses", "pattern sums support at most 20 channel uses");
  const std::uint32_t count = 1U << n_;
  spectra_.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits)
    spectra_.push_back(marginal_spectrum(psi, ErasurePattern(bits, n_).erased_systems()));
}

double PatternSpectra::purity(std::uint32_t bits, double alpha) const {
  return spectral_power_sum(spectra_.at(bits), alpha);
}

double erasure_renyi_sum(const PatternSpectra& spectra, const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  const std::size_t n = spectra.uses();
  const double kept = (1.0 - params.p()) * std::pow(static_cast<double>(params.d()), alpha - 1.0);
  CompensatedSum s;
  for (std::uint32_t bits = 0; bits < (1U << n); ++bits) {
    const auto k = static_cast<std::size_t>(std::popcount(bits));
    const double w = std::pow(kept, static_cast<double>(n - k)) * std::pow(params.p(), static_cast<double>(k));
    if (w == 0.0) continue;
    s.add(w * spectra.purity(bits, alpha));
  }
  return s.value();
}

double erasure_renyi_closed_form(const PureState& psi, const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  const PatternSpectra spectra(psi, params);
  return std::log2(erasure_renyi_sum(spectra, params, alpha)) / (alpha - 1.0);
}

BoundReport fidelity_upper_bound(const PatternSpectra& spectra, const CodeParams& code,
                                 const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  if (spectra.uses() != code.n()) throw ArgumentError("fidelity_upper_bound: state has wrong number of uses");
  const double sum = erasure_renyi_sum(spectra, params, alpha);
  const double n = static_cast<double>(code.n());
  const double info = std::log2(sum) / (alpha - 1.0);
  const double exponent = (alpha - 1.0) / alpha * code.r_eff() - std::log2(sum) / (alpha * n);
  auto r = from_exponent(alpha, code.n(), exponent);
  r.components["renyi_sum"] = sum;
  r.components["renyi_coherent_info"] = info;
  r.components["r_eff"] = code.r_eff();
  return r;
}

BoundReport fidelity_upper_bound(const PureState& psi, const CodeParams& code,
                                 const ErasureParams& params, double alpha) {
  const std::size_t n = code_uses(psi, params);
  if (n != code.n() || psi.layout().dim(0) != code.m())
    throw ArgumentError("fidelity_upper_bound: state layout must be [M, d x n] for the given code");
  return fidelity_upper_bound(PatternSpectra(psi, params), code, params, alpha);
}

double renyi_capacity_term(const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  const double t = alpha - 1.0;
  const double d = static_cast<double>(params.d());
  return std::log2((1.0 - params.p()) * std::pow(d, t) + params.p() * std::pow(d, -t)) / t;
}

double fidelity_exponent(const CodeParams& code, const ErasureParams& params, double alpha,
                         const ConstantEstimates& consts) {
  const double gap = code.r_eff() - renyi_capacity_term(params, alpha) -
                     alpha / static_cast<double>(code.n()) * std::log2(consts.big_c);
  return (alpha - 1.0) / alpha * gap;
}

BoundReport expected_fidelity_bound(const CodeParams& code, const ErasureParams& params, double alpha,
                                    const ConstantEstimates& consts) {
  const double g = renyi_capacity_term(params, alpha);
  const double gap = code.r_eff() - g - alpha / static_cast<double>(code.n()) * std::log2(consts.big_c);
  auto r = from_exponent(alpha, code.n(), (alpha - 1.0) / alpha * gap);
  r.components["renyi_capacity_term"] = g;
  r.components["rate_gap"] = gap;
  r.components["r_eff"] = code.r_eff();
  r.components["unclamped"] = std::exp2(-static_cast<double>(code.n()) * r.exponent);
  return r;
}

ExponentProfile optimize_exponent(const CodeParams& code, const ErasureParams& params,
                                  const ConstantEstimates& consts, std::size_t grid_size) {
  if (grid_size < 16) throw ArgumentError("optimize_exponent: grid_size must be >= 16");
  auto exponent_at = [&](double a) { return fidelity_exponent(code, params, a, consts); };

  ExponentProfile prof;
  const double t_lo = 1e-4, t_hi = 1.0;
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    const double a = k + 1 == grid_size ? 2.0 : 1.0 + t_lo * std::pow(t_hi / t_lo, frac);
    prof.alphas.push_back(a);
    prof.exponents.push_back(exponent_at(a));
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid_size; ++k)
    if (prof.exponents[k] > prof.exponents[best]) best = k;

  // Golden-section search on the cell around the best grid point.
  double lo = prof.alphas[best == 0 ? 0 : best - 1];
  double hi = prof.alphas[std::min(best + 1, grid_size - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = exponent_at(x1), f2 = exponent_at(x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = exponent_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = exponent_at(x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_val = exponent_at(refined);
  if (refined_val > prof.exponents[best]) {
    const auto pos = std::lower_bound(prof.alphas.begin(), prof.alphas.end(), refined) - prof.alphas.begin();
    prof.alphas.insert(prof.alphas.begin() + pos, refined);
    prof.exponents.insert(prof.exponents.begin() + pos, refined_val);
    best = static_cast<std::size_t>(pos);
  }
  prof.best_alpha = prof.alphas[best];
  prof.best_exponent = prof.exponents[best];
  return prof;
}

MarkovTail markov_from_expectation(double expectation_bound) {
  if (!(expectation_bound >= 0.0)) throw ArgumentError("markov: expectation bound must be >= 0");
  const double s = std::min(1.0, std::sqrt(expectation_bound));
  return {s, s};
}

MarkovTail markov_tail(const CodeParams& code, const ErasureParams& params, double alpha,
                       const ConstantEstimates& consts) {
  const double e = fidelity_exponent(code, params, alpha, consts);
  return markov_from_expectation(std::exp2(-static_cast<double>(code.n()) * e));
}

double levy_tail(const CodeParams& code, std::size_t d, double delta, const ConstantEstimates& consts) {
  if (!(delta >= 0.0)) throw ArgumentError("levy_tail: delta must be >= 0");
  if (delta > kFidelityLipschitz) throw ArgumentError("levy_tail: delta must not exceed the Lipschitz constant 2");
  if (d < 2) throw ArgumentError("levy_tail: d must be >= 2");
  if (delta == 0.0) return 1.0;
  // 2^{n(R + log2 d)} delta^2 / (c eta), evaluated in log space.
  const double log_inner = static_cast<double>(code.n()) * (code.r_eff() + std::log2(static_cast<double>(d))) *
                               std::log(2.0) +
                           std::log(delta * delta / (consts.levy_c * kFidelityLipschitz));
  return std::min(1.0, 4.0 * std::exp(-std::exp(log_inner)));
}

double classical_renyi_term(const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  const double t = alpha - 1.0;
  return std::log2((1.0 - params.p()) * std::pow(static_cast<double>(params.d()), t) + params.p()) / t;
}

BoundReport classical_success_bound(const CodeParams& code, const ErasureParams& params, double alpha) {
  const double term = classical_renyi_term(params, alpha);
  auto r = from_exponent(alpha, code.n(), (alpha - 1.0) / alpha * (code.r_eff() - term));
  r.components["classical_renyi_term"] = term;
  r.components["r_eff"] = code.r_eff();
  return r;
}

}  // namespace esc
