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

// Closed-form fidelity and success-probability bounds for codes over the
// erasure channel, their exponents, and tail estimates for Haar-random codes.
//
// Every BoundReport satisfies value = min(1, 2^{-n * exponent}).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esc/erasure.hpp"
#include "esc/qcore.hpp"

namespace esc {

/// (n, R, M) with M = floor(2^{nR}) and R_eff = log2(M)/n. When 2^{nR} does
/// not fit in 62 bits, M is only known through log2(M) = nR.
class CodeParams {
 public:
  static CodeParams from_rate(std::size_t n, double rate);
  static CodeParams from_dimension(std::size_t n, std::uint64_t m);

  std::size_t n() const noexcept { return n_; }
  double rate() const noexcept { return rate_; }
  double r_eff() const noexcept { return r_eff_; }
  double log2_m() const noexcept { return r_eff_ * static_cast<double>(n_); }
  bool m_exact() const noexcept { return m_.has_value(); }
  /// Throws ArgumentError when M is not representable.
  std::uint64_t m() const;

 private:
  CodeParams(std::size_t n, double rate, std::optional<std::uint64_t> m, double r_eff)
      : n_(n), rate_(rate), m_(m), r_eff_(r_eff) {}

  std::size_t n_;
  double rate_;
  std::optional<std::uint64_t> m_;
  double r_eff_;
};

struct ConstantEstimates {
  double big_c = 1.0;     // E||M||_inf^2 <= C / d_R
  double levy_c = 1.0;    // concentration constant
  ConstantEstimates() = default;
  ConstantEstimates(double c_opnorm, double c_levy);
};

struct BoundReport {
  double alpha = 0.0;
  double value = 1.0;
  double exponent = 0.0;
  std::map<std::string, double> components;
};

struct ExponentProfile {
  std::vector<double> alphas;
  std::vector<double> exponents;
  double best_alpha = 0.0;
  double best_exponent = 0.0;
};

/// Eigenvalues of phi_{A^{i}} (the erased uses) for every pattern i, computed
/// once so that sums can be re-evaluated for several alpha.
class PatternSpectra {
 public:
  PatternSpectra(const PureState& psi, const ErasureParams& params);

  std::size_t uses() const noexcept { return n_; }
  const RealVector& spectrum(std::uint32_t bits) const { return spectra_.at(bits); }
  double purity(std::uint32_t bits, double alpha) const;
  double largest_eigenvalue(std::uint32_t bits) const { return spectra_.at(bits)(0); }

 private:
  std::size_t n_;
  std::vector<RealVector> spectra_;
};

/// sum_i [(1-p) d^{a-1}]^{n-|i|} p^{|i|} Tr{[phi_{A^{i}}]^a}.
double erasure_renyi_sum(const PatternSpectra& spectra, const ErasureParams& params, double alpha);

/// log2(erasure_renyi_sum) / (alpha - 1).
double erasure_renyi_closed_form(const PureState& psi, const ErasureParams& params, double alpha);

BoundReport fidelity_upper_bound(const PureState& psi, const CodeParams& code,
                                 const ErasureParams& params, double alpha);
BoundReport fidelity_upper_bound(const PatternSpectra& spectra, const CodeParams& code,
                                 const ErasureParams& params, double alpha);

/// g(a) = log2[(1-p) d^{a-1} + p d^{1-a}] / (a-1).
double renyi_capacity_term(const ErasureParams& params, double alpha);

/// 2^{-n((a-1)/a)(R_eff - g(a) - (a/n) log2 C)}, clamped to 1. The
/// "rate_gap" component holds R_eff - g(a) - (a/n) log2 C.
BoundReport expected_fidelity_bound(const CodeParams& code, const ErasureParams& params, double alpha,
                                    const ConstantEstimates& consts);

/// ((a-1)/a)(R_eff - g(a) - (a/n) log2 C).
double fidelity_exponent(const CodeParams& code, const ErasureParams& params, double alpha,
                         const ConstantEstimates& consts);

/// Evaluates the exponent on grid_size points with alpha - 1 geometric in
/// [1e-4, 1], then refines around the best point by golden section. The
/// refined point is inserted into the profile when it improves on the grid.
ExponentProfile optimize_exponent(const CodeParams& code, const ErasureParams& params,
                                  const ConstantEstimates& consts, std::size_t grid_size);

struct MarkovTail {
  double threshold;
  double tail;
};

/// Pr{F > sqrt(G)} <= sqrt(G) for an expectation bound G (unclamped).
MarkovTail markov_from_expectation(double expectation_bound);
MarkovTail markov_tail(const CodeParams& code, const ErasureParams& params, double alpha,
                       const ConstantEstimates& consts);

inline constexpr double kFidelityLipschitz = 2.0;

/// min(1, 4 exp{-2^{n(R_eff + log2 d)} delta^2 / (c eta)}) with eta = 2.
/// Requires 0 <= delta <= eta.
double levy_tail(const CodeParams& code, std::size_t d, double delta, const ConstantEstimates& consts);

/// log2[(1-p) d^{a-1} + p] / (a-1).
double classical_renyi_term(const ErasureParams& params, double alpha);

/// min(1, 2^{-n((a-1)/a)(R_eff - classical_renyi_term)}).
BoundReport classical_success_bound(const CodeParams& code, const ErasureParams& params, double alpha);

}  // namespace esc
