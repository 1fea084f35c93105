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

// Ground-truth optimal decoding for entanglement generation over the erasure
// channel.
//
// A decoder B -> B^ (dim m) is represented by its Choi operator
// C = sum_{b,b'} L(|b><b'|) (x) |b><b'| on out (x) in. For a joint state rho on
// A (x) B with dim A = m, the decoded fidelity with Phi_m is Tr{C X} where
// X = rho^T / m. The optimum over channels is the semidefinite program
//
//   primal:  max Tr{C X}  s.t. C >= 0, Tr_out C = I_in
//   dual:    min Tr{Z}    s.t. I_out (x) Z >= X
//
// solved here by a log-barrier Newton method on the dual. Every iterate yields
// a strictly feasible Z and, after renormalising Tr_out C = I, an exactly
// feasible decoder, so primal <= optimum <= dual always holds.

#include <cstdint>
#include <span>
#include <vector>

#include "esc/bounds.hpp"
#include "esc/erasure.hpp"
#include "esc/qcore.hpp"

namespace esc {

inline constexpr double kChoiTol = 1e-9;
inline constexpr std::size_t kMaxOracleJointDim = 256;

class ChoiOperator {
 public:
  /// Validates PSD and Tr_out C = I_in within 1e-9.
  ChoiOperator(Matrix matrix, std::size_t in_dim, std::size_t out_dim);

  static ChoiOperator identity(std::size_t dim);
  /// Random channel: C0 = G G^dag for a Ginibre G with `rank` columns
  /// (0 means in*out), renormalised to be trace preserving.
  static ChoiOperator random(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed,
                             std::size_t rank = 0);

  const Matrix& matrix() const noexcept { return c_; }
  std::size_t in_dim() const noexcept { return in_; }
  std::size_t out_dim() const noexcept { return out_; }

  /// L(rho) for an operator on the input space.
  Matrix apply(const Matrix& rho) const;

 private:
  Matrix c_;
  std::size_t in_;
  std::size_t out_;
};

/// Tr_out of an operator on out (x) in.
Matrix trace_out_first(const Matrix& m, std::size_t out_dim, std::size_t in_dim);

/// (id_A (x) L)(rho) for rho on A (x) in with dim A = ref_dim.
DensityMatrix apply_decoder(const ChoiOperator& decoder, const DensityMatrix& joint, std::size_t ref_dim);

/// <Phi_m| (id (x) L)(joint) |Phi_m> computed as Tr{C X}.
double decoded_fidelity(const ChoiOperator& decoder, const DensityMatrix& joint, std::size_t m);

/// X = rho^T / m for a joint state on A (x) B with dim A = m.
Matrix entanglement_objective(const DensityMatrix& joint, std::size_t m);

struct SdpOptions {
  double tol = 1e-6;
  std::size_t max_iterations = 100000;
};

struct SdpResult {
  double primal = 0.0;
  double dual = 0.0;
  std::size_t iterations = 0;
  Matrix decoder;  // feasible Choi operator attaining `primal`
  Matrix dual_z;   // feasible dual variable attaining `dual`

  double gap() const noexcept { return dual - primal; }
};

/// Solves the decoder SDP for an arbitrary Hermitian objective on out (x) in.
/// Throws NumericalError with the best pair when the gap does not close.
SdpResult solve_decoder_sdp(const Matrix& objective, std::size_t out_dim, std::size_t in_dim,
                            const SdpOptions& options = {});

/// Optimal decoded fidelity of a joint state on A (x) B_S, dim A = m, total
/// dimension <= 256.
SdpResult decode_entanglement(const DensityMatrix& joint, std::size_t m, double tol);
double max_entanglement_fidelity(const DensityMatrix& joint, std::size_t m, double tol);

/// (1/m)(sum of the m largest sqrt(lambda_j))^2: the optimum for a pure joint
/// state with Schmidt coefficients lambda.
double pure_branch_fidelity(std::span<const double> schmidt, std::size_t m);

struct BranchFidelity {
  ErasurePattern pattern;
  double weight;
  double primal;
  double dual;
};

struct CodeFidelity {
  double primal = 0.0;  // achieved by an explicit flag-conditioned decoder
  double dual = 0.0;    // certified upper bound on the optimum
  double max_gap = 0.0;
  std::vector<BranchFidelity> branches;

  double value() const noexcept { return primal; }
};

/// Optimal fidelity of a code state, one SDP per erasure branch. Guards:
/// n <= 3, d = 2, M <= 8.
CodeFidelity optimal_code_fidelity(const PureState& psi, const CodeParams& code,
                                   const ErasureParams& params, double tol);

/// The same optimum from a single SDP over the full (d+1)^n output. Guards:
/// n <= 2, d = 2, M <= 8.
CodeFidelity global_code_fidelity(const PureState& psi, const CodeParams& code,
                                  const ErasureParams& params, double tol);

using Codeword = std::vector<std::size_t>;

/// Success probability of maximum-likelihood decoding of M equiprobable
/// basis-state codewords sent over n erasure uses.
double classical_ml_success(std::span<const Codeword> codebook, std::size_t d, double p);

struct ClassicalOptimum {
  double success = 0.0;
  std::vector<Codeword> codebook;
};

/// Best ML success over all basis-state codebooks with M words, by
/// exhaustive enumeration. Guards: n <= 3, M <= 8, d^n <= 64.
ClassicalOptimum optimal_classical_success(std::size_t n, std::size_t d, std::size_t m, double p);

}  // namespace esc
