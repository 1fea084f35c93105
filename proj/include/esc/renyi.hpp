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

// Petz-Renyi relative entropy D_alpha(rho||sigma) = log2 Tr{rho^a sigma^{1-a}} / (a-1)
// for a in (1, 2], in bits. Infinite values (support mismatch) are returned as
// +infinity; callers test with std::isinf.

#include <cstddef>

#include "esc/erasure.hpp"
#include "esc/qcore.hpp"

namespace esc {

inline constexpr std::size_t kMaxDirectDim = 4096;

/// Throws ArgumentError unless alpha lies in (1, 2].
void check_renyi_order(double alpha);

/// Both arguments are positive semidefinite operators of equal side; neither
/// needs unit trace (sigma = I_A (x) tau is common). Returns +infinity when
/// rho has weight > 1e-10 on the kernel (eigenvalues < 1e-12) of sigma.
double renyi_relative_entropy(const Matrix& rho, const Matrix& sigma, double alpha);
double renyi_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha);

/// Umegaki relative entropy Tr{rho (log2 rho - log2 sigma)}, same
/// conventions; the alpha -> 1 limit of the above.
double relative_entropy(const Matrix& rho, const Matrix& sigma);

/// The flag distributions of the decoding test: rho_F = (F, 1-F) against the
/// positive (unnormalised) pair P_{1/M} = (1/M, M - 1/M).
struct BinaryFlagDistribution {
  double succ;
  std::size_t m;

  BinaryFlagDistribution(double fidelity, std::size_t m);

  double succ_ref() const { return 1.0 / static_cast<double>(m); }
  double fail_ref() const { return static_cast<double>(m) - 1.0 / static_cast<double>(m); }
};

/// D_alpha(rho_F || P_{1/M}) in closed form.
double binary_flag_divergence(double fidelity, std::size_t m, double alpha);

/// alpha/(alpha-1) log2 F + log2 M, the lower bound on the above obtained by
/// dropping the failure term. -infinity at F = 0.
double binary_flag_floor(double fidelity, std::size_t m, double alpha);

/// D_alpha(N^{(x)n}(phi) || I_A (x) [N_p(pi)]^{(x)n}) built densely. Requires
/// M (d+1)^n <= 4096; throws ResourceError("direct_dense_guard") otherwise.
double renyi_coherent_info_direct(const PureState& psi, const ErasureParams& params, double alpha);

/// I_A (x) [N_p(I/d)]^{(x)n} on [M, d+1, ..., d+1] (diagonal).
Matrix erasure_reference_operator(std::size_t m, std::size_t n, const ErasureParams& params);

}  // namespace esc
