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

// The quantum erasure channel N_p(rho) = (1-p) rho + p |e><e|. The flag |e>
// is the extra basis vector with index d of the (d+1)-dimensional output.

#include <cstdint>
#include <vector>

#include "esc/qcore.hpp"

namespace esc {

inline constexpr std::size_t kMaxBranchUses = 20;

class ErasureParams {
 public:
  /// Throws ArgumentError unless 0 <= p <= 1 and d >= 2.
  ErasureParams(double p, std::size_t d);

  double p() const noexcept { return p_; }
  std::size_t d() const noexcept { return d_; }

  /// The channel to the environment: erasure with probability 1 - p.
  ErasureParams complementary() const { return ErasureParams(1.0 - p_, d_); }

 private:
  double p_;
  std::size_t d_;
};

/// Which of n channel uses were erased: bit j set <=> use j erased. Use j acts
/// on subsystem j + 1 of a code state (subsystem 0 is the reference A).
class ErasurePattern {
 public:
  ErasurePattern(std::uint32_t bits, std::size_t n);

  std::uint32_t bits() const noexcept { return bits_; }
  std::size_t uses() const noexcept { return n_; }
  std::size_t weight() const noexcept;
  bool erased(std::size_t use) const noexcept { return (bits_ >> use) & 1U; }

  /// Code-state subsystem indices (1-based uses) that are erased / survive.
  std::vector<std::size_t> erased_systems() const;
  std::vector<std::size_t> surviving_systems() const;

 private:
  std::uint32_t bits_;
  std::size_t n_;
};

struct BranchEntry {
  ErasurePattern pattern;
  double weight;         // (1-p)^{n-|i|} p^{|i|}
  DensityMatrix branch;  // code state reduced to A and the surviving uses
};

struct BranchDecomposition {
  std::size_t uses = 0;
  std::size_t d = 0;
  std::vector<BranchEntry> entries;  // ordered by pattern bits
};

/// (1-p)^{n-k} p^k with 0^0 = 1.
double pattern_weight(double p, std::size_t n, std::size_t k);

/// rho on [d] -> output on [d+1].
DensityMatrix apply_erasure(const DensityMatrix& rho, const ErasureParams& params);

/// Applies the channel to subsystem `k` of a multipartite state; that
/// subsystem must have dimension d and becomes d+1.
DensityMatrix apply_erasure_on(const DensityMatrix& rho, std::size_t k, const ErasureParams& params);

/// Applies N_p to every subsystem except 0 (the reference).
DensityMatrix apply_channel_uses(const DensityMatrix& rho, const ErasureParams& params);

/// The n-use output as 2^n orthogonally flagged branches. psi must have
/// layout [M, d, ..., d] with n <= 20 uses.
BranchDecomposition branch_decompose(const PureState& psi, const ErasureParams& params);

/// Re-embeds the branches into the full [M, d+1, ..., d+1] output space.
DensityMatrix reconstruct_output(const BranchDecomposition& decomposition, std::size_t m);

/// Number of channel uses of a code state with layout [M, d x n]; throws
/// ArgumentError when the layout does not have that shape.
std::size_t code_uses(const PureState& psi, const ErasureParams& params);

/// max(0, (1 - 2p) log2 d).
double quantum_capacity(const ErasureParams& params);

/// (1 - p) log2 d.
double classical_capacity(const ErasureParams& params);

}  // namespace esc
