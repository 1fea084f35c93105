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

// Dense complex linear algebra over multipartite systems.
//
// Basis ordering: a multi-index (i_0, ..., i_{k-1}) over local dimensions
// (d_0, ..., d_{k-1}) maps to the flat index i_0 d_1...d_{k-1} + ... + i_{k-1},
// i.e. subsystem 0 is the most significant digit (Kronecker-product order).
// Subsystem 0 is the reference system A in every higher-level module.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace esc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kStateTol = 1e-10;
inline constexpr double kEigenClamp = 1e-14;

class SubsystemLayout {
 public:
  SubsystemLayout() : dims_{1}, total_(1) {}
  explicit SubsystemLayout(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t k) const { return dims_.at(k); }
  std::size_t total() const noexcept { return total_; }

  /// Layout of the listed subsystems in ascending index order.
  SubsystemLayout restricted(std::span<const std::size_t> keep) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_;
};

/// Sorts `subset`, rejecting duplicates and indices >= layout.size().
std::vector<std::size_t> normalize_subset(const SubsystemLayout& layout,
                                          std::span<const std::size_t> subset);

/// The complement of `subset` in {0, ..., layout.size() - 1}.
std::vector<std::size_t> complement(const SubsystemLayout& layout,
                                    std::span<const std::size_t> subset);

class PureState {
 public:
  /// Throws ArgumentError unless the vector has length layout.total() and
  /// unit norm within 1e-10.
  PureState(Vector amplitudes, SubsystemLayout layout);

  const Vector& amplitudes() const noexcept { return amps_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return layout_.total(); }

  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
  SubsystemLayout layout_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and eigenvalues >= -1e-10.
  DensityMatrix(Matrix matrix, SubsystemLayout layout);

  /// Skips the eigenvalue check; Hermiticity and shape are still checked.
  /// For matrices produced by trace- and positivity-preserving maps.
  static DensityMatrix trusted(Matrix matrix, SubsystemLayout layout);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(const SubsystemLayout& layout);

  const Matrix& matrix() const noexcept { return m_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return layout_.total(); }

 private:
  struct NoCheck {};
  DensityMatrix(Matrix matrix, SubsystemLayout layout, NoCheck);

  Matrix m_;
  SubsystemLayout layout_;
};

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalised. Deterministic in (layout, seed).
PureState haar_random_pure(const SubsystemLayout& layout, std::uint64_t seed);

/// Haar-random isometry from C^in into C^out (out >= in), as the first `in`
/// columns of a Haar unitary (QR of a Ginibre matrix with phase fix).
Matrix haar_random_isometry(std::size_t in, std::size_t out, std::uint64_t seed);

/// (|00> + |11> + ... + |m-1,m-1>)/sqrt(m) on layout [m, m].
PureState maximally_entangled(std::size_t m);

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reorders the subsystems of a pure state: result subsystem j is input
/// subsystem order[j].
PureState permute(const PureState& psi, std::span<const std::size_t> order);

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

/// Reduced density matrix of a pure state on `keep`.
DensityMatrix reduced_state(const PureState& psi, std::span<const std::size_t> keep);

/// Eigenvalues of the marginal of `psi` on `subset`, descending, clamped at
/// 1e-14. Computed on whichever side of the cut is smaller, so trailing
/// zeros are omitted when the marginal is rank deficient. Empty subset: {1}.
RealVector marginal_spectrum(const PureState& psi, std::span<const std::size_t> subset);

/// Tr{[psi_subset]^alpha}, alpha in (1, 2]. The empty marginal has purity 1.
double marginal_purity(const PureState& psi, std::span<const std::size_t> subset, double alpha);

/// Sum of lambda^alpha over a spectrum, ignoring entries below 1e-14.
double spectral_power_sum(const RealVector& spectrum, double alpha);

/// Descending eigenvalues, sum 1, tiny negatives clamped to zero.
RealVector spectrum(const DensityMatrix& rho);

/// Same for a raw matrix; throws InvariantError when it is not Hermitian
/// within 1e-10.
RealVector spectrum(const Matrix& hermitian);

/// <target| state |target>, clamped to [0, 1].
double fidelity_with_pure(const PureState& target, const DensityMatrix& state);

/// Largest entrywise deviation from Hermiticity.
double hermiticity_defect(const Matrix& m);

/// Eigen-decomposition helper for Hermitian matrices; eigenvalues ascending.
Eigen::SelfAdjointEigenSolver<Matrix> eigh(const Matrix& hermitian);

// JSON state file: {"dims": [...], "re": [...], "im": [...]}.
PureState parse_state_json(std::string_view text);
PureState load_state_file(const std::filesystem::path& path);
std::string state_to_json(const PureState& psi);

}  // namespace esc
