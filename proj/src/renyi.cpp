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

#include "esc/renyi.hpp"

#include <cmath>
#include <limits>

#include "esc/error.hpp"
#include "esc/numeric.hpp"

namespace esc {
namespace {

constexpr double kKernelEig = 1e-12;
constexpr double kKernelWeight = 1e-10;

struct PairDecomposition {
  RealVector a;    // eigenvalues of rho (clamped >= 0)
  RealVector b;    // eigenvalues of sigma (clamped >= 0)
  Eigen::MatrixXd overlap;  // |<u_i|v_j>|^2
  bool support_ok = true;
};

PairDecomposition decompose(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw ArgumentError("renyi: operators must be square with equal dimensions");
  if (hermiticity_defect(rho) > kStateTol || hermiticity_defect(sigma) > kStateTol)
    throw InvariantError("renyi: operators must be Hermitian");
  const auto er = eigh((rho + rho.adjoint()) * 0.5);
  const auto es = eigh((sigma + sigma.adjoint()) * 0.5);
  PairDecomposition out;
  out.a = er.eigenvalues().cwiseMax(0.0);
  out.b = es.eigenvalues().cwiseMax(0.0);
  for (auto& x : out.a)
    if (x < kEigenClamp) x = 0.0;
  const Matrix inner = er.eigenvectors().adjoint() * es.eigenvectors();
  out.overlap = inner.cwiseAbs2();
  // Weight of rho on the kernel of sigma.
  double kernel_weight = 0.0;
  for (Eigen::Index j = 0; j < out.b.size(); ++j)
    if (out.b(j) < kKernelEig)
      for (Eigen::Index i = 0; i < out.a.size(); ++i) kernel_weight += out.a(i) * out.overlap(i, j);
  out.support_ok = kernel_weight <= kKernelWeight;
  return out;
}

}  // namespace

void check_renyi_order(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw ArgumentError("Renyi order alpha must lie in (1, 2]");
}

double renyi_relative_entropy(const Matrix& rho, const Matrix& sigma, double alpha) {
  check_renyi_order(alpha);
  const auto pd = decompose(rho, sigma);
  if (!pd.support_ok) return std::numeric_limits<double>::infinity();
  CompensatedSum q;
  for (Eigen::Index i = 0; i < pd.a.size(); ++i) {
    if (pd.a(i) == 0.0) continue;
    const double ai = std::pow(pd.a(i), alpha);
    for (Eigen::Index j = 0; j < pd.b.size(); ++j) {
      if (pd.b(j) < kKernelEig) continue;
      q.add(ai * std::pow(pd.b(j), 1.0 - alpha) * pd.overlap(i, j));
    }
  }
  return std::log2(q.value()) / (alpha - 1.0);
}

double renyi_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma, double alpha) {
  return renyi_relative_entropy(rho.matrix(), sigma.matrix(), alpha);
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  const auto pd = decompose(rho, sigma);
  if (!pd.support_ok) return std::numeric_limits<double>::infinity();
  CompensatedSum s;
  for (Eigen::Index i = 0; i < pd.a.size(); ++i) {
    if (pd.a(i) == 0.0) continue;
    s.add(pd.a(i) * std::log2(pd.a(i)));
    for (Eigen::Index j = 0; j < pd.b.size(); ++j) {
      if (pd.b(j) < kKernelEig) continue;
      s.add(-pd.a(i) * pd.overlap(i, j) * std::log2(pd.b(j)));
    }
  }
  return s.value();
}

BinaryFlagDistribution::BinaryFlagDistribution(double fidelity, std::size_t m_) : succ(fidelity), m(m_) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw ArgumentError("fidelity must lie in [0, 1]");
  if (m_ < 2) throw ArgumentError("M must be >= 2");
}

double binary_flag_divergence(double fidelity, std::size_t m, double alpha) {
  check_renyi_order(alpha);
  const BinaryFlagDistribution f(fidelity, m);
  const double q = std::pow(f.succ, alpha) * std::pow(f.succ_ref(), 1.0 - alpha) +
                   std::pow(1.0 - f.succ, alpha) * std::pow(f.fail_ref(), 1.0 - alpha);
  return std::log2(q) / (alpha - 1.0);
}

double binary_flag_floor(double fidelity, std::size_t m, double alpha) {
  check_renyi_order(alpha);
  const BinaryFlagDistribution f(fidelity, m);
  return alpha / (alpha - 1.0) * std::log2(f.succ) + std::log2(static_cast<double>(m));
}

Matrix erasure_reference_operator(std::size_t m, std::size_t n, const ErasureParams& params) {
  const std::size_t d = params.d();
  // Diagonal of N_p(pi) on d+1 levels.
  std::vector<double> local(d + 1, (1.0 - params.p()) / static_cast<double>(d));
  local[d] = params.p();
  std::vector<double> diag{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> next;
    next.reserve(diag.size() * (d + 1));
    for (double x : diag)
      for (double y : local) next.push_back(x * y);
    diag = std::move(next);
  }
  const auto side = static_cast<Eigen::Index>(m * diag.size());
  RealVector full(side);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t i = 0; i < diag.size(); ++i)
      full(static_cast<Eigen::Index>(a * diag.size() + i)) = diag[i];
  return full.cast<cplx>().asDiagonal();
}

double renyi_coherent_info_direct(const PureState& psi, const ErasureParams& params, double alpha) {
  check_renyi_order(alpha);
  const std::size_t n = code_uses(psi, params);
  const std::size_t m = psi.layout().dim(0);
  double side = static_cast<double>(m) * std::pow(static_cast<double>(params.d() + 1), static_cast<double>(n));
  if (side > static_cast<double>(kMaxDirectDim))
    throw ResourceError("direct_dense_guard", "M (d+1)^n exceeds 4096");
  const DensityMatrix out = apply_channel_uses(DensityMatrix::from_pure(psi), params);
  return renyi_relative_entropy(out.matrix(), erasure_reference_operator(m, n, params), alpha);
}

}  // namespace esc
