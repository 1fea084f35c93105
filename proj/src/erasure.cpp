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

#include "esc/erasure.hpp"

#include <bit>
#include <cmath>

#include "esc/error.hpp"

namespace esc {
namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t j = dims.size(); j-- > 1;) s[j - 1] = s[j] * dims[j];
  return s;
}

// Maps every flat index of `from` to the flat index with the same digits in
// `to` (which has the same number of subsystems and no smaller dimensions).
std::vector<std::size_t> embed_indices(const std::vector<std::size_t>& from,
                                       const std::vector<std::size_t>& to) {
  const auto st = strides_of(to);
  std::size_t total = 1;
  for (auto d : from) total *= d;
  std::vector<std::size_t> out(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    std::size_t off = 0;
    for (std::size_t j = from.size(); j-- > 0;) {
      off += (rem % from[j]) * st[j];
      rem /= from[j];
    }
    out[idx] = off;
  }
  return out;
}

}  // namespace

ErasureParams::ErasureParams(double p, std::size_t d) : p_(p), d_(d) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("erasure probability p must lie in [0, 1]");
  if (d < 2) throw ArgumentError("input dimension d must be >= 2");
}

ErasurePattern::ErasurePattern(std::uint32_t bits, std::size_t n) : bits_(bits), n_(n) {
  if (n > 32 || (n < 32 && (bits >> n) != 0)) throw ArgumentError("ErasurePattern: bits beyond n uses");
}

std::size_t ErasurePattern::weight() const noexcept {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<std::size_t> ErasurePattern::erased_systems() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if (erased(j)) out.push_back(j + 1);
  return out;
}

std::vector<std::size_t> ErasurePattern::surviving_systems() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if (!erased(j)) out.push_back(j + 1);
  return out;
}

double pattern_weight(double p, std::size_t n, std::size_t k) {
  return std::pow(1.0 - p, static_cast<double>(n - k)) * std::pow(p, static_cast<double>(k));
}

DensityMatrix apply_erasure(const DensityMatrix& rho, const ErasureParams& params) {
  if (rho.layout().size() != 1 || rho.dim() != params.d())
    throw ArgumentError("apply_erasure: input must be a single system of dimension d");
  return apply_erasure_on(rho, 0, params);
}

DensityMatrix apply_erasure_on(const DensityMatrix& rho, std::size_t k, const ErasureParams& params) {
  const auto& dims = rho.layout().dims();
  if (k >= dims.size()) throw ArgumentError("apply_erasure_on: subsystem index out of range");
  if (dims[k] != params.d()) throw ArgumentError("apply_erasure_on: subsystem dimension is not d");
  auto out_dims = dims;
  out_dims[k] = params.d() + 1;
  const SubsystemLayout out_layout(out_dims);
  const auto n_out = static_cast<Eigen::Index>(out_layout.total());
  Matrix out = Matrix::Zero(n_out, n_out);

  const double keep = 1.0 - params.p();
  if (keep > 0.0) {
    const auto map = embed_indices(dims, out_dims);
    const Matrix& m = rho.matrix();
    for (std::size_t i = 0; i < map.size(); ++i)
      for (std::size_t j = 0; j < map.size(); ++j)
        out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
            keep * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  if (params.p() > 0.0) {
    // Tr_k(rho) placed beside the flag |e> on subsystem k.
    const auto rest = complement(rho.layout(), std::vector<std::size_t>{k});
    const DensityMatrix reduced = partial_trace(rho, rest);
    std::vector<std::size_t> rest_dims;
    for (auto r : rest) rest_dims.push_back(dims[r]);
    const auto st = strides_of(out_dims);
    std::vector<std::size_t> rest_out_dims;
    for (auto r : rest) rest_out_dims.push_back(out_dims[r]);
    // Flat output index of each reduced index, with digit k fixed to d.
    std::vector<std::size_t> map(reduced.dim());
    for (std::size_t idx = 0; idx < map.size(); ++idx) {
      std::size_t rem = idx;
      std::size_t off = params.d() * st[k];
      for (std::size_t j = rest.size(); j-- > 0;) {
        off += (rem % rest_dims[j]) * st[rest[j]];
        rem /= rest_dims[j];
      }
      map[idx] = off;
    }
    const Matrix& r = reduced.matrix();
    for (std::size_t i = 0; i < map.size(); ++i)
      for (std::size_t j = 0; j < map.size(); ++j)
        out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) +=
            params.p() * r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return DensityMatrix::trusted(std::move(out), out_layout);
}

DensityMatrix apply_channel_uses(const DensityMatrix& rho, const ErasureParams& params) {
  DensityMatrix out = rho;
  for (std::size_t k = 1; k < rho.layout().size(); ++k) out = apply_erasure_on(out, k, params);
  return out;
}

std::size_t code_uses(const PureState& psi, const ErasureParams& params) {
  const auto& dims = psi.layout().dims();
  if (dims.size() < 2) throw ArgumentError("code state needs a reference and at least one channel input");
  for (std::size_t k = 1; k < dims.size(); ++k)
    if (dims[k] != params.d())
      throw ArgumentError("code state layout must be [M, d, ..., d] with d = " + std::to_string(params.d()));
  return dims.size() - 1;
}

BranchDecomposition branch_decompose(const PureState& psi, const ErasureParams& params) {
  const std::size_t n = code_uses(psi, params);
  if (n > kMaxBranchUses)
    throw ResourceError("branch_uses", "branch enumeration supports at most 20 channel uses");
  BranchDecomposition out;
  out.uses = n;
  out.d = params.d();
  const std::uint32_t count = 1U << n;
  out.entries.reserve(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    ErasurePattern pattern(bits, n);
    auto keep = pattern.surviving_systems();
    keep.insert(keep.begin(), 0);
    const double w = pattern_weight(params.p(), n, pattern.weight());
    out.entries.push_back(BranchEntry{pattern, w, reduced_state(psi, keep)});
  }
  return out;
}

DensityMatrix reconstruct_output(const BranchDecomposition& decomposition, std::size_t m) {
  const std::size_t n = decomposition.uses;
  const std::size_t d = decomposition.d;
  std::vector<std::size_t> out_dims(n + 1, d + 1);
  out_dims[0] = m;
  const SubsystemLayout out_layout(out_dims);
  const auto st = strides_of(out_dims);
  const auto total = static_cast<Eigen::Index>(out_layout.total());
  Matrix out = Matrix::Zero(total, total);
  for (const auto& e : decomposition.entries) {
    if (e.weight == 0.0) continue;
    const auto surv = e.pattern.surviving_systems();
    std::size_t flag_offset = 0;
    for (auto s : e.pattern.erased_systems()) flag_offset += d * st[s];
    std::vector<std::size_t> bdims{m};
    std::vector<std::size_t> bsys{0};
    for (auto s : surv) {
      bdims.push_back(d);
      bsys.push_back(s);
    }
    std::size_t btotal = 1;
    for (auto x : bdims) btotal *= x;
    std::vector<std::size_t> map(btotal);
    for (std::size_t idx = 0; idx < btotal; ++idx) {
      std::size_t rem = idx;
      std::size_t off = flag_offset;
      for (std::size_t j = bdims.size(); j-- > 0;) {
        off += (rem % bdims[j]) * st[bsys[j]];
        rem /= bdims[j];
      }
      map[idx] = off;
    }
    const Matrix& b = e.branch.matrix();
    for (std::size_t i = 0; i < btotal; ++i)
      for (std::size_t j = 0; j < btotal; ++j)
        out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) +=
            e.weight * b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return DensityMatrix::trusted(std::move(out), out_layout);
}

double quantum_capacity(const ErasureParams& params) {
  return std::max(0.0, (1.0 - 2.0 * params.p()) * std::log2(static_cast<double>(params.d())));
}

double classical_capacity(const ErasureParams& params) {
  return (1.0 - params.p()) * std::log2(static_cast<double>(params.d()));
}

}  // namespace esc
