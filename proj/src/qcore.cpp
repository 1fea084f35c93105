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

#include "esc/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "esc/error.hpp"

namespace esc {
namespace {

std::vector<std::size_t> strides(const SubsystemLayout& layout) {
  std::vector<std::size_t> s(layout.size(), 1);
  for (std::size_t j = layout.size(); j-- > 1;) s[j - 1] = s[j] * layout.dim(j);
  return s;
}

// Flat-index offsets contributed by the digits of `subset`, enumerated in
// row-major order over the subset's own dimensions.
std::vector<std::size_t> digit_offsets(const SubsystemLayout& layout,
                                       std::span<const std::size_t> subset) {
  const auto stride = strides(layout);
  std::size_t count = 1;
  for (auto k : subset) count *= layout.dim(k);
  std::vector<std::size_t> offs(count, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rem = idx;
    std::size_t off = 0;
    for (std::size_t j = subset.size(); j-- > 0;) {
      const std::size_t dj = layout.dim(subset[j]);
      off += (rem % dj) * stride[subset[j]];
      rem /= dj;
    }
    offs[idx] = off;
  }
  return offs;
}

// Amplitudes arranged as a (kept x traced) matrix.
Matrix split_amplitudes(const PureState& psi, std::span<const std::size_t> keep,
                        std::span<const std::size_t> traced) {
  const auto ok = digit_offsets(psi.layout(), keep);
  const auto ot = digit_offsets(psi.layout(), traced);
  Matrix out(static_cast<Eigen::Index>(ok.size()), static_cast<Eigen::Index>(ot.size()));
  const auto& a = psi.amplitudes();
  for (std::size_t i = 0; i < ok.size(); ++i)
    for (std::size_t t = 0; t < ot.size(); ++t)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) =
          a(static_cast<Eigen::Index>(ok[i] + ot[t]));
  return out;
}

void check_square(const Matrix& m, std::size_t n, const char* what) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != n)
    throw ArgumentError(std::string(what) + ": matrix side does not match layout total");
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)), total_(1) {
  for (auto d : dims_) {
    if (d < 1) throw ArgumentError("SubsystemLayout: every dimension must be >= 1");
    total_ *= d;
  }
}

SubsystemLayout SubsystemLayout::restricted(std::span<const std::size_t> keep) const {
  std::vector<std::size_t> d;
  d.reserve(keep.size());
  for (auto k : normalize_subset(*this, keep)) d.push_back(dim(k));
  return SubsystemLayout(std::move(d));
}

std::vector<std::size_t> normalize_subset(const SubsystemLayout& layout,
                                          std::span<const std::size_t> subset) {
  std::vector<std::size_t> s(subset.begin(), subset.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw ArgumentError("subsystem index listed twice");
  if (!s.empty() && s.back() >= layout.size())
    throw ArgumentError("subsystem index " + std::to_string(s.back()) + " out of range for " +
                        std::to_string(layout.size()) + " subsystems");
  return s;
}

std::vector<std::size_t> complement(const SubsystemLayout& layout,
                                    std::span<const std::size_t> subset) {
  const auto s = normalize_subset(layout, subset);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < layout.size(); ++k)
    if (!std::binary_search(s.begin(), s.end(), k)) out.push_back(k);
  return out;
}

PureState::PureState(Vector amplitudes, SubsystemLayout layout)
    : amps_(std::move(amplitudes)), layout_(std::move(layout)) {
  if (static_cast<std::size_t>(amps_.size()) != layout_.total())
    throw ArgumentError("PureState: amplitude count does not match layout");
  if (std::abs(amps_.norm() - 1.0) > kStateTol)
    throw ArgumentError("PureState: vector is not unit norm");
}

DensityMatrix::DensityMatrix(Matrix matrix, SubsystemLayout layout, NoCheck)
    : m_(std::move(matrix)), layout_(std::move(layout)) {
  check_square(m_, layout_.total(), "DensityMatrix");
  if (hermiticity_defect(m_) > kStateTol) throw InvariantError("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace().real() - 1.0) > kStateTol)
    throw InvariantError("DensityMatrix: trace is not 1");
}

DensityMatrix::DensityMatrix(Matrix matrix, SubsystemLayout layout)
    : DensityMatrix(std::move(matrix), std::move(layout), NoCheck{}) {
  if (eigh(m_).eigenvalues().minCoeff() < -kStateTol)
    throw InvariantError("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::trusted(Matrix matrix, SubsystemLayout layout) {
  return DensityMatrix(std::move(matrix), std::move(layout), NoCheck{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return trusted(psi.projector(), psi.layout());
}

DensityMatrix DensityMatrix::maximally_mixed(const SubsystemLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.total());
  return trusted(Matrix::Identity(n, n) / static_cast<double>(n), layout);
}

PureState haar_random_pure(const SubsystemLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(layout.total()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  v /= v.norm();
  return PureState(std::move(v), layout);
}

Matrix haar_random_isometry(std::size_t in, std::size_t out, std::uint64_t seed) {
  if (in < 1 || out < in) throw ArgumentError("haar_random_isometry: need 1 <= in <= out");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(out);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0) q.col(j) *= rjj / mag;
  }
  return q.leftCols(static_cast<Eigen::Index>(in));
}

PureState maximally_entangled(std::size_t m) {
  if (m < 1) throw ArgumentError("maximally_entangled: m must be >= 1");
  const auto mm = static_cast<Eigen::Index>(m);
  Vector v = Vector::Zero(mm * mm);
  for (Eigen::Index i = 0; i < mm; ++i) v(i * mm + i) = 1.0 / std::sqrt(static_cast<double>(m));
  return PureState(std::move(v), SubsystemLayout({m, m}));
}

PureState tensor(const PureState& a, const PureState& b) {
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  Vector v(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v.segment(i * y.size(), y.size()) = x(i) * y;
  auto dims = a.layout().dims();
  dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
  v /= v.norm();
  return PureState(std::move(v), SubsystemLayout(std::move(dims)));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  auto dims = a.layout().dims();
  dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
  return DensityMatrix::trusted(std::move(out), SubsystemLayout(std::move(dims)));
}

PureState permute(const PureState& psi, std::span<const std::size_t> order) {
  const auto& layout = psi.layout();
  if (order.size() != layout.size()) throw ArgumentError("permute: order has wrong length");
  std::vector<std::size_t> seen(order.begin(), order.end());
  std::sort(seen.begin(), seen.end());
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (seen[k] != k) throw ArgumentError("permute: order is not a permutation");
  const auto offs = digit_offsets(layout, order);
  Vector v(psi.amplitudes().size());
  for (std::size_t i = 0; i < offs.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = psi.amplitudes()(static_cast<Eigen::Index>(offs[i]));
  return PureState(std::move(v), layout.restricted(order));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& layout = rho.layout();
  const auto k = normalize_subset(layout, keep);
  if (k.size() == layout.size()) return rho;
  const auto t = complement(layout, k);
  const auto ok = digit_offsets(layout, k);
  const auto ot = digit_offsets(layout, t);
  const Matrix& m = rho.matrix();
  const auto n = static_cast<Eigen::Index>(ok.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      cplx acc = 0;
      for (auto off : ot)
        acc += m(static_cast<Eigen::Index>(ok[a] + off), static_cast<Eigen::Index>(ok[b] + off));
      out(a, b) = acc;
    }
  return DensityMatrix::trusted(std::move(out), layout.restricted(k));
}

DensityMatrix reduced_state(const PureState& psi, std::span<const std::size_t> keep) {
  const auto k = normalize_subset(psi.layout(), keep);
  const auto t = complement(psi.layout(), k);
  const Matrix split = split_amplitudes(psi, k, t);
  Matrix rho = split * split.adjoint();
  rho = (rho + rho.adjoint()).eval() * 0.5;
  return DensityMatrix::trusted(std::move(rho), psi.layout().restricted(k));
}

RealVector marginal_spectrum(const PureState& psi, std::span<const std::size_t> subset) {
  const auto k = normalize_subset(psi.layout(), subset);
  if (k.empty() || k.size() == psi.layout().size()) return RealVector::Ones(1);
  const auto t = complement(psi.layout(), k);
  const Matrix split = split_amplitudes(psi, k, t);
  Matrix gram = split.rows() <= split.cols() ? Matrix(split * split.adjoint())
                                             : Matrix(split.adjoint() * split);
  gram = (gram + gram.adjoint()).eval() * 0.5;
  RealVector ev = eigh(gram).eigenvalues().reverse();
  for (auto& x : ev)
    if (x < kEigenClamp) x = 0.0;
  return ev;
}

double spectral_power_sum(const RealVector& spectrum, double alpha) {
  double s = 0.0;
  for (double x : spectrum)
    if (x >= kEigenClamp) s += std::pow(x, alpha);
  return s;
}

double marginal_purity(const PureState& psi, std::span<const std::size_t> subset, double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw ArgumentError("marginal_purity: alpha must lie in (1, 2]");
  return spectral_power_sum(marginal_spectrum(psi, subset), alpha);
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::SelfAdjointEigenSolver<Matrix> eigh(const Matrix& hermitian) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(hermitian);
}

RealVector spectrum(const Matrix& hermitian) {
  if (hermiticity_defect(hermitian) > kStateTol) throw InvariantError("spectrum: matrix is not Hermitian");
  const Matrix sym = (hermitian + hermitian.adjoint()) * 0.5;
  RealVector ev = eigh(sym).eigenvalues().reverse();
  for (auto& x : ev)
    if (x < 0.0 && x >= -kStateTol) x = 0.0;
  return ev;
}

RealVector spectrum(const DensityMatrix& rho) { return spectrum(rho.matrix()); }

double fidelity_with_pure(const PureState& target, const DensityMatrix& state) {
  if (target.dim() != state.dim()) throw ArgumentError("fidelity_with_pure: dimension mismatch");
  const auto& t = target.amplitudes();
  const double f = t.dot(state.matrix() * t).real();
  return std::clamp(f, 0.0, 1.0);
}

PureState parse_state_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("state file: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("re") || !j.contains("im"))
    throw ArgumentError("state file: expected object with dims, re, im");
  std::vector<std::size_t> dims;
  std::vector<double> re, im;
  try {
    for (const auto& d : j.at("dims")) {
      if (!d.is_number_integer() || d.get<long long>() < 1)
        throw ArgumentError("state file: dims must be positive integers");
      dims.push_back(d.get<std::size_t>());
    }
    re = j.at("re").get<std::vector<double>>();
    im = j.at("im").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("state file: ") + e.what());
  }
  if (dims.empty()) throw ArgumentError("state file: dims is empty");
  SubsystemLayout layout(std::move(dims));
  if (re.size() != layout.total() || im.size() != layout.total())
    throw ArgumentError("state file: re/im length must equal product(dims)");
  Vector v(static_cast<Eigen::Index>(layout.total()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > 1e-8) throw ArgumentError("state file: vector is not unit norm within 1e-8");
  v /= norm;
  return PureState(std::move(v), std::move(layout));
}

PureState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open state file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

std::string state_to_json(const PureState& psi) {
  nlohmann::json j;
  j["dims"] = psi.layout().dims();
  std::vector<double> re, im;
  for (auto a : psi.amplitudes()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

}  // namespace esc
