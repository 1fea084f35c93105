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

#include "esc/oracle.hpp"

#include <algorithm>
#include <tuple>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "esc/error.hpp"
#include "esc/numeric.hpp"

namespace esc {
namespace {

using Eigen::Index;

Index ix(std::size_t v) { return static_cast<Index>(v); }

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// I_out (x) A (x) I  sandwich: (I (x) A) C (I (x) A^dag) for block-structured C.
Matrix sandwich_in(const Matrix& c, const Matrix& a, std::size_t out_dim, std::size_t in_dim) {
  Matrix out(c.rows(), c.cols());
  const Index k = ix(in_dim);
  for (Index x = 0; x < ix(out_dim); ++x)
    for (Index y = 0; y < ix(out_dim); ++y)
      out.block(x * k, y * k, k, k) = a * c.block(x * k, y * k, k, k) * a.adjoint();
  return out;
}

// T^{-1/2} for a positive definite Hermitian T.
Matrix inverse_sqrt(const Matrix& t) {
  const auto es = eigh(hermitian_part(t));
  const RealVector ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) throw NumericalError("inverse_sqrt: operator is not positive definite", 0, 0);
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
         es.eigenvectors().adjoint();
}

// Makes a PSD operator on out (x) in trace preserving.
Matrix normalise_trace_preserving(const Matrix& c, std::size_t out_dim, std::size_t in_dim) {
  const Matrix t = trace_out_first(c, out_dim, in_dim);
  return hermitian_part(sandwich_in(c, inverse_sqrt(t), out_dim, in_dim));
}

// Real coordinates of Hermitian k x k matrices: k diagonal entries, then for
// each j < l a symmetric (E_jl + E_lj) and an antisymmetric i(E_jl - E_lj)
// generator. coords(Y)_r = Re Tr{E_r Y}.
class HermitianBasis {
 public:
  explicit HermitianBasis(std::size_t k) : k_(ix(k)) {
    for (Index j = 0; j < k_; ++j)
      for (Index l = j + 1; l < k_; ++l) pairs_.emplace_back(j, l);
  }

  Index size() const { return k_ * k_; }

  Matrix to_matrix(const RealVector& z) const {
    Matrix m = Matrix::Zero(k_, k_);
    for (Index j = 0; j < k_; ++j) m(j, j) = z(j);
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
      const auto [j, l] = pairs_[r];
      const cplx v(z(k_ + 2 * ix(r)), z(k_ + 2 * ix(r) + 1));
      m(j, l) = v;
      m(l, j) = std::conj(v);
    }
    return m;
  }

  RealVector from_matrix(const Matrix& m) const {
    RealVector z(size());
    for (Index j = 0; j < k_; ++j) z(j) = m(j, j).real();
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
      const auto [j, l] = pairs_[r];
      const cplx v = 0.5 * (m(j, l) + std::conj(m(l, j)));
      z(k_ + 2 * ix(r)) = v.real();
      z(k_ + 2 * ix(r) + 1) = v.imag();
    }
    return z;
  }

  RealVector coords(const Matrix& y) const {
    RealVector c(size());
    for (Index j = 0; j < k_; ++j) c(j) = y(j, j).real();
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
      const auto [j, l] = pairs_[r];
      const cplx sym = y(l, j) + y(j, l);
      const cplx anti = cplx(0, 1) * (y(l, j) - y(j, l));
      c(k_ + 2 * ix(r)) = sym.real();
      c(k_ + 2 * ix(r) + 1) = anti.real();
    }
    return c;
  }

  // Generator r expressed through elementary pairs: returns the list of
  // (p, q, coefficient) with E_r = sum coeff * e_p e_q^T.
  std::vector<std::tuple<Index, Index, cplx>> generator(Index r) const {
    if (r < k_) return {{r, r, 1.0}};
    const auto [j, l] = pairs_[static_cast<std::size_t>((r - k_) / 2)];
    if ((r - k_) % 2 == 0) return {{j, l, 1.0}, {l, j, 1.0}};
    return {{j, l, cplx(0, 1)}, {l, j, cplx(0, -1)}};
  }

 private:
  Index k_;
  std::vector<std::pair<Index, Index>> pairs_;
};

struct BarrierPoint {
  Matrix s;   // I (x) Z - X
  Matrix w;   // S^{-1}
  double phi; // t Tr Z - log det S
};

// Returns false when S is not positive definite.
bool evaluate(const Matrix& x, const Matrix& z, std::size_t out_dim, double t, BarrierPoint& pt,
              bool need_inverse) {
  const Index k = z.rows();
  const Index n = x.rows();
  Matrix s = -x;
  for (Index a = 0; a < ix(out_dim); ++a) s.block(a * k, a * k, k, k) += z;
  s = hermitian_part(s);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) return false;
  const Matrix l = llt.matrixL();
  double logdet = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double di = l(i, i).real();
    if (!(di > 0.0)) return false;
    logdet += 2.0 * std::log(di);
  }
  pt.phi = t * z.trace().real() - logdet;
  if (need_inverse) pt.w = hermitian_part(llt.solve(Matrix::Identity(n, n)));
  pt.s = std::move(s);
  return true;
}

}  // namespace

Matrix trace_out_first(const Matrix& m, std::size_t out_dim, std::size_t in_dim) {
  const Index k = ix(in_dim);
  if (m.rows() != ix(out_dim * in_dim) || m.cols() != m.rows())
    throw ArgumentError("trace_out_first: operator side must be out_dim * in_dim");
  Matrix t = Matrix::Zero(k, k);
  for (Index a = 0; a < ix(out_dim); ++a) t += m.block(a * k, a * k, k, k);
  return t;
}

ChoiOperator::ChoiOperator(Matrix matrix, std::size_t in_dim, std::size_t out_dim)
    : c_(std::move(matrix)), in_(in_dim), out_(out_dim) {
  if (in_ < 1 || out_ < 1) throw ArgumentError("ChoiOperator: dimensions must be >= 1");
  if (c_.rows() != ix(in_ * out_) || c_.cols() != c_.rows())
    throw ArgumentError("ChoiOperator: matrix side must be in_dim * out_dim");
  if (hermiticity_defect(c_) > kChoiTol) throw InvariantError("ChoiOperator: not Hermitian");
  if (eigh(hermitian_part(c_)).eigenvalues().minCoeff() < -kChoiTol)
    throw InvariantError("ChoiOperator: not positive semidefinite");
  const Matrix t = trace_out_first(c_, out_, in_);
  if ((t - Matrix::Identity(ix(in_), ix(in_))).cwiseAbs().maxCoeff() > kChoiTol)
    throw InvariantError("ChoiOperator: not trace preserving");
}

ChoiOperator ChoiOperator::identity(std::size_t dim) {
  const Index d = ix(dim);
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return ChoiOperator(v * v.adjoint(), dim, dim);
}

ChoiOperator ChoiOperator::random(std::size_t in_dim, std::size_t out_dim, std::uint64_t seed,
                                  std::size_t rank) {
  if (in_dim < 1 || out_dim < 1) throw ArgumentError("ChoiOperator::random: dimensions must be >= 1");
  if (rank == 0) rank = in_dim * out_dim;
  if (rank * out_dim < in_dim)
    throw ArgumentError("ChoiOperator::random: rank * out_dim must be >= in_dim for a trace preserving map");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(ix(in_dim * out_dim), ix(rank));
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return ChoiOperator(normalise_trace_preserving(g * g.adjoint(), out_dim, in_dim), in_dim, out_dim);
}

Matrix ChoiOperator::apply(const Matrix& rho) const {
  if (rho.rows() != ix(in_) || rho.cols() != ix(in_)) throw ArgumentError("ChoiOperator::apply: wrong input side");
  const Index k = ix(in_);
  Matrix out(ix(out_), ix(out_));
  // L(rho)_{xy} = Tr{C_{xy} rho^T}
  for (Index x = 0; x < ix(out_); ++x)
    for (Index y = 0; y < ix(out_); ++y)
      out(x, y) = (c_.block(x * k, y * k, k, k).cwiseProduct(rho)).sum();
  return out;
}

DensityMatrix apply_decoder(const ChoiOperator& decoder, const DensityMatrix& joint, std::size_t ref_dim) {
  const std::size_t in = decoder.in_dim();
  if (joint.dim() != ref_dim * in) throw ArgumentError("apply_decoder: joint dimension must be ref_dim * in_dim");
  const Index k = ix(in);
  const Index o = ix(decoder.out_dim());
  const Matrix& r = joint.matrix();
  Matrix out(ix(ref_dim) * o, ix(ref_dim) * o);
  for (Index a = 0; a < ix(ref_dim); ++a)
    for (Index b = 0; b < ix(ref_dim); ++b)
      out.block(a * o, b * o, o, o) = decoder.apply(r.block(a * k, b * k, k, k));
  return DensityMatrix::trusted(hermitian_part(out), SubsystemLayout({ref_dim, decoder.out_dim()}));
}

Matrix entanglement_objective(const DensityMatrix& joint, std::size_t m) {
  if (m < 2) throw ArgumentError("entanglement fidelity: m must be >= 2");
  if (joint.dim() % m != 0 || joint.layout().dim(0) != m)
    throw ArgumentError("entanglement fidelity: first subsystem must have dimension m");
  return joint.matrix().transpose() / static_cast<double>(m);
}

double decoded_fidelity(const ChoiOperator& decoder, const DensityMatrix& joint, std::size_t m) {
  if (decoder.out_dim() != m || joint.dim() != m * decoder.in_dim())
    throw ArgumentError("decoded_fidelity: decoder must map the non-reference part to dimension m");
  const Matrix x = entanglement_objective(joint, m);
  return std::clamp((decoder.matrix().cwiseProduct(x.transpose())).sum().real(), 0.0, 1.0);
}

SdpResult solve_decoder_sdp(const Matrix& objective, std::size_t out_dim, std::size_t in_dim,
                            const SdpOptions& options) {
  const std::size_t total = out_dim * in_dim;
  if (objective.rows() != ix(total) || objective.cols() != ix(total))
    throw ArgumentError("solve_decoder_sdp: objective side must be out_dim * in_dim");
  if (hermiticity_defect(objective) > kStateTol) throw ArgumentError("solve_decoder_sdp: objective not Hermitian");
  const Matrix x = hermitian_part(objective);
  const HermitianBasis basis(in_dim);
  const Index q = basis.size();
  const Index k = ix(in_dim);
  const Index oblocks = ix(out_dim);
  const double barrier_dim = static_cast<double>(total);

  const double top = eigh(x).eigenvalues().maxCoeff();
  Matrix z = (std::max(top, 0.0) + 1.0) * Matrix::Identity(k, k);
  double t = 1.0;
  constexpr double kGrowth = 10.0;

  SdpResult best;
  best.primal = -std::numeric_limits<double>::infinity();
  best.dual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;

  BarrierPoint pt;
  while (iterations < options.max_iterations) {
    if (!evaluate(x, z, out_dim, t, pt, true))
      throw NumericalError("decoder SDP: left the dual interior", best.primal, best.dual);

    // Newton centering for the current t.
    for (int inner = 0; inner < 500 && iterations < options.max_iterations; ++inner) {
      ++iterations;
      const Matrix wp = trace_out_first(pt.w, out_dim, in_dim);
      const RealVector grad = basis.coords(t * Matrix::Identity(k, k) - wp);

      // G[p][q] = Tr_out(W (I (x) e_p e_q^T) W).
      std::vector<Matrix> g(static_cast<std::size_t>(k * k), Matrix::Zero(k, k));
      for (Index a = 0; a < oblocks; ++a)
        for (Index b = 0; b < oblocks; ++b) {
          const auto wba = pt.w.block(b * k, a * k, k, k);
          const auto wab = pt.w.block(a * k, b * k, k, k);
          for (Index p = 0; p < k; ++p)
            for (Index qq = 0; qq < k; ++qq)
              g[static_cast<std::size_t>(p * k + qq)].noalias() += wba.col(p) * wab.row(qq);
        }
      Eigen::MatrixXd hess(q, q);
      for (Index r = 0; r < q; ++r) {
        Matrix y = Matrix::Zero(k, k);
        for (const auto& [p, qq, coef] : basis.generator(r)) y += coef * g[static_cast<std::size_t>(p * k + qq)];
        hess.col(r) = basis.coords(y);
      }
      hess = 0.5 * (hess + hess.transpose()).eval();
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      RealVector step = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        step = -grad / std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      }
      const double decrement = -grad.dot(step);
      if (decrement <= 1e-9) break;

      const RealVector z0 = basis.from_matrix(z);
      double s = 1.0;
      bool accepted = false;
      BarrierPoint trial;
      while (s > 1e-14) {
        const Matrix zt = basis.to_matrix(z0 + s * step);
        if (evaluate(x, zt, out_dim, t, trial, false) && trial.phi <= pt.phi - 0.25 * s * decrement) {
          z = zt;
          accepted = true;
          break;
        }
        s *= 0.5;
      }
      if (!accepted) break;
      evaluate(x, z, out_dim, t, pt, true);
      if (decrement <= 1e-7 && s == 1.0) break;
    }

    // Certificates: a feasible decoder from W/t and the current Z.
    const Matrix c = normalise_trace_preserving(pt.w / t, out_dim, in_dim);
    const double primal = (c.cwiseProduct(x.transpose())).sum().real();
    double dual = z.trace().real();
    const double smin = eigh(pt.s).eigenvalues().minCoeff();
    if (smin < 0.0) dual += static_cast<double>(in_dim) * (-smin);
    if (primal > best.primal) {
      best.primal = primal;
      best.decoder = c;
    }
    if (dual < best.dual) {
      best.dual = dual;
      best.dual_z = z;
      if (smin < 0.0) best.dual_z += (-smin) * Matrix::Identity(k, k);
    }
    best.iterations = iterations;
    if (best.dual - best.primal <= options.tol) return best;
    if (barrier_dim / t < 1e-3 * options.tol) break;
    t *= kGrowth;
  }
  throw NumericalError("decoder SDP: duality gap did not close", best.primal, best.dual);
}

SdpResult decode_entanglement(const DensityMatrix& joint, std::size_t m, double tol) {
  if (joint.dim() > kMaxOracleJointDim)
    throw ResourceError("oracle_joint_dim", "joint dimension exceeds 256");
  const Matrix x = entanglement_objective(joint, m);
  SdpOptions opts;
  opts.tol = tol;
  return solve_decoder_sdp(x, m, joint.dim() / m, opts);
}

double max_entanglement_fidelity(const DensityMatrix& joint, std::size_t m, double tol) {
  return std::clamp(decode_entanglement(joint, m, tol).primal, 0.0, 1.0);
}

double pure_branch_fidelity(std::span<const double> schmidt, std::size_t m) {
  if (m < 2) throw ArgumentError("pure_branch_fidelity: m must be >= 2");
  if (schmidt.empty()) throw ArgumentError("pure_branch_fidelity: empty spectrum");
  CompensatedSum total;
  for (double x : schmidt) {
    if (!(x >= -1e-12)) throw ArgumentError("pure_branch_fidelity: negative Schmidt coefficient");
    total.add(x);
  }
  if (std::abs(total.value() - 1.0) > 1e-10) throw ArgumentError("pure_branch_fidelity: spectrum does not sum to 1");
  std::vector<double> s(schmidt.begin(), schmidt.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  double root_sum = 0.0;
  for (std::size_t j = 0; j < std::min(m, s.size()); ++j) root_sum += std::sqrt(std::max(s[j], 0.0));
  return std::min(1.0, root_sum * root_sum / static_cast<double>(m));
}

namespace {

void check_oracle_guards(const PureState& psi, const CodeParams& code, const ErasureParams& params,
                         std::size_t max_uses) {
  const std::size_t n = code_uses(psi, params);
  if (n != code.n() || psi.layout().dim(0) != code.m())
    throw ArgumentError("oracle: state layout must be [M, d x n] for the given code");
  if (n > max_uses)
    throw ResourceError("oracle_uses", "oracle supports n <= " + std::to_string(max_uses));
  if (params.d() != 2) throw ResourceError("oracle_input_dim", "oracle supports d = 2 only");
  if (code.m() > 8) throw ResourceError("oracle_code_dim", "oracle supports M <= 8");
}

}  // namespace

CodeFidelity optimal_code_fidelity(const PureState& psi, const CodeParams& code,
                                   const ErasureParams& params, double tol) {
  check_oracle_guards(psi, code, params, 3);
  const auto m = static_cast<std::size_t>(code.m());
  const auto decomposition = branch_decompose(psi, params);
  CodeFidelity out;
  CompensatedSum primal, dual;
  for (const auto& e : decomposition.entries) {
    if (e.weight == 0.0) continue;
    const auto r = decode_entanglement(e.branch, m, tol);
    primal.add(e.weight * r.primal);
    dual.add(e.weight * r.dual);
    out.max_gap = std::max(out.max_gap, r.gap());
    out.branches.push_back(BranchFidelity{e.pattern, e.weight, r.primal, r.dual});
  }
  out.primal = std::clamp(primal.value(), 0.0, 1.0);
  out.dual = dual.value();
  return out;
}

CodeFidelity global_code_fidelity(const PureState& psi, const CodeParams& code,
                                  const ErasureParams& params, double tol) {
  check_oracle_guards(psi, code, params, 2);
  const auto m = static_cast<std::size_t>(code.m());
  const DensityMatrix output = apply_channel_uses(DensityMatrix::from_pure(psi), params);
  const auto r = decode_entanglement(output, m, tol);
  CodeFidelity out;
  out.primal = std::clamp(r.primal, 0.0, 1.0);
  out.dual = r.dual;
  out.max_gap = r.gap();
  return out;
}

double classical_ml_success(std::span<const Codeword> codebook, std::size_t d, double p) {
  if (codebook.empty()) throw ArgumentError("classical_ml_success: empty codebook");
  const std::size_t n = codebook.front().size();
  if (n < 1 || n > 20) throw ArgumentError("classical_ml_success: codeword length must be in [1, 20]");
  for (const auto& w : codebook) {
    if (w.size() != n) throw ArgumentError("classical_ml_success: codewords must have equal length");
    for (auto s : w)
      if (s >= d) throw ArgumentError("classical_ml_success: symbol out of range");
  }
  const ErasureParams params(p, d);
  CompensatedSum total;
  for (std::uint32_t bits = 0; bits < (1U << n); ++bits) {
    const ErasurePattern pattern(bits, n);
    const double w = pattern_weight(p, n, pattern.weight());
    if (w == 0.0) continue;
    std::set<Codeword> seen;
    for (const auto& word : codebook) {
      Codeword visible;
      for (std::size_t j = 0; j < n; ++j)
        if (!pattern.erased(j)) visible.push_back(word[j]);
      seen.insert(std::move(visible));
    }
    total.add(w * static_cast<double>(seen.size()) / static_cast<double>(codebook.size()));
  }
  return total.value();
}

ClassicalOptimum optimal_classical_success(std::size_t n, std::size_t d, std::size_t m, double p) {
  if (n < 1 || n > 3) throw ResourceError("classical_oracle_uses", "exhaustive classical oracle supports n <= 3");
  if (m < 2 || m > 8) throw ResourceError("classical_oracle_messages", "exhaustive classical oracle supports 2 <= M <= 8");
  const ErasureParams params(p, d);
  std::size_t words = 1;
  for (std::size_t j = 0; j < n; ++j) words *= d;
  if (words > 64) throw ResourceError("classical_oracle_alphabet", "exhaustive classical oracle supports d^n <= 64");

  auto word_of = [&](std::size_t idx) {
    Codeword w(n);
    for (std::size_t j = n; j-- > 0;) {
      w[j] = idx % d;
      idx /= d;
    }
    return w;
  };

  ClassicalOptimum best;
  if (m >= words) {
    // Every distinct word is used; repeats cannot be told apart.
    for (std::size_t i = 0; i < m; ++i) best.codebook.push_back(word_of(i % words));
    best.success = classical_ml_success(best.codebook, d, p);
    return best;
  }
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  best.success = -1.0;
  while (true) {
    std::vector<Codeword> book;
    for (auto i : pick) book.push_back(word_of(i));
    const double s = classical_ml_success(book, d, p);
    if (s > best.success + 1e-15) {
      best.success = s;
      best.codebook = std::move(book);
    }
    // Next combination in lexicographic order.
    std::size_t i = m;
    while (i-- > 0 && pick[i] == words - m + i) {
    }
    if (i == static_cast<std::size_t>(-1)) break;
    ++pick[i];
    for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace esc
