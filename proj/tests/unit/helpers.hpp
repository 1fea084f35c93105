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

// Test-only utilities. The generator here is deliberately unrelated to the
// library's sampler so that statistical checks do not share its code path.

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/QR>

#include "esc/qcore.hpp"

namespace esc::test {

// xoshiro256** seeded by splitmix, with a Box-Muller normal.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& s : s_) {
      seed += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      s = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
  }

  cplx complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

inline PureState random_pure(const SubsystemLayout& layout, Rng& rng) {
  Vector v = ginibre(static_cast<Eigen::Index>(layout.total()), 1, rng).col(0);
  v.normalize();
  return PureState(v, layout);
}

/// Random density matrix of the given rank (0 = full).
inline Matrix random_density(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  if (rank == 0) rank = dim;
  const Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

/// Channel in -> out as a random isometry into out (x) env followed by the
/// partial trace over env.
class RandomChannel {
 public:
  RandomChannel(Eigen::Index in, Eigen::Index out, Eigen::Index env, Rng& rng) : out_(out), env_(env) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(out * env, in, rng));
    v_ = qr.householderQ() * Matrix::Identity(out * env, in);
  }

  Matrix operator()(const Matrix& rho) const {
    const Matrix big = v_ * rho * v_.adjoint();
    Matrix r = Matrix::Zero(out_, out_);
    for (Eigen::Index i = 0; i < out_; ++i)
      for (Eigen::Index j = 0; j < out_; ++j)
        for (Eigen::Index e = 0; e < env_; ++e) r(i, j) += big(i * env_ + e, j * env_ + e);
    return r;
  }

 private:
  Eigen::Index out_;
  Eigen::Index env_;
  Matrix v_;
};

inline PureState bell() { return maximally_entangled(2); }

inline PureState ghz3() {
  Vector v = Vector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return PureState(v, SubsystemLayout({2, 2, 2}));
}

inline PureState basis_state(const SubsystemLayout& layout, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(v, layout);
}

/// Two Bell pairs arranged as a code state on [4, 2, 2].
inline PureState two_bell_code() {
  const PureState pair = tensor(bell(), bell());
  const std::vector<std::size_t> order{0, 2, 1, 3};
  const PureState p = permute(pair, order);
  return PureState(p.amplitudes(), SubsystemLayout({4, 2, 2}));
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace esc::test
