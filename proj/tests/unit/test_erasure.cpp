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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "esc/erasure.hpp"
#include "esc/error.hpp"
#include "helpers.hpp"

using namespace esc;
using esc::test::Rng;

namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

}  // namespace

TEST_CASE("erasure params validate") {
  CHECK_THROWS_AS(ErasureParams(-0.1, 2), ArgumentError);
  CHECK_THROWS_AS(ErasureParams(1.1, 2), ArgumentError);
  CHECK_THROWS_AS(ErasureParams(0.5, 1), ArgumentError);
  CHECK(ErasureParams(0.3, 3).complementary().p() == doctest::Approx(0.7));
}

TEST_CASE("patterns") {
  const ErasurePattern p(0b101, 3);
  CHECK(p.weight() == 2);
  CHECK(p.erased(0));
  CHECK_FALSE(p.erased(1));
  CHECK(p.erased_systems() == std::vector<std::size_t>{1, 3});
  CHECK(p.surviving_systems() == std::vector<std::size_t>{2});
  CHECK_THROWS_AS(ErasurePattern(0b1000, 3), ArgumentError);
}

TEST_CASE("apply_erasure examples") {
  const DensityMatrix pi = DensityMatrix::maximally_mixed(SubsystemLayout({2}));
  const DensityMatrix out0 = apply_erasure(pi, ErasureParams(0.0, 2));
  CHECK(out0.dim() == 3);
  CHECK(std::abs(out0.matrix()(0, 0).real() - 0.5) <= 1e-15);
  CHECK(std::abs(out0.matrix()(2, 2)) == 0.0);

  Rng rng(1);
  const DensityMatrix rho(test::random_density(2, 0, rng), SubsystemLayout({2}));
  const DensityMatrix out1 = apply_erasure(rho, ErasureParams(1.0, 2));
  Matrix flag = Matrix::Zero(3, 3);
  flag(2, 2) = 1.0;
  CHECK(test::max_abs(out1.matrix() - flag) <= 1e-15);

  const DensityMatrix out = apply_erasure(pi, ErasureParams(0.25, 2));
  Matrix expect = Matrix::Zero(3, 3);
  expect.diagonal() << 0.375, 0.375, 0.25;
  CHECK(test::max_abs(out.matrix() - expect) <= 1e-15);

  CHECK_THROWS_AS(apply_erasure(DensityMatrix::maximally_mixed(SubsystemLayout({3})), ErasureParams(0.5, 2)),
                  ArgumentError);
}

TEST_CASE("apply_erasure preserves trace and positivity") {
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    const double p = rng.uniform();
    const DensityMatrix rho(test::random_density(static_cast<Eigen::Index>(d), 1 + k % 2, rng), SubsystemLayout({d}));
    const DensityMatrix out = apply_erasure(rho, ErasureParams(p, d));
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-12);
    CHECK(spectrum(out.matrix()).minCoeff() >= -1e-12);
  }
}

TEST_CASE("complementary channel swaps the roles of p and 1-p") {
  // For the Bell state through N_p the environment receives N_{1-p} of A's
  // partner: the flag weights must swap.
  const ErasureParams e(0.3, 2);
  const DensityMatrix pi = DensityMatrix::maximally_mixed(SubsystemLayout({2}));
  const DensityMatrix a = apply_erasure(pi, e);
  const DensityMatrix b = apply_erasure(pi, e.complementary());
  CHECK(std::abs(a.matrix()(2, 2).real() - 0.3) <= 1e-15);
  CHECK(std::abs(b.matrix()(2, 2).real() - 0.7) <= 1e-15);
}

TEST_CASE("branch decomposition examples") {
  Rng rng(4);
  const PureState any = test::random_pure(SubsystemLayout({2, 2}), rng);
  const BranchDecomposition d0 = branch_decompose(any, ErasureParams(0.0, 2));
  CHECK(d0.entries.size() == 2);
  CHECK(d0.entries[0].weight == 1.0);
  CHECK(d0.entries[1].weight == 0.0);

  const PureState two = test::random_pure(SubsystemLayout({2, 2, 2}), rng);
  const BranchDecomposition d2 = branch_decompose(two, ErasureParams(0.5, 2));
  CHECK(d2.entries.size() == 4);
  for (const auto& e : d2.entries) CHECK(std::abs(e.weight - 0.25) <= 1e-15);

  const BranchDecomposition b = branch_decompose(test::bell(), ErasureParams(0.25, 2));
  CHECK(b.entries[0].pattern.bits() == 0);
  CHECK(std::abs(b.entries[0].weight - 0.75) <= 1e-15);
  CHECK(test::max_abs(b.entries[0].branch.matrix() - test::bell().projector()) <= 1e-12);
  CHECK(b.entries[1].pattern.bits() == 1);
  CHECK(std::abs(b.entries[1].weight - 0.25) <= 1e-15);
  CHECK(test::max_abs(b.entries[1].branch.matrix() - Matrix::Identity(2, 2) / 2.0) <= 1e-12);
}

TEST_CASE("branch decomposition reconstructs the n-fold channel output") {
  Rng rng(6);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m : {2, 4}) {
      std::vector<std::size_t> dims(n + 1, 2);
      dims[0] = m;
      const PureState psi = test::random_pure(SubsystemLayout(dims), rng);
      const ErasureParams params(0.2 + 0.2 * static_cast<double>(n), 2);
      const BranchDecomposition dec = branch_decompose(psi, params);
      CHECK(dec.entries.size() == (std::size_t{1} << n));
      double wsum = 0.0;
      for (const auto& e : dec.entries) {
        wsum += e.weight;
        CHECK(std::abs(e.branch.matrix().trace().real() - 1.0) <= 1e-10);
      }
      CHECK(std::abs(wsum - 1.0) <= 1e-10);
      const DensityMatrix direct = apply_channel_uses(DensityMatrix::from_pure(psi), params);
      const DensityMatrix rebuilt = reconstruct_output(dec, m);
      CHECK(test::max_abs(direct.matrix() - rebuilt.matrix()) <= 1e-10);
    }
  }
}

TEST_CASE("branch weights group into the binomial distribution") {
  for (std::size_t n : {1, 3, 5}) {
    for (double p : {0.1, 0.5, 0.8}) {
      std::vector<double> byk(n + 1, 0.0);
      const std::vector<std::size_t> dims(n + 1, 2);
      const BranchDecomposition dec = branch_decompose(haar_random_pure(SubsystemLayout(dims), 3), ErasureParams(p, 2));
      for (const auto& e : dec.entries) byk[e.pattern.weight()] += e.weight;
      for (std::size_t k = 0; k <= n; ++k)
        CHECK(std::abs(byk[k] - binomial(n, k) * std::pow(1 - p, double(n - k)) * std::pow(p, double(k))) <= 1e-12);
    }
  }
}

TEST_CASE("branch enumeration guard") {
  const std::vector<std::size_t> dims(22, 2);
  // 2^22 amplitudes is large but allocatable; the guard must fire first on
  // the number of uses.
  Vector v = Vector::Zero(1 << 22);
  v(0) = 1.0;
  const PureState psi(v, SubsystemLayout(dims));
  try {
    branch_decompose(psi, ErasureParams(0.5, 2));
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.guard() == "branch_uses");
  }
}

TEST_CASE("code_uses checks the layout") {
  CHECK(code_uses(haar_random_pure(SubsystemLayout({4, 2, 2}), 1), ErasureParams(0.5, 2)) == 2);
  CHECK_THROWS_AS(code_uses(haar_random_pure(SubsystemLayout({4, 2, 3}), 1), ErasureParams(0.5, 2)), ArgumentError);
  CHECK_THROWS_AS(code_uses(haar_random_pure(SubsystemLayout({4}), 1), ErasureParams(0.5, 2)), ArgumentError);
}

TEST_CASE("capacity formulas") {
  CHECK(quantum_capacity(ErasureParams(0.25, 2)) == doctest::Approx(0.5).epsilon(1e-15));
  for (std::size_t d : {2, 3, 7}) CHECK(quantum_capacity(ErasureParams(0.5, d)) == 0.0);
  CHECK(quantum_capacity(ErasureParams(0.0, 4)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(quantum_capacity(ErasureParams(0.8, 4)) == 0.0);
  CHECK(classical_capacity(ErasureParams(0.25, 2)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(classical_capacity(ErasureParams(1.0, 5)) == 0.0);
  CHECK(classical_capacity(ErasureParams(0.0, 2)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quantum capacity never exceeds classical capacity") {
  for (std::size_t d : {2, 3, 4}) {
    for (int k = 1; k < 20; ++k) {
      const ErasureParams e(k / 20.0, d);
      CHECK(quantum_capacity(e) < classical_capacity(e));
    }
    CHECK(quantum_capacity(ErasureParams(0.0, d)) == classical_capacity(ErasureParams(0.0, d)));
    CHECK(quantum_capacity(ErasureParams(1.0, d)) == classical_capacity(ErasureParams(1.0, d)));
  }
}
