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
#include <limits>

#include "doctest.h"
#include "esc/bounds.hpp"
#include "esc/error.hpp"
#include "esc/renyi.hpp"
#include "helpers.hpp"

using namespace esc;
using esc::test::Rng;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("renyi divergence examples") {
  Rng rng(1);
  const Matrix rho = test::random_density(3, 0, rng);
  for (double a : {1.1, 1.5, 2.0}) CHECK(std::abs(renyi_relative_entropy(rho, rho, a)) <= 1e-10);
  CHECK(std::abs(renyi_relative_entropy(diag2(1, 0), diag2(0.5, 0.5), 2.0) - 1.0) <= 1e-12);
  CHECK(std::abs(renyi_relative_entropy(diag2(0.75, 0.25), diag2(0.5, 0.5), 2.0) - 0.321928094887) <= 1e-9);
  CHECK(std::isinf(renyi_relative_entropy(diag2(0.5, 0.5), diag2(1, 0), 1.5)));
  CHECK_THROWS_AS(renyi_relative_entropy(diag2(0.5, 0.5), Matrix::Identity(3, 3), 2.0), ArgumentError);
  CHECK_THROWS_AS(renyi_relative_entropy(rho, rho, 2.5), ArgumentError);
  CHECK_THROWS_AS(check_renyi_order(1.0), ArgumentError);
}

TEST_CASE("renyi divergence is finite and nonnegative on normalised pairs") {
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const Matrix rho = test::random_density(4, 1 + k % 4, rng);
    const Matrix sigma = test::random_density(4, 0, rng);
    for (double a : {1.1, 1.5, 2.0}) {
      const double v = renyi_relative_entropy(rho, sigma, a);
      CHECK(std::isfinite(v));
      CHECK(v >= -1e-9);
    }
  }
}

TEST_CASE("data processing inequality under random channels") {
  Rng rng(3);
  int checked = 0;
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index in = 2 + k % 3;
    const Eigen::Index out = 2 + (k / 3) % 3;
    const Eigen::Index env = 1 + k % 2;
    const test::RandomChannel ch(in, out, env, rng);
    const Matrix rho = test::random_density(in, 1 + k % 2, rng);
    const Matrix sigma = test::random_density(in, 0, rng);
    for (double a : {1.1, 1.5, 2.0}) {
      const double before = renyi_relative_entropy(rho, sigma, a);
      const double after = renyi_relative_entropy(ch(rho), ch(sigma), a);
      CHECK(before >= after - 1e-9);
      ++checked;
    }
  }
  CHECK(checked == 150);
}

TEST_CASE("alpha to one converges to the relative entropy") {
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Matrix rho = test::random_density(3, 0, rng);
    const Matrix sigma = test::random_density(3, 0, rng);
    const double kl = relative_entropy(rho, sigma);
    const double e3 = std::abs(renyi_relative_entropy(rho, sigma, 1.0 + 1e-3) - kl);
    const double e4 = std::abs(renyi_relative_entropy(rho, sigma, 1.0 + 1e-4) - kl);
    // Linear convergence: the slope estimate is finite and stable.
    CHECK(e3 / 1e-3 < 50.0);
    CHECK(e4 / 1e-4 < 50.0);
    CHECK(e4 < e3);
    CHECK(std::abs(e3 / 1e-3 - e4 / 1e-4) <= 0.2 * (e3 / 1e-3) + 1e-3);
  }
}

TEST_CASE("renyi divergence is monotone in alpha") {
  Rng rng(5);
  const double grid[] = {1.01, 1.1, 1.3, 1.5, 1.8, 2.0};
  for (int k = 0; k < 20; ++k) {
    const Matrix rho = test::random_density(3, 1 + k % 3, rng);
    const Matrix sigma = test::random_density(3, 0, rng);
    for (std::size_t j = 1; j < std::size(grid); ++j)
      CHECK(renyi_relative_entropy(rho, sigma, grid[j - 1]) <= renyi_relative_entropy(rho, sigma, grid[j]) + 1e-9);
  }
}

TEST_CASE("binary flag divergence") {
  CHECK(std::abs(binary_flag_divergence(1.0, 2, 2.0) - 1.0) <= 1e-12);
  CHECK(std::abs(binary_flag_divergence(0.5, 2, 2.0) - std::log2(2.0 / 3.0)) <= 1e-12);
  CHECK(std::abs(std::log2(2.0 / 3.0) + 0.58496250072) <= 1e-10);
  CHECK(binary_flag_divergence(0.25, 2, 2.0) >= -3.0 - 1e-10);
  const BinaryFlagDistribution f(0.3, 4);
  CHECK(f.succ_ref() == 0.25);
  CHECK(f.fail_ref() == 3.75);
  CHECK_THROWS_AS(BinaryFlagDistribution(1.5, 2), ArgumentError);
  CHECK_THROWS_AS(BinaryFlagDistribution(0.5, 1), ArgumentError);
}

TEST_CASE("binary flag divergence matches the matrix divergence and its floor") {
  Rng rng(6);
  for (int k = 0; k < 40; ++k) {
    const double fid = rng.uniform();
    const std::size_t m = 2 + static_cast<std::size_t>(k % 4);
    const double a = 1.0 + 0.05 + 0.95 * rng.uniform();
    const BinaryFlagDistribution b(fid, m);
    const double direct = renyi_relative_entropy(diag2(fid, 1 - fid), diag2(b.succ_ref(), b.fail_ref()), a);
    CHECK(std::abs(binary_flag_divergence(fid, m, a) - direct) <= 1e-10);
    CHECK(binary_flag_divergence(fid, m, a) >= binary_flag_floor(fid, m, a) - 1e-10);
  }
  CHECK(std::isinf(binary_flag_floor(0.0, 2, 2.0)));
}

TEST_CASE("direct renyi coherent information examples") {
  const PureState bell = test::bell();
  CHECK(std::abs(renyi_coherent_info_direct(bell, ErasureParams(0.5, 2), 2.0) - std::log2(1.25)) <= 1e-10);
  CHECK(std::abs(renyi_coherent_info_direct(bell, ErasureParams(0.0, 2), 1.0001) - 1.0) <= 1e-6);
  // Full erasure: only the flag block survives, I_A (x) |e><e| against
  // phi_A (x) |e><e| gives log2 Tr{phi_A^2} = -1.
  CHECK(std::abs(renyi_coherent_info_direct(bell, ErasureParams(1.0, 2), 2.0) + 1.0) <= 1e-10);
}

TEST_CASE("direct evaluation guard") {
  const PureState big = haar_random_pure(SubsystemLayout({8, 2, 2, 2, 2, 2, 2}), 1);
  try {
    renyi_coherent_info_direct(big, ErasureParams(0.5, 2), 2.0);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.guard() == "direct_dense_guard");
  }
}

TEST_CASE("reference operator is I_A times the erased maximally mixed output") {
  const ErasureParams e(0.25, 2);
  const Matrix s = erasure_reference_operator(2, 1, e);
  CHECK(s.rows() == 6);
  CHECK(std::abs(s.trace().real() - 2.0) <= 1e-14);
  CHECK(std::abs(s(0, 0).real() - 0.375) <= 1e-15);
  CHECK(std::abs(s(2, 2).real() - 0.25) <= 1e-15);
}
