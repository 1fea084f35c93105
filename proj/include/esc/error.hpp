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

#include <stdexcept>
#include <string>

namespace esc {

/// Malformed input: wrong dimensions, out-of-range parameters, bad indices.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value that should satisfy a mathematical invariant does not
/// (e.g. a "Hermitian" matrix that is not Hermitian within tolerance).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size guard was exceeded. `guard()` names the limit that failed.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(std::string guard, const std::string& what)
      : std::runtime_error(guard + ": " + what), guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

/// An iterative solver stopped before reaching its tolerance. The best
/// primal/dual pair found so far is carried along.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double best_primal, double best_dual)
      : std::runtime_error(what), primal_(best_primal), dual_(best_dual) {}

  double best_primal() const noexcept { return primal_; }
  double best_dual() const noexcept { return dual_; }

 private:
  double primal_;
  double dual_;
};

}  // namespace esc
