// Copyright 2026 The cvmaxcut Authors
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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvmaxcut {

using cplx = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Global quadrature convention: hbar = 2, so x = a + a^dag, p = -i (a - a^dag)
/// and the vacuum has unit quadrature variance.
inline constexpr double kHbar = 2.0;

// Error taxonomy. The CLI maps these onto exit codes.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad shapes or indices passed between components.
struct DimensionError : Error {
  using Error::Error;
};

/// Parameter outside a numerical guard or a mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

/// State or problem too large for the configured budget or guard.
struct SizingError : Error {
  using Error::Error;
};

/// Non-invertible resolvent and similar linear-algebra failures.
struct SingularError : Error {
  using Error::Error;
};

/// Input carries no information to work with (zero matrix, mc = 0, ...).
struct DegenerateInputError : Error {
  using Error::Error;
};

/// Non-finite values during optimisation.
struct DivergenceError : Error {
  using Error::Error;
};

/// Malformed config / graph file or IO failure.
struct ConfigError : Error {
  using Error::Error;
};

/// Requested operation is not defined for the given gate kind.
struct UnsupportedKindError : Error {
  using Error::Error;
};

}  // namespace cvmaxcut
