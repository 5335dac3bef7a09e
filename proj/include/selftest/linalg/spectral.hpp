// Copyright 2026 The selftest Authors
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
/**
 * @file
 * Functions of Hermitian matrices, all routed through a single Hermitian
 * eigendecomposition: f(M) = V diag(f(lambda)) V^dagger.
 */
#pragma once

#include <functional>
#include <vector>

#include "selftest/linalg/complex_matrix.hpp"

namespace selftest {

/// Default relative threshold below which an eigenvalue counts as zero.
inline constexpr double kDefaultZeroTol = 1e-10;

/// Inputs whose max |M - M^dagger| exceeds this (scaled by max(1, max|M|))
/// are rejected as non-Hermitian.
inline constexpr double kHermitianInputTol = 1e-10;

struct HermitianEigen {
    std::vector<double> values; ///< ascending
    ComplexMatrix vectors;      ///< columns are eigenvectors; unitary
};

/// Throws ValidationError naming the deviation if m is not Hermitian.
HermitianEigen hermitian_eig(const ComplexMatrix &m);

/// V diag(f(lambda)) V^dagger
ComplexMatrix apply_spectral(const HermitianEigen &eig,
                             const std::function<cplx(double)> &f);

/// |M| = sqrt(M^2)
ComplexMatrix operator_abs(const ComplexMatrix &m);

/// M / |M|, with +1 on the (numerical) kernel of M. Eigenvalues with
/// |lambda| <= zero_tol * max|lambda| are treated as zero; the zero matrix maps
/// to the identity. The result is Hermitian and squares to I.
ComplexMatrix operator_sign(const ComplexMatrix &m,
                            double zero_tol = kDefaultZeroTol);

/// exp(i t H) for Hermitian H.
ComplexMatrix unitary_exp(const ComplexMatrix &h, double t);

} // namespace selftest
