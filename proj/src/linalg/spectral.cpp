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

#include "selftest/linalg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "selftest/errors.hpp"

namespace selftest {

HermitianEigen hermitian_eig(const ComplexMatrix &m) {
    const double deviation = m.hermiticity_deviation();
    const double scale = std::max(1.0, m.max_abs());
    if (!(deviation <= kHermitianInputTol * scale)) {
        std::ostringstream msg;
        msg << "hermitian_eig: matrix is not Hermitian (max |M - M^dagger| = "
            << deviation << ")";
        throw ValidationError(msg.str());
    }

    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // symmetrize so round-off asymmetry cannot leak into the solver
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver did not converge");
    }

    HermitianEigen out{std::vector<double>(m.dim()), ComplexMatrix(m.dim())};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = solver.eigenvalues()(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            out.vectors(i, j) = solver.eigenvectors()(i, j);
        }
    }
    return out;
}

ComplexMatrix apply_spectral(const HermitianEigen &eig,
                             const std::function<cplx(double)> &f) {
    const std::size_t n = eig.values.size();
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx fk = f(eig.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            scaled(i, k) *= fk;
        }
    }
    return scaled * eig.vectors.adjoint();
}

ComplexMatrix operator_abs(const ComplexMatrix &m) {
    return apply_spectral(hermitian_eig(m),
                          [](double lambda) { return cplx{std::abs(lambda)}; });
}

ComplexMatrix operator_sign(const ComplexMatrix &m, double zero_tol) {
    if (!(zero_tol > 0.0)) {
        throw ValidationError("operator_sign: zero_tol must be positive");
    }
    const HermitianEigen eig = hermitian_eig(m);
    double largest = 0.0;
    for (double v : eig.values) {
        largest = std::max(largest, std::abs(v));
    }
    if (largest == 0.0) {
        return ComplexMatrix::identity(m.dim());
    }
    const double threshold = zero_tol * largest;
    return apply_spectral(eig, [threshold](double lambda) {
        return cplx{lambda < -threshold ? -1.0 : 1.0};
    });
}

ComplexMatrix unitary_exp(const ComplexMatrix &h, double t) {
    return apply_spectral(hermitian_eig(h), [t](double lambda) {
        return std::polar(1.0, t * lambda);
    });
}

} // namespace selftest
