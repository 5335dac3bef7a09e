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

#include "selftest/linalg/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selftest/errors.hpp"
#include "selftest/linalg/kernels.hpp"

namespace selftest {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" +
                             std::to_string(a) + " vs " + std::to_string(b) +
                             ")");
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw DimensionError("ComplexMatrix: dimension must be >= 1");
    }
    entries_.assign(dim * dim, cplx{0.0, 0.0});
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) {
        throw DimensionError("ComplexMatrix: dimension must be >= 1");
    }
    if (entries_.size() != dim * dim) {
        throw DimensionError("ComplexMatrix: expected " +
                             std::to_string(dim * dim) + " entries, got " +
                             std::to_string(entries_.size()));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t dim = rows.size();
    std::vector<cplx> entries;
    entries.reserve(dim * dim);
    for (const auto &row : rows) {
        if (row.size() != dim) {
            throw DimensionError("ComplexMatrix::from_rows: matrix not square");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(dim, std::move(entries));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const noexcept {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (const auto &z : entries_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double ComplexMatrix::hermiticity_deviation() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return m;
}

double ComplexMatrix::involution_deviation() const {
    return max_abs_diff((*this) * (*this), identity(dim_));
}

double ComplexMatrix::unitarity_deviation() const {
    return max_abs_diff(adjoint() * (*this), identity(dim_));
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs) {
    require_same_dim(dim_, rhs.dim_, "ComplexMatrix +");
    kernels::active().axpy(cplx{1.0, 0.0}, rhs.entries_.data(),
                           entries_.data(), entries_.size());
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs) {
    require_same_dim(dim_, rhs.dim_, "ComplexMatrix -");
    kernels::active().axpy(cplx{-1.0, 0.0}, rhs.entries_.data(),
                           entries_.data(), entries_.size());
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx scale) noexcept {
    for (auto &z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix &rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix &rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs) {
    require_same_dim(lhs.dim(), rhs.dim(), "ComplexMatrix *");
    ComplexMatrix out(lhs.dim());
    kernels::active().matmul(lhs.data().data(), rhs.data().data(),
                             out.data().data(), lhs.dim());
    return out;
}

ComplexMatrix operator*(cplx scale, ComplexMatrix m) {
    m *= scale;
    return m;
}

ComplexMatrix operator*(ComplexMatrix m, cplx scale) {
    m *= scale;
    return m;
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b + b * a;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        m = std::max(m, std::abs(da[i] - db[i]));
    }
    return m;
}

StateVector::StateVector(std::size_t dim) : amps_(dim, cplx{0.0, 0.0}) {
    if (dim == 0) {
        throw DimensionError("StateVector: dimension must be >= 1");
    }
}

StateVector::StateVector(std::vector<cplx> amplitudes)
    : amps_(std::move(amplitudes)) {
    if (amps_.empty()) {
        throw DimensionError("StateVector: dimension must be >= 1");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
    if (k >= dim) {
        throw DimensionError("StateVector::basis: index out of range");
    }
    StateVector v(dim);
    v[k] = 1.0;
    return v;
}

double StateVector::norm() const noexcept {
    return std::sqrt(kernels::active().norm_sq(amps_.data(), amps_.size()));
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n == 0.0 || !std::isfinite(n)) {
        throw NumericalError("StateVector::normalized: zero or non-finite norm");
    }
    StateVector out(*this);
    out *= cplx{1.0 / n, 0.0};
    return out;
}

cplx StateVector::inner(const StateVector &other) const {
    require_same_dim(dim(), other.dim(), "StateVector::inner");
    return kernels::active().dot(amps_.data(), other.amps_.data(), dim());
}

StateVector &StateVector::operator+=(const StateVector &rhs) {
    require_same_dim(dim(), rhs.dim(), "StateVector +");
    kernels::active().axpy(cplx{1.0, 0.0}, rhs.amps_.data(), amps_.data(),
                           dim());
    return *this;
}

StateVector &StateVector::operator-=(const StateVector &rhs) {
    require_same_dim(dim(), rhs.dim(), "StateVector -");
    kernels::active().axpy(cplx{-1.0, 0.0}, rhs.amps_.data(), amps_.data(),
                           dim());
    return *this;
}

StateVector &StateVector::operator*=(cplx scale) noexcept {
    for (auto &z : amps_) {
        z *= scale;
    }
    return *this;
}

StateVector operator+(StateVector lhs, const StateVector &rhs) {
    lhs += rhs;
    return lhs;
}

StateVector operator-(StateVector lhs, const StateVector &rhs) {
    lhs -= rhs;
    return lhs;
}

StateVector operator*(cplx scale, StateVector v) {
    v *= scale;
    return v;
}

StateVector operator*(const ComplexMatrix &m, const StateVector &v) {
    require_same_dim(m.dim(), v.dim(), "ComplexMatrix * StateVector");
    StateVector out(v.dim());
    kernels::active().matvec(m.data().data(), v.data().data(),
                             out.data().data(), m.dim(), m.dim());
    return out;
}

double distance(const StateVector &a, const StateVector &b) {
    return (a - b).norm();
}

cplx expectation(const StateVector &v, const ComplexMatrix &m) {
    return v.inner(m * v);
}

} // namespace selftest
