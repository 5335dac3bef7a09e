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
 * Dense square complex matrices and state vectors.
 *
 * Both types are plain values: copies are deep and nothing is shared, so
 * instances can be handed across threads freely. Products and inner products
 * go through the runtime-selected kernels in kernels.hpp.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace selftest {

using cplx = std::complex<double>;

class ComplexMatrix {
  public:
    /// 1x1 zero matrix.
    ComplexMatrix() : ComplexMatrix(1) {}
    /// dim x dim zero matrix; dim must be >= 1.
    explicit ComplexMatrix(std::size_t dim);
    /// Row-major entries; entries.size() must be dim * dim.
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix
    from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMatrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    cplx &operator()(std::size_t row, std::size_t col) noexcept {
        return entries_[row * dim_ + col];
    }
    const cplx &operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * dim_ + col];
    }

    [[nodiscard]] std::span<cplx> data() noexcept { return entries_; }
    [[nodiscard]] std::span<const cplx> data() const noexcept {
        return entries_;
    }

    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] ComplexMatrix transpose() const;
    [[nodiscard]] cplx trace() const noexcept;
    /// Largest entry magnitude.
    [[nodiscard]] double max_abs() const noexcept;
    /// max |M - M^dagger| entrywise.
    [[nodiscard]] double hermiticity_deviation() const noexcept;
    /// max |M M - I| entrywise; zero for Hermitian involutions (+-1 spectra).
    [[nodiscard]] double involution_deviation() const;
    /// max |M^dagger M - I| entrywise.
    [[nodiscard]] double unitarity_deviation() const;

    ComplexMatrix &operator+=(const ComplexMatrix &rhs);
    ComplexMatrix &operator-=(const ComplexMatrix &rhs);
    ComplexMatrix &operator*=(cplx scale) noexcept;

    friend bool operator==(const ComplexMatrix &,
                           const ComplexMatrix &) = default;

  private:
    std::size_t dim_;
    std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix &rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix &rhs);
ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx scale);

/// ab - ba
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);
/// ab + ba
ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b);
/// max entrywise |a - b|; dimensions must agree.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

class StateVector {
  public:
    StateVector() : StateVector(1) {}
    explicit StateVector(std::size_t dim);
    explicit StateVector(std::vector<cplx> amplitudes);

    /// |k> in a dim-dimensional space.
    static StateVector basis(std::size_t dim, std::size_t k);

    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    cplx &operator[](std::size_t i) noexcept { return amps_[i]; }
    const cplx &operator[](std::size_t i) const noexcept { return amps_[i]; }

    [[nodiscard]] std::span<cplx> data() noexcept { return amps_; }
    [[nodiscard]] std::span<const cplx> data() const noexcept {
        return amps_;
    }

    [[nodiscard]] double norm() const noexcept;
    /// Throws NumericalError on the zero vector.
    [[nodiscard]] StateVector normalized() const;
    /// <this|other>
    [[nodiscard]] cplx inner(const StateVector &other) const;

    StateVector &operator+=(const StateVector &rhs);
    StateVector &operator-=(const StateVector &rhs);
    StateVector &operator*=(cplx scale) noexcept;

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    std::vector<cplx> amps_;
};

StateVector operator+(StateVector lhs, const StateVector &rhs);
StateVector operator-(StateVector lhs, const StateVector &rhs);
StateVector operator*(cplx scale, StateVector v);
StateVector operator*(const ComplexMatrix &m, const StateVector &v);

/// ||a - b||_2
double distance(const StateVector &a, const StateVector &b);
/// <v|M|v>
cplx expectation(const StateVector &v, const ComplexMatrix &m);

} // namespace selftest
