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

#include "selftest/linalg/tensor.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "selftest/errors.hpp"

namespace selftest {

std::string_view party_name(Party p) noexcept {
    return p == Party::Alice ? "alice" : "bob";
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

StateVector kron(const StateVector &a, const StateVector &b) {
    StateVector out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t k = 0; k < b.dim(); ++k) {
            out[i * b.dim() + k] = a[i] * b[k];
        }
    }
    return out;
}

ComplexMatrix tensor_embed(const ComplexMatrix &op, Party party, Dims dims) {
    if (op.dim() != dims.of(party)) {
        throw DimensionError("tensor_embed: operator for " +
                             std::string(party_name(party)) + " has dim " +
                             std::to_string(op.dim()) + ", expected " +
                             std::to_string(dims.of(party)));
    }
    if (party == Party::Alice) {
        return kron(op, ComplexMatrix::identity(dims.bob));
    }
    return kron(ComplexMatrix::identity(dims.alice), op);
}

namespace pauli {

ComplexMatrix I() { return ComplexMatrix::identity(2); }

ComplexMatrix X() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }

ComplexMatrix Y() {
    return ComplexMatrix::from_rows(
        {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
}

ComplexMatrix Z() {
    return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

ComplexMatrix D() { return (1.0 / std::numbers::sqrt2) * (X() + Z()); }

} // namespace pauli

StateVector phi_plus() {
    StateVector v(4);
    v[0] = (1.0 / std::numbers::sqrt2);
    v[3] = (1.0 / std::numbers::sqrt2);
    return v;
}

} // namespace selftest
