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
#pragma once

#include <cstddef>
#include <string_view>

#include "selftest/linalg/complex_matrix.hpp"

namespace selftest {

enum class Party { Alice, Bob };

std::string_view party_name(Party p) noexcept;

/// Local dimensions of a bipartite system. The joint index of |a>|b> is
/// a * bob + b.
struct Dims {
    std::size_t alice = 2;
    std::size_t bob = 2;

    [[nodiscard]] std::size_t total() const noexcept { return alice * bob; }
    [[nodiscard]] std::size_t of(Party p) const noexcept {
        return p == Party::Alice ? alice : bob;
    }
    friend bool operator==(const Dims &, const Dims &) = default;
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
StateVector kron(const StateVector &a, const StateVector &b);

/// op (x) I for Alice, I (x) op for Bob. Embeddings on opposite parties
/// commute exactly.
ComplexMatrix tensor_embed(const ComplexMatrix &op, Party party, Dims dims);

/// Pauli constants and D = (X + Z)/sqrt(2).
namespace pauli {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
ComplexMatrix D();
} // namespace pauli

/// (|00> + |11>)/sqrt(2)
StateVector phi_plus();

} // namespace selftest
