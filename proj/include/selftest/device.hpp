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
 * Bipartite devices (a pure state plus named +-1-valued local observables)
 * and the correlation functionals evaluated on them.
 *
 * Observable names are the contract with the rest of the library: CHSH
 * devices carry A0, A1 / B0, B1 and Mayers-Yao devices carry XA, ZA /
 * XB, ZB, DB. The Mayers-Yao targets are taken on |phi+> = (|00>+|11>)/sqrt2.
 */
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "selftest/linalg/complex_matrix.hpp"
#include "selftest/linalg/tensor.hpp"

namespace selftest {

namespace names {
inline constexpr const char *A0 = "A0";
inline constexpr const char *A1 = "A1";
inline constexpr const char *B0 = "B0";
inline constexpr const char *B1 = "B1";
inline constexpr const char *XA = "XA";
inline constexpr const char *ZA = "ZA";
inline constexpr const char *XB = "XB";
inline constexpr const char *ZB = "ZB";
inline constexpr const char *DB = "DB";
} // namespace names

enum class Mode { Chsh, MayersYao };

std::string mode_name(Mode m);
/// Accepts "chsh" and "my" (case-sensitive); throws ValidationError otherwise.
Mode parse_mode(const std::string &text);

inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kObservableTol = 1e-10;
inline constexpr double kImagTol = 1e-10;

struct DeviceModel {
    Dims dims;
    StateVector state;
    std::map<std::string, ComplexMatrix> alice;
    std::map<std::string, ComplexMatrix> bob;

    [[nodiscard]] const std::map<std::string, ComplexMatrix> &
    observables(Party p) const noexcept {
        return p == Party::Alice ? alice : bob;
    }
    [[nodiscard]] bool has(Party p, const std::string &name) const {
        return observables(p).contains(name);
    }
    /// Throws ValidationError for an unknown name.
    [[nodiscard]] const ComplexMatrix &observable(Party p,
                                                  const std::string &name) const;
    /// Observable embedded in the joint space.
    [[nodiscard]] ComplexMatrix embedded(Party p, const std::string &name) const;
};

struct Violation {
    std::string subject; ///< "state" or the observable name
    std::string message;
    double deviation = 0.0;
};

/// Empty iff the device satisfies every structural invariant.
std::vector<Violation> validate(const DeviceModel &device);

/// Throws ValidationError listing the first few violations.
void require_valid(const DeviceModel &device);

/// Throws ValidationError if any of the names is missing.
void require_observables(const DeviceModel &device, Mode mode);

/// <psi| (M (x) I)(I (x) N) |psi>
double correlation(const DeviceModel &device, const std::string &alice_name,
                   const std::string &bob_name);

struct CorrelationTable {
    std::map<std::pair<std::string, std::string>, double> entries;

    /// Throws ValidationError when the pair is absent.
    [[nodiscard]] double at(const std::string &a, const std::string &b) const;
};

struct ChshResult {
    double value = 0.0;
    double epsilon = 0.0; ///< max(0, 2 sqrt2 - value)
};

ChshResult chsh_value(const DeviceModel &device);
ChshResult chsh_from_table(const CorrelationTable &table);

struct MyDeviation {
    CorrelationTable table;
    double epsilon = 0.0;
};

/// <phi+| M (x) N |phi+> for M in {X, Z}, N in {X, Z, D} (names "X","Z","D").
double my_ideal(const std::string &m, const std::string &n);

MyDeviation my_deviation(const DeviceModel &device);
/// Same as my_deviation, from measured values keyed by XA.., XB.. names.
double my_epsilon_from_table(const CorrelationTable &table);

/// Applies U_A (x) U_B to the state and conjugates every observable.
DeviceModel conjugate_local(const DeviceModel &device, const ComplexMatrix &ua,
                            const ComplexMatrix &ub);

} // namespace selftest
