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
 * The local extraction isometry and its error against junk (x) |phi+>.
 *
 * Each party appends one ancilla qubit in |0> and runs
 *   H(anc); controlled-Z'(anc -> device); H(anc); controlled-X'(anc -> device)
 * with its own derived operators. Register order of the output is
 * (Alice device, Bob device, Alice ancilla, Bob ancilla), i.e. the output
 * index is (a * dB + b) * 4 + ancA * 2 + ancB.
 */
#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>

#include "selftest/derive.hpp"
#include "selftest/device.hpp"

namespace selftest {

/// Ideal single-qubit operators the extraction is tested against.
enum class LocalOp { I, X, Z };

inline constexpr std::array<LocalOp, 3> kLocalOps{LocalOp::I, LocalOp::X,
                                                  LocalOp::Z};

std::string local_op_name(LocalOp op);
ComplexMatrix local_op_matrix(LocalOp op);

enum class BSetting { B0, B1 };

inline constexpr double kDefaultDegeneracyTol = 1e-6;

/// Runs the extraction circuit on an arbitrary device-space vector.
StateVector extraction_circuit(const StateVector &input,
                               const DerivedOperators &ops, Dims dims);

/// Phi(M'_A N'_B |psi'>), with M' = XA for M = X, ZA for M = Z, identity
/// for I (same on Bob's side).
StateVector apply_isometry(const DeviceModel &device,
                           const DerivedOperators &ops, LocalOp m, LocalOp n);

/// The four-term closed form of Phi(|psi'>), evaluated without the circuit:
/// 1/4 [ (I+ZA)(I+ZB) psi |00> + XB (I+ZA)(I-ZB) psi |01>
///     + XA (I-ZA)(I+ZB) psi |10> + XA XB (I-ZA)(I-ZB) psi |11> ].
StateVector expansion_oracle(const DeviceModel &device,
                             const DerivedOperators &ops);

struct JunkCandidate {
    StateVector junk; ///< normalized
    double rawNorm = 0.0;
};

/// (I + Z'_A)(I + Z'_B)|psi'>/(2 sqrt2), normalized. Throws
/// DegenerateExtraction when its norm is below degeneracy_tol.
JunkCandidate junk_candidate(const DeviceModel &device,
                             const DerivedOperators &ops,
                             double degeneracy_tol = kDefaultDegeneracyTol);

/// junk (x) target, with target a 4-dim ancilla-pair vector.
StateVector with_ancillas(const StateVector &junk, const StateVector &target);

using OpPair = std::pair<LocalOp, LocalOp>;

struct ExtractionResult {
    StateVector outputState; ///< Phi(|psi'>)
    StateVector junk;
    double junkNormRaw = 0.0;
    /// ||Phi(M'N'psi') - junk (x) (M (x) N)|phi+>|| with the fixed junk
    std::map<OpPair, double> errorsByPair;
    /// Same distance with the junk re-optimized per pair (diagnostic only).
    std::map<OpPair, double> bestJunkErrorsByPair;

    [[nodiscard]] double max_error() const;
};

ExtractionResult extraction_error(const DeviceModel &device,
                                  const DerivedOperators &ops,
                                  double degeneracy_tol = kDefaultDegeneracyTol);

/// min over unit junk of ||output - junk (x) target||; the optimum junk is
/// the normalized partial overlap <target|output>.
double best_junk_error(const StateVector &output, const StateVector &target);

/// ||Phi(M'_A B'_i psi') - junk (x) M (x) ((X +- Z)/sqrt2) |phi+>||, '+' for B0.
double b_measured_error(const DeviceModel &device, const DerivedOperators &ops,
                        LocalOp m, BSetting which,
                        double degeneracy_tol = kDefaultDegeneracyTol);

} // namespace selftest
