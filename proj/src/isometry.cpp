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

#include "selftest/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "selftest/errors.hpp"

namespace selftest {

namespace {

constexpr double kInvSqrt2 = (1.0 / std::numbers::sqrt2);

// Ancilla bit positions inside the 4-dim ancilla block.
constexpr std::size_t kAncA = 2;
constexpr std::size_t kAncB = 1;

void hadamard(StateVector &state, std::size_t bit) {
    for (std::size_t base = 0; base < state.dim(); base += 4) {
        for (std::size_t k = 0; k < 4; ++k) {
            if ((k & bit) != 0) {
                continue;
            }
            const cplx lo = state[base + k];
            const cplx hi = state[base + (k | bit)];
            state[base + k] = kInvSqrt2 * (lo + hi);
            state[base + (k | bit)] = kInvSqrt2 * (lo - hi);
        }
    }
}

// Applies op (joint device space) to every device slice whose ancilla index
// has `bit` set.
void controlled(StateVector &state, const ComplexMatrix &op, std::size_t bit) {
    const std::size_t n = op.dim();
    for (std::size_t k = 0; k < 4; ++k) {
        if ((k & bit) == 0) {
            continue;
        }
        StateVector slice(n);
        for (std::size_t d = 0; d < n; ++d) {
            slice[d] = state[d * 4 + k];
        }
        const StateVector mapped = op * slice;
        for (std::size_t d = 0; d < n; ++d) {
            state[d * 4 + k] = mapped[d];
        }
    }
}

const ComplexMatrix &pick(LocalOp op, const ComplexMatrix &x,
                          const ComplexMatrix &z, const ComplexMatrix &id) {
    switch (op) {
    case LocalOp::X:
        return x;
    case LocalOp::Z:
        return z;
    case LocalOp::I:
        break;
    }
    return id;
}

StateVector ideal_target(const ComplexMatrix &m, const ComplexMatrix &n) {
    return kron(m, n) * phi_plus();
}

} // namespace

std::string local_op_name(LocalOp op) {
    switch (op) {
    case LocalOp::I:
        return "I";
    case LocalOp::X:
        return "X";
    case LocalOp::Z:
        return "Z";
    }
    return "?";
}

ComplexMatrix local_op_matrix(LocalOp op) {
    switch (op) {
    case LocalOp::X:
        return pauli::X();
    case LocalOp::Z:
        return pauli::Z();
    case LocalOp::I:
        break;
    }
    return pauli::I();
}

StateVector extraction_circuit(const StateVector &input,
                               const DerivedOperators &ops, Dims dims) {
    if (input.dim() != dims.total()) {
        throw DimensionError("extraction_circuit: input dimension mismatch");
    }
    const ComplexMatrix xa = tensor_embed(ops.XA, Party::Alice, dims);
    const ComplexMatrix za = tensor_embed(ops.ZA, Party::Alice, dims);
    const ComplexMatrix xb = tensor_embed(ops.XB, Party::Bob, dims);
    const ComplexMatrix zb = tensor_embed(ops.ZB, Party::Bob, dims);

    StateVector state(dims.total() * 4);
    for (std::size_t d = 0; d < dims.total(); ++d) {
        state[d * 4] = input[d];
    }
    hadamard(state, kAncA);
    hadamard(state, kAncB);
    controlled(state, za, kAncA);
    controlled(state, zb, kAncB);
    hadamard(state, kAncA);
    hadamard(state, kAncB);
    controlled(state, xa, kAncA);
    controlled(state, xb, kAncB);
    return state;
}

StateVector apply_isometry(const DeviceModel &device,
                           const DerivedOperators &ops, LocalOp m, LocalOp n) {
    const Dims dims = device.dims;
    const ComplexMatrix ida = ComplexMatrix::identity(dims.alice);
    const ComplexMatrix idb = ComplexMatrix::identity(dims.bob);
    const ComplexMatrix local =
        kron(pick(m, ops.XA, ops.ZA, ida), pick(n, ops.XB, ops.ZB, idb));
    return extraction_circuit(local * device.state, ops, dims);
}

StateVector expansion_oracle(const DeviceModel &device,
                             const DerivedOperators &ops) {
    const Dims dims = device.dims;
    const ComplexMatrix xa = tensor_embed(ops.XA, Party::Alice, dims);
    const ComplexMatrix za = tensor_embed(ops.ZA, Party::Alice, dims);
    const ComplexMatrix xb = tensor_embed(ops.XB, Party::Bob, dims);
    const ComplexMatrix zb = tensor_embed(ops.ZB, Party::Bob, dims);
    const ComplexMatrix id = ComplexMatrix::identity(dims.total());
    const StateVector &psi = device.state;

    const StateVector t00 = (id + za) * ((id + zb) * psi);
    const StateVector t01 = xb * ((id + za) * ((id - zb) * psi));
    const StateVector t10 = xa * ((id - za) * ((id + zb) * psi));
    const StateVector t11 = xa * (xb * ((id - za) * ((id - zb) * psi)));

    StateVector out(dims.total() * 4);
    for (std::size_t d = 0; d < dims.total(); ++d) {
        out[d * 4 + 0] = 0.25 * t00[d];
        out[d * 4 + 1] = 0.25 * t01[d];
        out[d * 4 + 2] = 0.25 * t10[d];
        out[d * 4 + 3] = 0.25 * t11[d];
    }
    return out;
}

JunkCandidate junk_candidate(const DeviceModel &device,
                             const DerivedOperators &ops,
                             double degeneracy_tol) {
    const Dims dims = device.dims;
    const ComplexMatrix id = ComplexMatrix::identity(dims.total());
    const ComplexMatrix za = tensor_embed(ops.ZA, Party::Alice, dims);
    const ComplexMatrix zb = tensor_embed(ops.ZB, Party::Bob, dims);
    StateVector v = (id + za) * ((id + zb) * device.state);
    v *= cplx{0.5 * kInvSqrt2};
    const double raw = v.norm();
    if (!(raw >= degeneracy_tol)) {
        std::ostringstream msg;
        msg << "degenerate extraction: junk candidate norm " << raw
            << " below " << degeneracy_tol;
        throw DegenerateExtraction(msg.str(), raw);
    }
    v *= cplx{1.0 / raw};
    return JunkCandidate{std::move(v), raw};
}

StateVector with_ancillas(const StateVector &junk, const StateVector &target) {
    if (target.dim() != 4) {
        throw DimensionError("with_ancillas: target must be a two-qubit vector");
    }
    return kron(junk, target);
}

double ExtractionResult::max_error() const {
    double m = 0.0;
    for (const auto &[pair, err] : errorsByPair) {
        m = std::max(m, err);
    }
    return m;
}

double best_junk_error(const StateVector &output, const StateVector &target) {
    if (target.dim() != 4 || output.dim() % 4 != 0) {
        throw DimensionError("best_junk_error: incompatible dimensions");
    }
    const std::size_t n = output.dim() / 4;
    StateVector overlap(n);
    for (std::size_t d = 0; d < n; ++d) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < 4; ++k) {
            acc += std::conj(target[k]) * output[d * 4 + k];
        }
        overlap[d] = acc;
    }
    const double out_sq = output.norm() * output.norm();
    const double tgt_sq = target.norm() * target.norm();
    const double err_sq = out_sq + tgt_sq - 2.0 * overlap.norm();
    return std::sqrt(std::max(0.0, err_sq));
}

ExtractionResult extraction_error(const DeviceModel &device,
                                  const DerivedOperators &ops,
                                  double degeneracy_tol) {
    JunkCandidate jc = junk_candidate(device, ops, degeneracy_tol);
    ExtractionResult r{apply_isometry(device, ops, LocalOp::I, LocalOp::I),
                       std::move(jc.junk), jc.rawNorm, {}, {}};
    for (LocalOp m : kLocalOps) {
        for (LocalOp n : kLocalOps) {
            const StateVector output =
                (m == LocalOp::I && n == LocalOp::I)
                    ? r.outputState
                    : apply_isometry(device, ops, m, n);
            const StateVector target =
                ideal_target(local_op_matrix(m), local_op_matrix(n));
            r.errorsByPair[{m, n}] =
                distance(output, with_ancillas(r.junk, target));
            r.bestJunkErrorsByPair[{m, n}] = best_junk_error(output, target);
        }
    }
    return r;
}

double b_measured_error(const DeviceModel &device, const DerivedOperators &ops,
                        LocalOp m, BSetting which, double degeneracy_tol) {
    require_observables(device, Mode::Chsh);
    const JunkCandidate jc = junk_candidate(device, ops, degeneracy_tol);
    const Dims dims = device.dims;
    const ComplexMatrix ida = ComplexMatrix::identity(dims.alice);
    const ComplexMatrix &b = device.observable(
        Party::Bob, which == BSetting::B0 ? names::B0 : names::B1);
    const ComplexMatrix local = kron(pick(m, ops.XA, ops.ZA, ida), b);
    const StateVector output =
        extraction_circuit(local * device.state, ops, dims);

    const ComplexMatrix ideal_b =
        which == BSetting::B0 ? kInvSqrt2 * (pauli::X() + pauli::Z())
                              : kInvSqrt2 * (pauli::X() - pauli::Z());
    const StateVector target = ideal_target(local_op_matrix(m), ideal_b);
    return distance(output, with_ancillas(jc.junk, target));
}

} // namespace selftest
