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

#include "selftest/derive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "selftest/errors.hpp"

namespace selftest {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = (1.0 / std::numbers::sqrt2);

void require_open_unit(double epsilon, const char *who) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        std::ostringstream msg;
        msg << who << ": epsilon must lie in (0, 1), got " << epsilon;
        throw ValidationError(msg.str());
    }
}

void require_dims(const DerivedOperators &ops, Dims dims) {
    if (ops.XA.dim() != dims.alice || ops.ZA.dim() != dims.alice ||
        ops.XB.dim() != dims.bob || ops.ZB.dim() != dims.bob) {
        throw DimensionError("derived operators do not match device dims");
    }
}

// Joint-space versions of the four derived operators.
struct Embedded {
    ComplexMatrix xa, za, xb, zb;

    Embedded(const DerivedOperators &ops, Dims dims)
        : xa(tensor_embed(ops.XA, Party::Alice, dims)),
          za(tensor_embed(ops.ZA, Party::Alice, dims)),
          xb(tensor_embed(ops.XB, Party::Bob, dims)),
          zb(tensor_embed(ops.ZB, Party::Bob, dims)) {}
};

double norm_of(const ComplexMatrix &m, const StateVector &v) {
    return (m * v).norm();
}

} // namespace

DerivedOperators derive_chsh_operators(const DeviceModel &device,
                                       double zero_tol) {
    require_observables(device, Mode::Chsh);
    const ComplexMatrix &b0 = device.observable(Party::Bob, names::B0);
    const ComplexMatrix &b1 = device.observable(Party::Bob, names::B1);
    return DerivedOperators{
        device.observable(Party::Alice, names::A0),
        device.observable(Party::Alice, names::A1),
        operator_sign(b0 + b1, zero_tol),
        operator_sign(b0 - b1, zero_tol),
    };
}

DerivedOperators my_operators(const DeviceModel &device) {
    require_observables(device, Mode::MayersYao);
    return DerivedOperators{
        device.observable(Party::Alice, names::XA),
        device.observable(Party::Alice, names::ZA),
        device.observable(Party::Bob, names::XB),
        device.observable(Party::Bob, names::ZB),
    };
}

DerivedOperators operators_for(const DeviceModel &device, Mode mode,
                               double zero_tol) {
    return mode == Mode::Chsh ? derive_chsh_operators(device, zero_tol)
                              : my_operators(device);
}

double ResidualSet::eps1() const noexcept {
    return std::max(anticommA, anticommB) / 2.0;
}

double ResidualSet::eps2() const noexcept { return std::max(diffX, diffZ); }

ResidualSet condition_residuals(const StateVector &state,
                                const DerivedOperators &ops, Dims dims) {
    require_dims(ops, dims);
    if (state.dim() != dims.total()) {
        throw DimensionError("condition_residuals: state dimension mismatch");
    }
    const Embedded e(ops, dims);
    ResidualSet r;
    r.anticommA = norm_of(anticommutator(e.xa, e.za), state);
    r.anticommB = norm_of(anticommutator(e.xb, e.zb), state);
    r.diffX = norm_of(e.xa - e.xb, state);
    r.diffZ = norm_of(e.za - e.zb, state);
    return r;
}

double EpsilonBudget::eps1Safe() const noexcept {
    return std::max(eps1, eps1Exact);
}

double EpsilonBudget::eps2Safe() const noexcept {
    return std::max(eps2, eps2Exact);
}

EpsilonBudget chsh_budget(double epsilon) {
    require_open_unit(epsilon, "chsh_budget");
    const double scaled = epsilon * kSqrt2;
    EpsilonBudget b;
    b.epsilon = epsilon;
    b.eps1 = 2.0 * std::sqrt(scaled);
    b.eps2 = 4.0 * std::pow(scaled, 0.25);
    b.delta = 4.0 * kSqrt2 * epsilon - epsilon * epsilon;
    b.epsPrime = epsilon * kInvSqrt2 + std::sqrt(1.0 + b.eps1) - 1.0;

    b.eps1Exact = std::sqrt(b.delta);
    b.epsPrimeExact = epsilon * kInvSqrt2 + std::sqrt(1.0 + b.eps1Exact) - 1.0;
    b.eps2Exact = 2.0 * std::sqrt(b.eps1Exact + 2.0 * b.epsPrimeExact);
    return b;
}

EpsilonBudget my_budget(double epsilon) {
    require_open_unit(epsilon, "my_budget");
    const double two_eps = 2.0 * epsilon;
    const double root = std::sqrt(two_eps);
    EpsilonBudget b;
    b.epsilon = epsilon;
    b.eps1 = 2.0 * (1.0 + kSqrt2) * std::pow(two_eps, 0.25) + 4.0 * root +
             0.5 * (5.0 + 3.0 * kSqrt2) * std::pow(two_eps, 0.75);
    b.eps2 = root;
    b.delta = 0.0;
    b.epsPrime = std::sqrt((1.0 + 2.0 * kSqrt2) * epsilon + root);

    b.epsPrimeExact = b.epsPrime;
    b.eps1Exact = (1.0 + kSqrt2) * b.epsPrime + 2.0 * root;
    b.eps2Exact = root;
    return b;
}

EpsilonBudget budget_for(Mode mode, double epsilon) {
    if (epsilon == 0.0) {
        return EpsilonBudget{};
    }
    return mode == Mode::Chsh ? chsh_budget(epsilon)
                              : my_budget(epsilon);
}

NamedValues chsh_chain_residuals(const DeviceModel &device,
                                    double zero_tol) {
    require_observables(device, Mode::Chsh);
    const StateVector &psi = device.state;
    const ComplexMatrix a0 = device.embedded(Party::Alice, names::A0);
    const ComplexMatrix a1 = device.embedded(Party::Alice, names::A1);
    const ComplexMatrix b0 = device.embedded(Party::Bob, names::B0);
    const ComplexMatrix b1 = device.embedded(Party::Bob, names::B1);
    const DerivedOperators ops = derive_chsh_operators(device, zero_tol);
    const Embedded e(ops, device.dims);

    const ComplexMatrix a0a1 = a0 * a1;
    const ComplexMatrix a1a0 = a1 * a0;
    const ComplexMatrix b0b1 = b0 * b1;
    const ComplexMatrix b1b0 = b1 * b0;
    const ComplexMatrix b_sum = b0 + b1;
    const ComplexMatrix b_diff = b0 - b1;
    const ComplexMatrix b_abs_sum =
        tensor_embed(operator_abs(device.observable(Party::Bob, names::B0) +
                                  device.observable(Party::Bob, names::B1)),
                     Party::Bob, device.dims);

    NamedValues v;
    v["commutator_product"] =
        expectation(psi, commutator(a0, a1) * commutator(b1, b0)).real();
    v["norm_A0A1_plus_B1B0"] = norm_of(a0a1 + b1b0, psi);
    v["norm_A0A1_minus_B0B1"] = norm_of(a0a1 - b0b1, psi);
    v["norm_A1A0_minus_B1B0"] = norm_of(a1a0 - b1b0, psi);
    v["norm_A1A0_plus_B0B1"] = norm_of(a1a0 + b0b1, psi);
    v["anticomm_A0A1"] = norm_of(anticommutator(a0, a1), psi);
    v["anticomm_B0B1"] = norm_of(anticommutator(b0, b1), psi);
    v["xa_bsum_expectation"] = expectation(psi, e.xa * b_sum).real();
    v["za_bdiff_expectation"] = expectation(psi, e.za * b_diff).real();
    v["abs_bsum_expectation"] = expectation(psi, b_abs_sum).real();
    v["xa_bsum_distance"] = norm_of(e.xa - kInvSqrt2 * b_sum, psi);
    v["xb_bsum_distance"] = norm_of(e.xb - kInvSqrt2 * b_sum, psi);
    v["za_bdiff_distance"] = norm_of(e.za - kInvSqrt2 * b_diff, psi);
    v["zb_bdiff_distance"] = norm_of(e.zb - kInvSqrt2 * b_diff, psi);
    return v;
}

NamedValues my_chain_residuals(const DeviceModel &device) {
    require_observables(device, Mode::MayersYao);
    const StateVector &psi = device.state;
    const Embedded e(my_operators(device), device.dims);
    const ComplexMatrix db = device.embedded(Party::Bob, names::DB);
    const ComplexMatrix s = kInvSqrt2 * (e.xa + e.za);

    NamedValues v;
    v["zx_expectation"] = expectation(psi, e.za * e.xa).real();
    v["sum_xz_norm"] = norm_of(s, psi);
    v["db_distance"] = norm_of(db - s, psi);
    v["anticomm_A"] = norm_of(anticommutator(e.xa, e.za), psi);
    v["zaxa_minus_xbzb"] = norm_of(e.za * e.xa - e.xb * e.zb, psi);
    v["xaza_minus_zbxb"] = norm_of(e.xa * e.za - e.zb * e.xb, psi);
    v["anticomm_B"] = norm_of(anticommutator(e.xb, e.zb), psi);
    return v;
}

NamedValues extraction_chain_residuals(const StateVector &state,
                                 const DerivedOperators &ops, Dims dims) {
    require_dims(ops, dims);
    const Embedded e(ops, dims);
    const ComplexMatrix id = ComplexMatrix::identity(dims.total());
    const ComplexMatrix pa = id + e.za; // (I + Z'_A)
    const ComplexMatrix ma = id - e.za;
    const ComplexMatrix pb = id + e.zb;
    const ComplexMatrix mb = id - e.zb;

    const StateVector line1 = cplx{0.25} * (pa * (pb * state));
    const StateVector line2 = cplx{0.25} * (e.xb * (pa * (mb * state)));
    const StateVector line3 = cplx{0.25} * (e.xa * (ma * (pb * state)));
    const StateVector line4 =
        cplx{0.25} * (e.xa * (e.xb * (ma * (mb * state))));

    NamedValues v;
    v["z_expectation_A"] = expectation(state, e.za).real();
    v["z_expectation_B"] = expectation(state, e.zb).real();
    v["zz_expectation"] = expectation(state, e.za * e.zb).real();
    v["line2_norm"] = line2.norm();
    v["line3_norm"] = line3.norm();
    v["line14_distance"] = distance(line4, line1);
    return v;
}

} // namespace selftest
