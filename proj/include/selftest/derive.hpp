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
 * The four local operators the extraction circuit runs on, the residuals of
 * the four sufficient conditions measured on a concrete device, and the
 * closed-form (eps1, eps2) budgets implied by an observed CHSH or
 * Mayers-Yao deviation.
 *
 * Sufficient conditions, evaluated on |psi>:
 *   ||{XA, ZA} psi|| <= 2 eps1      ||{XB, ZB} psi|| <= 2 eps1
 *   ||(XA - XB) psi|| <= eps2       ||(ZA - ZB) psi|| <= eps2
 */
#pragma once

#include <map>
#include <string>

#include "selftest/device.hpp"
#include "selftest/linalg/spectral.hpp"

namespace selftest {

struct DerivedOperators {
    ComplexMatrix XA; ///< Alice, dim dA
    ComplexMatrix ZA;
    ComplexMatrix XB; ///< Bob, dim dB
    ComplexMatrix ZB;
};

/// XA = A0, ZA = A1, XB = sign(B0 + B1), ZB = sign(B0 - B1).
DerivedOperators derive_chsh_operators(const DeviceModel &device,
                                       double zero_tol = kDefaultZeroTol);

/// XA, ZA, XB, ZB taken verbatim from the device.
DerivedOperators my_operators(const DeviceModel &device);

DerivedOperators operators_for(const DeviceModel &device, Mode mode,
                               double zero_tol = kDefaultZeroTol);

struct ResidualSet {
    double anticommA = 0.0; ///< ||{XA, ZA} psi||
    double anticommB = 0.0; ///< ||{XB, ZB} psi||
    double diffX = 0.0;     ///< ||(XA - XB) psi||
    double diffZ = 0.0;     ///< ||(ZA - ZB) psi||

    /// Smallest eps1 for which both anticommutator conditions hold.
    [[nodiscard]] double eps1() const noexcept;
    /// Smallest eps2 for which both difference conditions hold.
    [[nodiscard]] double eps2() const noexcept;
};

ResidualSet condition_residuals(const StateVector &state,
                                const DerivedOperators &ops, Dims dims);

/// Budgets derived from an observed deviation epsilon.
///
/// `eps1`/`eps2` are the closed-form (leading order) budgets;
/// the `*Exact` fields are the untruncated chains they were derived from.
/// Certification compares against the larger of the two.
struct EpsilonBudget {
    double epsilon = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double delta = 0.0;    ///< CHSH only: 4 sqrt2 eps - eps^2; zero for MY
    double epsPrime = 0.0; ///< intermediate eps' (see the budget functions)
    double eps1Exact = 0.0;
    double eps2Exact = 0.0;
    double epsPrimeExact = 0.0;

    [[nodiscard]] double eps1Safe() const noexcept;
    [[nodiscard]] double eps2Safe() const noexcept;
};

/// CHSH: eps1 = 2 (eps sqrt2)^(1/2), eps2 = 4 (eps sqrt2)^(1/4),
/// delta = 4 sqrt2 eps - eps^2, eps' = eps/sqrt2 + sqrt(1 + eps1) - 1.
/// Exact chain: eps1 = sqrt(delta), eps2 = 2 sqrt(eps1 + 2 eps').
/// Requires 0 < eps < 1.
EpsilonBudget chsh_budget(double epsilon);

/// Mayers-Yao: eps2 = sqrt(2 eps),
/// eps1 = 2(1+sqrt2)(2eps)^(1/4) + 4 sqrt(2eps) + (5+3sqrt2)/2 (2eps)^(3/4),
/// eps' = sqrt((1 + 2 sqrt2) eps + sqrt(2 eps)).
/// Exact chain: eps1 = (1+sqrt2) eps' + 2 sqrt(2 eps).
/// Requires 0 < eps < 1.
EpsilonBudget my_budget(double epsilon);

/// Dispatches on mode; epsilon == 0 gives the all-zero budget.
EpsilonBudget budget_for(Mode mode, double epsilon);

using NamedValues = std::map<std::string, double>;

/// Intermediate quantities of the CHSH chain, measured on the device.
NamedValues chsh_chain_residuals(const DeviceModel &device,
                                    double zero_tol = kDefaultZeroTol);

/// Intermediate quantities of the Mayers-Yao chain, measured on the device.
NamedValues my_chain_residuals(const DeviceModel &device);

/// Quantities used to bound the extraction error from the four conditions:
/// <Z'_A>, <Z'_B>, <Z'_A Z'_B> and the norms of the circuit-expansion lines.
NamedValues extraction_chain_residuals(const StateVector &state,
                                 const DerivedOperators &ops, Dims dims);

} // namespace selftest
