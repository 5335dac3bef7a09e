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
 * Closed-form robustness bounds and the certification engine that measures
 * every quantity on a device and compares it with its bound.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selftest/derive.hpp"
#include "selftest/device.hpp"
#include "selftest/isometry.hpp"

namespace selftest {

inline constexpr double kDefaultCertTol = 1e-9;

/// (11 eps1 + 5 eps2) / 2: extraction error for every M, N in {I, X, Z}.
double extraction_bound(double eps1, double eps2);

struct StateBounds {
    double preNormalization = 0.0; ///< eps1 + 2 eps2
    double normalized = 0.0;       ///< 3/2 eps1 + 5/2 eps2
};

/// Distance of Phi(psi) from the unnormalized and normalized junk (x) phi+.
StateBounds state_bounds(double eps1, double eps2);

/// sqrt2 eps + 2 sqrt2 (eps sqrt2)^(1/4), for the measured B0 / B1 settings.
/// Requires 0 < eps < 1; eps == 0 is accepted and gives 0.
double b_operator_bound(double epsilon);

/// 1 - (9 sqrt2 eps + 2^(1/4) 100 eps^(1/2) + 2^(3/8) 60 eps^(3/4)) / 4,
/// clamped below at 0. Leading-order lower bound on the Mayers-Yao fidelity
/// in terms of the CHSH deficit.
double my_fidelity_bound(double epsilon);

/// Reference value quoted alongside my_fidelity_bound: fidelity 0.20 at
/// eps = 1e-4. Reported next to the formula value, never asserted against it.
inline constexpr double kQuotedFidelityEpsilon = 1e-4;
inline constexpr double kQuotedFidelityValue = 0.20;

enum class Comparison {
    AtMost, ///< pass iff measured <= bound + tol
    AtLeast ///< pass iff measured >= bound - tol
};

struct ReportRow {
    std::string group; ///< condition, extraction, state, b-operator, *-chain
    std::string name;
    Comparison cmp = Comparison::AtMost;
    double measured = 0.0;
    double bound = 0.0; ///< value the pass flag is computed against
    /// Closed-form (leading-order) and untruncated variants when both exist.
    std::optional<double> closedFormBound;
    std::optional<double> exactBound;
    bool applicable = true;
    bool pass = true;
    std::string anchor; ///< the inequality this row checks
    std::string note;

    /// bound - measured for AtMost rows, measured - bound for AtLeast rows.
    [[nodiscard]] double slack() const noexcept;
};

struct CertificationReport {
    Mode mode = Mode::Chsh;
    double certTol = kDefaultCertTol;
    double epsilon = 0.0;
    std::optional<double> chshValue;
    CorrelationTable correlations;
    bool budgetApplicable = true; ///< epsilon in [0, 1)
    EpsilonBudget budgets;
    ResidualSet residuals;
    double junkNormRaw = 0.0;
    std::optional<std::string> degenerate;
    std::optional<double> fidelityBound; ///< CHSH mode only
    std::vector<ReportRow> rows;

    [[nodiscard]] bool all_pass() const noexcept;
    [[nodiscard]] std::size_t count(const std::string &group) const;
    [[nodiscard]] const ReportRow &row(const std::string &group,
                                       const std::string &name) const;
    [[nodiscard]] double max_extraction_error() const;
};

struct CertifyOptions {
    double certTol = kDefaultCertTol;
    double zeroTol = kDefaultZeroTol;
    double degeneracyTol = kDefaultDegeneracyTol;
};

/// Full pipeline: deviation, budgets, operators, residuals, chain
/// quantities, extraction errors. Throws ValidationError when the device
/// fails validation or lacks the mode's observables. A degenerate
/// extraction becomes failed rows, not an exception.
CertificationReport certify(const DeviceModel &device, Mode mode,
                            const CertifyOptions &options = {});

/// Number of rows certify emits for a mode (used by row-count checks).
std::size_t expected_row_count(Mode mode);

} // namespace selftest
