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

#include "selftest/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "selftest/errors.hpp"

namespace selftest {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonnegative(double v, const char *who) {
    if (!(v >= 0.0)) {
        std::ostringstream msg;
        msg << who << ": arguments must be nonnegative, got " << v;
        throw ValidationError(msg.str());
    }
}

// Builds rows and fixes up their pass flag in one place.
class RowSink {
  public:
    RowSink(std::vector<ReportRow> &rows, double tol) : rows_(rows), tol_(tol) {}

    ReportRow &add(std::string group, std::string name, Comparison cmp,
                   double measured, double bound, std::string anchor) {
        ReportRow r;
        r.group = std::move(group);
        r.name = std::move(name);
        r.cmp = cmp;
        r.measured = measured;
        r.bound = bound;
        r.anchor = std::move(anchor);
        rows_.push_back(std::move(r));
        return rows_.back();
    }

    ReportRow &at_most(std::string group, std::string name, double measured,
                       double bound, std::string anchor) {
        return add(std::move(group), std::move(name), Comparison::AtMost,
                   measured, bound, std::move(anchor));
    }

    ReportRow &at_least(std::string group, std::string name, double measured,
                        double bound, std::string anchor) {
        return add(std::move(group), std::move(name), Comparison::AtLeast,
                   measured, bound, std::move(anchor));
    }

    void finalize() {
        for (auto &r : rows_) {
            if (!r.applicable) {
                r.pass = true;
                continue;
            }
            if (!std::isfinite(r.measured) || std::isnan(r.bound)) {
                r.pass = false;
                continue;
            }
            r.pass = r.cmp == Comparison::AtMost ? r.measured <= r.bound + tol_
                                                 : r.measured >= r.bound - tol_;
        }
    }

  private:
    std::vector<ReportRow> &rows_;
    double tol_;
};

void mark_not_applicable(ReportRow &r, const std::string &why) {
    r.applicable = false;
    r.note = why;
}

// Budget-based row: the pass bound is the larger of the closed-form and
// untruncated values.
ReportRow &budget_row(RowSink &sink, const std::string &group,
                      const std::string &name, double measured,
                      double closed_form, double exact, const std::string &anchor) {
    ReportRow &r =
        sink.at_most(group, name, measured, std::max(closed_form, exact), anchor);
    r.closedFormBound = closed_form;
    r.exactBound = exact;
    return r;
}

bool has_kernel(const ComplexMatrix &m, double zero_tol) {
    const HermitianEigen eig = hermitian_eig(m);
    double largest = 0.0;
    for (double v : eig.values) {
        largest = std::max(largest, std::abs(v));
    }
    if (largest == 0.0) {
        return true;
    }
    return std::any_of(eig.values.begin(), eig.values.end(), [&](double v) {
        return std::abs(v) <= zero_tol * largest;
    });
}

void add_chsh_chain(RowSink &sink, const DeviceModel &device,
                    const CertificationReport &rep,
                    const CertifyOptions &opt) {
    const std::string g = "chsh-chain";
    const NamedValues v = chsh_chain_residuals(device, opt.zeroTol);
    const EpsilonBudget &b = rep.budgets;
    const double root_delta = std::sqrt(std::max(0.0, b.delta));
    const double eps_prime = std::max(b.epsPrime, b.epsPrimeExact);
    const double expect_floor = kSqrt2 * (1.0 - eps_prime);
    const double dist_exact = std::sqrt(
        std::min(b.eps1Exact + 2.0 * b.epsPrimeExact, b.eps1 + 2.0 * b.epsPrime));
    const double dist_exact_safe =
        std::sqrt(std::max(b.eps1Exact + 2.0 * b.epsPrimeExact,
                           b.eps1 + 2.0 * b.epsPrime));
    (void)dist_exact;
    const double dist_closed_form = 2.0 * std::pow(b.epsilon * kSqrt2, 0.25);

    std::vector<ReportRow *> budget_rows;
    budget_rows.push_back(&sink.at_least(
        g, "commutator_product", v.at("commutator_product"), 4.0 - b.delta,
        "<[A0,A1][B1,B0]> >= 4 - delta, delta = 4 sqrt2 eps - eps^2"));
    for (const char *name : {"norm_A0A1_plus_B1B0", "norm_A0A1_minus_B0B1",
                             "norm_A1A0_minus_B1B0", "norm_A1A0_plus_B0B1"}) {
        budget_rows.push_back(&sink.at_most(g, name, v.at(name), root_delta,
                                            "||(A A' +- B B') psi|| <= sqrt(delta)"));
    }
    budget_rows.push_back(&budget_row(
        sink, g, "anticomm_A0A1", v.at("anticomm_A0A1"), 2.0 * b.eps1,
        2.0 * b.eps1Exact, "||{A0,A1} psi|| <= 2 eps1"));
    budget_rows.push_back(&budget_row(
        sink, g, "anticomm_B0B1", v.at("anticomm_B0B1"), 2.0 * b.eps1,
        2.0 * b.eps1Exact, "||{B0,B1} psi|| <= 2 eps1"));
    budget_rows.push_back(&sink.at_least(
        g, "xa_bsum_expectation", v.at("xa_bsum_expectation"), expect_floor,
        "<X'_A (B0+B1)> >= sqrt2 (1 - eps')"));
    budget_rows.push_back(&sink.at_least(
        g, "za_bdiff_expectation", v.at("za_bdiff_expectation"), expect_floor,
        "<Z'_A (B0-B1)> >= sqrt2 (1 - eps')"));
    budget_rows.push_back(&sink.at_least(
        g, "abs_bsum_expectation", v.at("abs_bsum_expectation"), expect_floor,
        "<|B0+B1|> >= sqrt2 (1 - eps')"));
    for (const char *name : {"xa_bsum_distance", "xb_bsum_distance",
                             "za_bdiff_distance", "zb_bdiff_distance"}) {
        budget_rows.push_back(&budget_row(
            sink, g, name, v.at(name), dist_closed_form, dist_exact_safe,
            "||(O' - (B0 +- B1)/sqrt2) psi|| <= sqrt(eps1 + 2 eps') ~ "
            "2 (eps sqrt2)^(1/4)"));
    }
    if (!rep.budgetApplicable) {
        for (ReportRow *r : budget_rows) {
            mark_not_applicable(*r, "epsilon outside [0, 1)");
        }
    }

    // Exact anticommutation holds only where B0 +- B1 has no kernel.
    ReportRow &exact = sink.at_most(
        g, "xb_zb_exact_anticommutation", rep.residuals.anticommB, 0.0,
        "{X'_B, Z'_B} = 0 for X'_B, Z'_B = sign(B0 +- B1)");
    const ComplexMatrix &b0 = device.observable(Party::Bob, names::B0);
    const ComplexMatrix &b1 = device.observable(Party::Bob, names::B1);
    if (has_kernel(b0 + b1, opt.zeroTol) || has_kernel(b0 - b1, opt.zeroTol)) {
        mark_not_applicable(exact, "B0 + B1 or B0 - B1 is singular");
    }
}

void add_my_chain(RowSink &sink, const DeviceModel &device,
                  const CertificationReport &rep) {
    const std::string g = "my-chain";
    const NamedValues v = my_chain_residuals(device);
    const double eps = rep.epsilon;
    const double root = std::sqrt(2.0 * eps);
    const double eps_prime = rep.budgets.epsPrime;
    const double anti_a = 2.0 * (1.0 + kSqrt2) * eps_prime;

    std::vector<ReportRow *> rows;
    rows.push_back(&sink.at_most(g, "zx_expectation", v.at("zx_expectation"),
                                 eps + root, "<Z'_A X'_A> <= eps + sqrt(2 eps)"));
    rows.push_back(&sink.at_most(g, "sum_xz_norm", v.at("sum_xz_norm"),
                                 std::sqrt(1.0 + eps + root),
                                 "||(X'_A + Z'_A)/sqrt2 psi|| <= "
                                 "sqrt(1 + eps + sqrt(2 eps))"));
    rows.push_back(&sink.at_most(
        g, "db_distance", v.at("db_distance"), eps_prime,
        "||(D'_B - (X'_A + Z'_A)/sqrt2) psi|| <= eps' = "
        "sqrt((1 + 2 sqrt2) eps + sqrt(2 eps))"));
    rows.push_back(&sink.at_most(g, "anticomm_A", v.at("anticomm_A"), anti_a,
                                 "||{X'_A, Z'_A} psi|| <= 2 (1 + sqrt2) eps'"));
    rows.push_back(&sink.at_most(g, "zaxa_minus_xbzb", v.at("zaxa_minus_xbzb"),
                                 2.0 * root,
                                 "||(Z'_A X'_A - X'_B Z'_B) psi|| <= 2 sqrt(2 eps)"));
    rows.push_back(&sink.at_most(g, "xaza_minus_zbxb", v.at("xaza_minus_zbxb"),
                                 2.0 * root,
                                 "||(X'_A Z'_A - Z'_B X'_B) psi|| <= 2 sqrt(2 eps)"));
    rows.push_back(&sink.at_most(
        g, "anticomm_B", v.at("anticomm_B"), anti_a + 4.0 * root,
        "||{X'_B, Z'_B} psi|| <= 2 (1 + sqrt2) eps' + 4 sqrt(2 eps)"));
    if (!rep.budgetApplicable) {
        for (ReportRow *r : rows) {
            mark_not_applicable(*r, "epsilon outside [0, 1)");
        }
    }
}

} // namespace

double extraction_bound(double eps1, double eps2) {
    require_nonnegative(eps1, "extraction_bound");
    require_nonnegative(eps2, "extraction_bound");
    return (11.0 * eps1 + 5.0 * eps2) / 2.0;
}

StateBounds state_bounds(double eps1, double eps2) {
    require_nonnegative(eps1, "state_bounds");
    require_nonnegative(eps2, "state_bounds");
    return StateBounds{eps1 + 2.0 * eps2, 1.5 * eps1 + 2.5 * eps2};
}

double b_operator_bound(double epsilon) {
    if (epsilon == 0.0) {
        return 0.0;
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        std::ostringstream msg;
        msg << "b_operator_bound: epsilon must lie in (0, 1), got " << epsilon;
        throw ValidationError(msg.str());
    }
    return kSqrt2 * epsilon + 2.0 * kSqrt2 * std::pow(epsilon * kSqrt2, 0.25);
}

double my_fidelity_bound(double epsilon) {
    require_nonnegative(epsilon, "my_fidelity_bound");
    const double loss = 9.0 * kSqrt2 * epsilon +
                        std::pow(2.0, 0.25) * 100.0 * std::sqrt(epsilon) +
                        std::pow(2.0, 0.375) * 60.0 * std::pow(epsilon, 0.75);
    return std::max(0.0, 1.0 - loss / 4.0);
}

double ReportRow::slack() const noexcept {
    return cmp == Comparison::AtMost ? bound - measured : measured - bound;
}

bool CertificationReport::all_pass() const noexcept {
    return std::all_of(rows.begin(), rows.end(),
                       [](const ReportRow &r) { return r.pass; });
}

std::size_t CertificationReport::count(const std::string &group) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(),
                      [&](const ReportRow &r) { return r.group == group; }));
}

const ReportRow &CertificationReport::row(const std::string &group,
                                          const std::string &name) const {
    for (const auto &r : rows) {
        if (r.group == group && r.name == name) {
            return r;
        }
    }
    throw ValidationError("report has no row " + group + "/" + name);
}

double CertificationReport::max_extraction_error() const {
    double m = 0.0;
    for (const auto &r : rows) {
        if (r.group == "extraction") {
            if (!std::isfinite(r.measured)) {
                return kNaN;
            }
            m = std::max(m, r.measured);
        }
    }
    return m;
}

std::size_t expected_row_count(Mode mode) {
    // condition 4, extraction 9, state 2, extraction-chain 8
    constexpr std::size_t common = 4 + 9 + 2 + 8;
    // chsh-chain 15, b-operator 6 | my-chain 7
    return mode == Mode::Chsh ? common + 15 + 6 : common + 7;
}

CertificationReport certify(const DeviceModel &device, Mode mode,
                            const CertifyOptions &opt) {
    require_valid(device);
    require_observables(device, mode);

    CertificationReport rep;
    rep.mode = mode;
    rep.certTol = opt.certTol;
    if (mode == Mode::Chsh) {
        CorrelationTable table;
        for (const char *a : {names::A0, names::A1}) {
            for (const char *b : {names::B0, names::B1}) {
                table.entries[{a, b}] = correlation(device, a, b);
            }
        }
        const ChshResult chsh = chsh_from_table(table);
        rep.correlations = std::move(table);
        rep.chshValue = chsh.value;
        rep.epsilon = chsh.epsilon;
        rep.fidelityBound = my_fidelity_bound(chsh.epsilon);
    } else {
        MyDeviation dev = my_deviation(device);
        rep.correlations = std::move(dev.table);
        rep.epsilon = dev.epsilon;
    }
    rep.budgetApplicable = rep.epsilon < 1.0;
    if (rep.budgetApplicable) {
        rep.budgets = budget_for(mode, rep.epsilon);
    } else {
        rep.budgets.epsilon = rep.epsilon;
    }

    const DerivedOperators ops = operators_for(device, mode, opt.zeroTol);
    rep.residuals = condition_residuals(device.state, ops, device.dims);
    const ResidualSet &res = rep.residuals;
    const double e1 = res.eps1();
    const double e2 = res.eps2();

    // Rows are referenced while later rows are appended.
    rep.rows.reserve(expected_row_count(mode));
    RowSink sink(rep.rows, opt.certTol);

    // Sufficient conditions against the epsilon budget.
    {
        const EpsilonBudget &b = rep.budgets;
        ReportRow *rows[] = {
            &budget_row(sink, "condition", "anticomm_A", res.anticommA,
                        2.0 * b.eps1, 2.0 * b.eps1Exact,
                        "||{X'_A, Z'_A} psi|| <= 2 eps1"),
            &budget_row(sink, "condition", "anticomm_B", res.anticommB,
                        2.0 * b.eps1, 2.0 * b.eps1Exact,
                        "||{X'_B, Z'_B} psi|| <= 2 eps1"),
            &budget_row(sink, "condition", "diff_X", res.diffX, b.eps2,
                        b.eps2Exact, "||(X'_A - X'_B) psi|| <= eps2"),
            &budget_row(sink, "condition", "diff_Z", res.diffZ, b.eps2,
                        b.eps2Exact, "||(Z'_A - Z'_B) psi|| <= eps2"),
        };
        if (!rep.budgetApplicable) {
            for (ReportRow *r : rows) {
                mark_not_applicable(*r, "epsilon outside [0, 1)");
            }
        }
    }

    // Extraction, against measured residuals and (informational) budgets.
    const double from_measured = extraction_bound(e1, e2);
    const std::optional<double> from_budget_closed =
        rep.budgetApplicable
            ? std::optional<double>(
                  extraction_bound(rep.budgets.eps1, rep.budgets.eps2))
            : std::nullopt;
    const std::optional<double> from_budget_exact =
        rep.budgetApplicable
            ? std::optional<double>(extraction_bound(rep.budgets.eps1Exact,
                                                     rep.budgets.eps2Exact))
            : std::nullopt;
    const StateBounds sb = state_bounds(e1, e2);

    std::optional<ExtractionResult> extraction;
    try {
        extraction = extraction_error(device, ops, opt.degeneracyTol);
        rep.junkNormRaw = extraction->junkNormRaw;
    } catch (const DegenerateExtraction &ex) {
        rep.degenerate = ex.what();
        rep.junkNormRaw = ex.raw_norm();
    }

    for (LocalOp m : kLocalOps) {
        for (LocalOp n : kLocalOps) {
            const double measured =
                extraction ? extraction->errorsByPair.at({m, n}) : kNaN;
            ReportRow &r = sink.at_most(
                "extraction", local_op_name(m) + local_op_name(n), measured,
                from_measured,
                "||Phi(M'N' psi) - junk (x) M N phi+|| <= (11 eps1 + 5 eps2)/2");
            r.closedFormBound = from_budget_closed;
            r.exactBound = from_budget_exact;
            if (!extraction) {
                r.note = *rep.degenerate;
            } else {
                std::ostringstream note;
                note << "best-junk error " << std::setprecision(6)
                     << extraction->bestJunkErrorsByPair.at({m, n});
                r.note = note.str();
            }
        }
    }

    // State rows.
    {
        const double inv = 0.5 / kSqrt2;
        const ComplexMatrix id = ComplexMatrix::identity(device.dims.total());
        const ComplexMatrix za = tensor_embed(ops.ZA, Party::Alice, device.dims);
        const ComplexMatrix zb = tensor_embed(ops.ZB, Party::Bob, device.dims);
        StateVector raw = (id + za) * ((id + zb) * device.state);
        raw *= cplx{inv};
        const StateVector out =
            extraction ? extraction->outputState
                       : apply_isometry(device, ops, LocalOp::I, LocalOp::I);
        sink.at_most("state", "pre_normalization",
                     distance(out, with_ancillas(raw, phi_plus())),
                     sb.preNormalization,
                     "||Phi(psi) - (I+Z'_A)(I+Z'_B) psi/(2 sqrt2) (x) phi+|| "
                     "<= eps1 + 2 eps2");
        ReportRow &norm_row = sink.at_most(
            "state", "normalized",
            extraction ? distance(out, with_ancillas(extraction->junk,
                                                     phi_plus()))
                       : kNaN,
            sb.normalized,
            "||Phi(psi) - junk (x) phi+|| <= 3/2 eps1 + 5/2 eps2");
        if (!extraction) {
            norm_row.note = *rep.degenerate;
        }
    }

    // Quantities feeding the extraction bound (measured residuals).
    {
        const std::string g = "extraction-chain";
        const NamedValues v =
            extraction_chain_residuals(device.state, ops, device.dims);
        sink.at_most(g, "z_expectation_A", std::abs(v.at("z_expectation_A")),
                     e1 + e2, "|<Z'_A>| <= eps1 + eps2");
        sink.at_most(g, "z_expectation_B", std::abs(v.at("z_expectation_B")),
                     e1 + e2, "|<Z'_B>| <= eps1 + eps2");
        sink.at_least(g, "zz_expectation", v.at("zz_expectation"),
                      1.0 - e2 * e2 / 2.0, "<Z'_A Z'_B> >= 1 - eps2^2/2");
        sink.at_most(g, "line2_norm", v.at("line2_norm"), e2 / 2.0,
                     "||X'_B (I+Z'_A)(I-Z'_B) psi||/4 <= eps2/2");
        sink.at_most(g, "line3_norm", v.at("line3_norm"), e2 / 2.0,
                     "||X'_A (I-Z'_A)(I+Z'_B) psi||/4 <= eps2/2");
        sink.at_most(g, "line14_distance", v.at("line14_distance"), e1 + e2,
                     "||X'_A X'_B (I-Z'_A)(I-Z'_B) psi - (I+Z'_A)(I+Z'_B) "
                     "psi||/4 <= eps1 + eps2");
        sink.at_most(g, "junk_norm_upper", rep.junkNormRaw,
                     std::sqrt(1.0 + e1 + e2),
                     "||(I+Z'_A)(I+Z'_B) psi||/(2 sqrt2) <= sqrt(1 + eps1 + "
                     "eps2)");
        sink.at_least(g, "junk_norm_lower", rep.junkNormRaw,
                      std::sqrt(std::max(0.0, 1.0 - e1 - e2)),
                      "||(I+Z'_A)(I+Z'_B) psi||/(2 sqrt2) >= sqrt(1 - eps1 - "
                      "eps2)");
    }

    if (mode == Mode::Chsh) {
        add_chsh_chain(sink, device, rep, opt);

        const double bbound =
            rep.budgetApplicable ? b_operator_bound(rep.epsilon) : kNaN;
        for (LocalOp m : kLocalOps) {
            for (BSetting which : {BSetting::B0, BSetting::B1}) {
                const std::string name =
                    local_op_name(m) + (which == BSetting::B0 ? "B0" : "B1");
                double measured = kNaN;
                if (extraction) {
                    measured = b_measured_error(device, ops, m, which,
                                                opt.degeneracyTol);
                }
                ReportRow &r = sink.at_most(
                    "b-operator", name, measured, bbound,
                    "||Phi(M' B_i psi) - junk (x) M (X +- Z)/sqrt2 phi+|| <= "
                    "sqrt2 eps + 2 sqrt2 (eps sqrt2)^(1/4)");
                if (!rep.budgetApplicable) {
                    mark_not_applicable(r, "epsilon outside [0, 1)");
                } else if (!extraction) {
                    r.note = *rep.degenerate;
                }
            }
        }
    } else {
        add_my_chain(sink, device, rep);
    }

    sink.finalize();
    if (rep.rows.size() != expected_row_count(mode)) {
        throw std::logic_error("certify emitted " +
                               std::to_string(rep.rows.size()) + " rows");
    }
    return rep;
}

} // namespace selftest
