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

#include "selftest/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "selftest/errors.hpp"

namespace selftest::io {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json number(const std::optional<double> &v) {
    return v ? number(*v) : json(nullptr);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number()) {
        throw FormatError(where + ": expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json &j, const std::string &where) {
    if (!j.is_array() || j.empty()) {
        throw FormatError(where + ": expected a nonempty array of rows");
    }
    const std::size_t n = j.size();
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) {
            throw FormatError(where + ": row " + std::to_string(i) +
                              " must have " + std::to_string(n) + " entries");
        }
        for (std::size_t k = 0; k < n; ++k) {
            m(i, k) = complex_from_json(
                j[i][k], where + "[" + std::to_string(i) + "][" +
                             std::to_string(k) + "]");
        }
    }
    return m;
}

const json &member(const json &doc, const char *key, const std::string &where) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw FormatError(where + ": missing field '" + key + "'");
    }
    return doc.at(key);
}

Dims dims_from_json(const json &j, const std::string &where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned()) {
        throw FormatError(where + ": dims must be [dA, dB] with positive integers");
    }
    const Dims d{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
    if (d.alice == 0 || d.bob == 0) {
        throw FormatError(where + ": dims must be positive");
    }
    return d;
}

std::string comparison_text(Comparison c) {
    return c == Comparison::AtMost ? "<=" : ">=";
}

json budget_to_json(const EpsilonBudget &b) {
    return json{{"epsilon", number(b.epsilon)},
                {"eps1", number(b.eps1)},
                {"eps2", number(b.eps2)},
                {"delta", number(b.delta)},
                {"epsPrime", number(b.epsPrime)},
                {"eps1Exact", number(b.eps1Exact)},
                {"eps2Exact", number(b.eps2Exact)},
                {"epsPrimeExact", number(b.epsPrimeExact)},
                {"eps1Safe", number(b.eps1Safe())},
                {"eps2Safe", number(b.eps2Safe())}};
}

json residuals_to_json(const ResidualSet &r) {
    return json{{"anticommA", number(r.anticommA)},
                {"anticommB", number(r.anticommB)},
                {"diffX", number(r.diffX)},
                {"diffZ", number(r.diffZ)},
                {"eps1", number(r.eps1())},
                {"eps2", number(r.eps2())}};
}

json row_to_json(const ReportRow &r) {
    return json{{"group", r.group},
                {"name", r.name},
                {"comparison", comparison_text(r.cmp)},
                {"measured", number(r.measured)},
                {"bound", number(r.bound)},
                {"closedFormBound", number(r.closedFormBound)},
                {"exactBound", number(r.exactBound)},
                {"slack", number(r.slack())},
                {"applicable", r.applicable},
                {"pass", r.pass},
                {"anchor", r.anchor},
                {"note", r.note}};
}

std::vector<std::string> chsh_alice() { return {names::A0, names::A1}; }
std::vector<std::string> chsh_bob() { return {names::B0, names::B1}; }
std::vector<std::string> my_alice() { return {names::XA, names::ZA}; }
std::vector<std::string> my_bob() { return {names::XB, names::ZB, names::DB}; }

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json device_to_json(const DeviceModel &device, const json &metadata) {
    json state = json::array();
    for (std::size_t i = 0; i < device.state.dim(); ++i) {
        state.push_back(complex_to_json(device.state[i]));
    }
    json alice = json::object();
    for (const auto &[name, op] : device.alice) {
        alice[name] = matrix_to_json(op);
    }
    json bob = json::object();
    for (const auto &[name, op] : device.bob) {
        bob[name] = matrix_to_json(op);
    }
    return json{{"schemaVersion", kDeviceSchema},
                {"dims", json::array({device.dims.alice, device.dims.bob})},
                {"state", std::move(state)},
                {"observables", json{{"alice", alice}, {"bob", bob}}},
                {"metadata", metadata}};
}

DeviceDocument device_from_json(const json &doc) {
    const std::string where = "device document";
    const json &schema = member(doc, "schemaVersion", where);
    if (!schema.is_string() || schema.get<std::string>() != kDeviceSchema) {
        throw FormatError(where + ": unsupported schemaVersion " + schema.dump() +
                          " (expected \"" + kDeviceSchema + "\")");
    }
    DeviceDocument out;
    out.device.dims = dims_from_json(member(doc, "dims", where), where);
    const json &state = member(doc, "state", where);
    if (!state.is_array() || state.empty()) {
        throw FormatError(where + ": state must be a nonempty array");
    }
    out.device.state = StateVector(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        out.device.state[i] =
            complex_from_json(state[i], "state[" + std::to_string(i) + "]");
    }
    const json &obs = member(doc, "observables", where);
    for (const auto &[key, target] :
         {std::pair{"alice", &out.device.alice}, std::pair{"bob", &out.device.bob}}) {
        const json &side = member(obs, key, "observables");
        if (!side.is_object()) {
            throw FormatError(std::string("observables.") + key +
                              " must be an object");
        }
        for (const auto &[name, m] : side.items()) {
            (*target)[name] = matrix_from_json(m, name);
        }
    }
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) {
            throw FormatError(where + ": metadata must be an object");
        }
        out.metadata = doc["metadata"];
    }
    require_valid(out.device);
    return out;
}

std::string serialize_device(const DeviceModel &device, const json &metadata) {
    return device_to_json(device, metadata).dump(2) + "\n";
}

DeviceDocument parse_device(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("parse error: ") + e.what() +
                          " (byte " + std::to_string(e.byte) + ")");
    }
    return device_from_json(doc);
}

DeviceDocument load_device(const std::filesystem::path &path) {
    return parse_device(read_file(path));
}

FamilySpec family_from_json(const json &doc) {
    const std::string where = "family document";
    FamilySpec spec;
    const json &kind = member(doc, "kind", where);
    if (!kind.is_string()) {
        throw FormatError(where + ": kind must be a string");
    }
    spec.kind = parse_family(kind.get<std::string>());
    if (doc.contains("mode")) {
        spec.mode = parse_mode(doc["mode"].get<std::string>());
    }
    if (doc.contains("dims")) {
        spec.dims = dims_from_json(doc["dims"], where);
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            throw FormatError(where + ": seed must be a nonnegative integer");
        }
        spec.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("parameters")) {
        const json &params = doc["parameters"];
        if (!params.is_object()) {
            throw FormatError(where + ": parameters must be an object");
        }
        for (const auto &[name, v] : params.items()) {
            if (v.is_number()) {
                spec.parameters[name] = v.get<double>();
            } else if (v.is_object()) {
                const json &steps = member(v, "steps", name);
                if (!steps.is_number_unsigned()) {
                    throw FormatError(name + ": steps must be a nonnegative integer");
                }
                const json &start = member(v, "start", name);
                const json &stop = member(v, "stop", name);
                if (!start.is_number() || !stop.is_number()) {
                    throw FormatError(name + ": start and stop must be numbers");
                }
                spec.parameters[name] = ParamRange{
                    start.get<double>(), stop.get<double>(),
                    steps.get<std::size_t>()};
            } else {
                throw FormatError(name +
                                  ": expected a number or {start, stop, steps}");
            }
        }
    }
    validate_spec(spec);
    return spec;
}

json family_to_json(const FamilySpec &spec) {
    json params = json::object();
    for (const auto &[name, v] : spec.parameters) {
        if (const auto *r = std::get_if<ParamRange>(&v)) {
            params[name] = json{{"start", r->start}, {"stop", r->stop},
                                {"steps", r->steps}};
        } else {
            params[name] = std::get<double>(v);
        }
    }
    return json{{"kind", family_name(spec.kind)},
                {"mode", mode_name(spec.mode)},
                {"dims", json::array({spec.dims.alice, spec.dims.bob})},
                {"seed", spec.seed},
                {"parameters", params}};
}

FamilySpec load_family(const std::filesystem::path &path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("parse error: ") + e.what());
    }
    return family_from_json(doc);
}

CorrelationTable table_from_json(const json &doc, Mode mode) {
    const json &corr = member(doc, "correlations", "correlation table");
    if (!corr.is_object()) {
        throw FormatError("correlations must be an object");
    }
    const auto alice = mode == Mode::Chsh ? chsh_alice() : my_alice();
    const auto bob = mode == Mode::Chsh ? chsh_bob() : my_bob();
    CorrelationTable table;
    std::string missing;
    for (const auto &a : alice) {
        for (const auto &b : bob) {
            if (!corr.contains(a) || !corr[a].is_object() ||
                !corr[a].contains(b)) {
                missing += (missing.empty() ? "" : ", ") + a + "-" + b;
                continue;
            }
            const json &v = corr[a][b];
            if (!v.is_number()) {
                throw FormatError("correlation " + a + "-" + b +
                                  " must be a number");
            }
            const double x = v.get<double>();
            if (!(x >= -1.0 && x <= 1.0)) {
                throw ValidationError("correlation " + a + "-" + b + " = " +
                                      format_double(x) + " outside [-1, 1]");
            }
            table.entries[{a, b}] = x;
        }
    }
    if (!missing.empty()) {
        throw ValidationError("correlation table lacks " + mode_name(mode) +
                              " entries: " + missing);
    }
    return table;
}

json table_to_json(const CorrelationTable &table) {
    json corr = json::object();
    for (const auto &[key, v] : table.entries) {
        corr[key.first][key.second] = number(v);
    }
    return json{{"correlations", corr}};
}

json fidelity_to_json(std::optional<double> at_epsilon) {
    const double formula = my_fidelity_bound(kQuotedFidelityEpsilon);
    return json{
        {"formulaValue", number(at_epsilon)},
        {"anchor", "F >= 1 - (9 sqrt2 eps + 2^(1/4) 100 eps^(1/2) + "
                   "2^(3/8) 60 eps^(3/4))/4"},
        {"quotedEpsilon", kQuotedFidelityEpsilon},
        {"quotedValue", kQuotedFidelityValue},
        {"formulaAtQuotedEpsilon", formula},
        {"discrepancy",
         std::abs(formula - kQuotedFidelityValue) > kFidelityDiscrepancyTol}};
}

json report_to_json(const CertificationReport &report,
                    const std::string &inputs_digest) {
    json rows = json::array();
    for (const auto &r : report.rows) {
        rows.push_back(row_to_json(r));
    }
    json doc{{"schemaVersion", kReportSchema},
             {"toolVersion", SELFTEST_VERSION},
             {"mode", mode_name(report.mode)},
             {"inputsDigest", inputs_digest},
             {"certTol", report.certTol},
             {"epsilon", number(report.epsilon)},
             {"chshValue", number(report.chshValue)},
             {"correlations", table_to_json(report.correlations)["correlations"]},
             {"budgetApplicable", report.budgetApplicable},
             {"budgets", budget_to_json(report.budgets)},
             {"residuals", residuals_to_json(report.residuals)},
             {"junkNormRaw", number(report.junkNormRaw)},
             {"degenerate", report.degenerate ? json(*report.degenerate)
                                              : json(nullptr)},
             {"maxExtractionError", number(report.max_extraction_error())},
             {"rowCount", report.rows.size()},
             {"allPass", report.all_pass()},
             {"rows", std::move(rows)}};
    if (report.fidelityBound) {
        doc["fidelity"] = fidelity_to_json(report.fidelityBound);
    }
    return doc;
}

json correlation_report(const CorrelationTable &table, Mode mode) {
    json doc{{"schemaVersion", kCorrelationReportSchema},
             {"toolVersion", SELFTEST_VERSION},
             {"mode", mode_name(mode)},
             {"correlations", table_to_json(table)["correlations"]},
             {"extraction",
              "not available: extraction errors need a device model; the "
              "guarantees from correlations alone are the budgets below"}};
    double epsilon = 0.0;
    if (mode == Mode::Chsh) {
        const ChshResult r = chsh_from_table(table);
        doc["chshValue"] = r.value;
        epsilon = r.epsilon;
    } else {
        epsilon = my_epsilon_from_table(table);
    }
    doc["epsilon"] = epsilon;
    const bool applicable = epsilon < 1.0;
    doc["budgetApplicable"] = applicable;
    if (applicable) {
        const EpsilonBudget b = budget_for(mode, epsilon);
        doc["budgets"] = budget_to_json(b);
        doc["extractionBound"] = json{
            {"closedForm", extraction_bound(b.eps1, b.eps2)},
            {"exact", extraction_bound(b.eps1Exact, b.eps2Exact)},
            {"safe", extraction_bound(b.eps1Safe(), b.eps2Safe())},
            {"anchor", "(11 eps1 + 5 eps2)/2"}};
        if (mode == Mode::Chsh) {
            doc["bOperatorBound"] = json{
                {"value", b_operator_bound(epsilon)},
                {"anchor", "sqrt2 eps + 2 sqrt2 (eps sqrt2)^(1/4)"}};
        }
    } else {
        doc["budgets"] = nullptr;
        doc["note"] = "epsilon outside [0, 1): budgets not applicable";
    }
    doc["fidelity"] = fidelity_to_json(my_fidelity_bound(epsilon));
    return doc;
}

std::string sweep_csv(const std::vector<SweepRecord> &records) {
    std::ostringstream out;
    std::vector<std::string> params;
    if (!records.empty()) {
        for (const auto &[name, v] : records.front().parameters) {
            params.push_back(name);
        }
    }
    for (const auto &p : params) {
        out << p << ',';
    }
    out << "epsilon,eps1,eps2,maxError,bound,slack\n";
    for (const auto &r : records) {
        for (const auto &p : params) {
            out << format_double(r.parameters.at(p)) << ',';
        }
        out << format_double(r.epsilon) << ',' << format_double(r.measuredEps1)
            << ',' << format_double(r.measuredEps2) << ','
            << format_double(r.maxExtractionError) << ','
            << format_double(r.bound) << ',' << format_double(r.slack) << '\n';
    }
    return out.str();
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                   nullptr) != 1) {
        throw NumericalError("sha256 digest failed");
    }
    std::ostringstream out;
    out << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) {
        out << std::setw(2) << static_cast<int>(digest[i]);
    }
    return out.str();
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_atomic(const std::filesystem::path &path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("cannot write " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

} // namespace selftest::io
