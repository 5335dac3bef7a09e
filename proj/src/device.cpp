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

#include "selftest/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "selftest/errors.hpp"

namespace selftest {

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

ComplexMatrix named_pauli(const std::string &name) {
    if (name == "X") {
        return pauli::X();
    }
    if (name == "Z") {
        return pauli::Z();
    }
    if (name == "D") {
        return pauli::D();
    }
    throw ValidationError("unknown ideal operator '" + name + "'");
}

// (alice observable, bob observable, ideal M, ideal N)
constexpr std::array<std::array<const char *, 4>, 6> kMyPairs{{
    {"XA", "XB", "X", "X"},
    {"XA", "ZB", "X", "Z"},
    {"XA", "DB", "X", "D"},
    {"ZA", "XB", "Z", "X"},
    {"ZA", "ZB", "Z", "Z"},
    {"ZA", "DB", "Z", "D"},
}};

} // namespace

std::string mode_name(Mode m) { return m == Mode::Chsh ? "chsh" : "my"; }

Mode parse_mode(const std::string &text) {
    if (text == "chsh") {
        return Mode::Chsh;
    }
    if (text == "my") {
        return Mode::MayersYao;
    }
    throw ValidationError("unknown mode '" + text + "' (expected chsh or my)");
}

const ComplexMatrix &DeviceModel::observable(Party p,
                                             const std::string &name) const {
    const auto &obs = observables(p);
    const auto it = obs.find(name);
    if (it == obs.end()) {
        throw ValidationError("unknown " + std::string(party_name(p)) +
                              " observable '" + name + "'");
    }
    return it->second;
}

ComplexMatrix DeviceModel::embedded(Party p, const std::string &name) const {
    return tensor_embed(observable(p, name), p, dims);
}

std::vector<Violation> validate(const DeviceModel &device) {
    std::vector<Violation> out;
    if (device.dims.alice == 0 || device.dims.bob == 0) {
        out.push_back({"dims", "local dimensions must be positive", 0.0});
        return out;
    }
    if (device.state.dim() != device.dims.total()) {
        out.push_back({"state",
                       "state has dimension " +
                           std::to_string(device.state.dim()) + ", expected " +
                           std::to_string(device.dims.total()),
                       0.0});
    } else {
        const double dev = std::abs(device.state.norm() - 1.0);
        if (!(dev <= kStateNormTol)) {
            out.push_back({"state",
                           "state not normalized, norm " +
                               fmt(device.state.norm()) + ", deviation " +
                               fmt(dev),
                           dev});
        }
    }
    for (Party p : {Party::Alice, Party::Bob}) {
        for (const auto &[name, op] : device.observables(p)) {
            if (op.dim() != device.dims.of(p)) {
                out.push_back({name,
                               name + ": dimension " + std::to_string(op.dim()) +
                                   ", expected " +
                                   std::to_string(device.dims.of(p)),
                               0.0});
                continue;
            }
            const double herm = op.hermiticity_deviation();
            if (!(herm <= kObservableTol)) {
                out.push_back(
                    {name, name + ": O != O^dagger, deviation " + fmt(herm),
                     herm});
            }
            const double inv = op.involution_deviation();
            if (!(inv <= kObservableTol)) {
                out.push_back(
                    {name, name + ": O^2 != I, deviation " + fmt(inv), inv});
            }
        }
    }
    return out;
}

void require_valid(const DeviceModel &device) {
    const auto violations = validate(device);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid device:";
    for (const auto &v : violations) {
        msg += "\n  " + v.message;
    }
    throw ValidationError(msg);
}

void require_observables(const DeviceModel &device, Mode mode) {
    std::vector<std::pair<Party, const char *>> needed;
    if (mode == Mode::Chsh) {
        needed = {{Party::Alice, names::A0},
                  {Party::Alice, names::A1},
                  {Party::Bob, names::B0},
                  {Party::Bob, names::B1}};
    } else {
        needed = {{Party::Alice, names::XA},
                  {Party::Alice, names::ZA},
                  {Party::Bob, names::XB},
                  {Party::Bob, names::ZB},
                  {Party::Bob, names::DB}};
    }
    std::string missing;
    for (const auto &[party, name] : needed) {
        if (!device.has(party, name)) {
            missing += (missing.empty() ? "" : ", ") + std::string(name);
        }
    }
    if (!missing.empty()) {
        throw ValidationError("device lacks " + mode_name(mode) +
                              " observables: " + missing);
    }
}

double correlation(const DeviceModel &device, const std::string &alice_name,
                   const std::string &bob_name) {
    const ComplexMatrix a = device.embedded(Party::Alice, alice_name);
    const ComplexMatrix b = device.embedded(Party::Bob, bob_name);
    const cplx value = device.state.inner(a * (b * device.state));
    if (std::abs(value.imag()) > kImagTol) {
        throw NumericalError("correlation <" + alice_name + " " + bob_name +
                             ">: imaginary part " + fmt(value.imag()) +
                             " exceeds tolerance");
    }
    return value.real();
}

double CorrelationTable::at(const std::string &a, const std::string &b) const {
    const auto it = entries.find({a, b});
    if (it == entries.end()) {
        throw ValidationError("correlation table lacks entry (" + a + ", " + b +
                              ")");
    }
    return it->second;
}

ChshResult chsh_from_table(const CorrelationTable &table) {
    ChshResult r;
    r.value = table.at(names::A0, names::B0) + table.at(names::A0, names::B1) +
              table.at(names::A1, names::B0) - table.at(names::A1, names::B1);
    r.epsilon = std::max(0.0, 2.0 * std::numbers::sqrt2 - r.value);
    return r;
}

ChshResult chsh_value(const DeviceModel &device) {
    require_observables(device, Mode::Chsh);
    CorrelationTable table;
    for (const char *a : {names::A0, names::A1}) {
        for (const char *b : {names::B0, names::B1}) {
            table.entries[{a, b}] = correlation(device, a, b);
        }
    }
    return chsh_from_table(table);
}

double my_ideal(const std::string &m, const std::string &n) {
    const ComplexMatrix op = kron(named_pauli(m), named_pauli(n));
    return expectation(phi_plus(), op).real();
}

double my_epsilon_from_table(const CorrelationTable &table) {
    double eps = 0.0;
    for (const auto &[a, b, m, n] : kMyPairs) {
        eps = std::max(eps, std::abs(table.at(a, b) - my_ideal(m, n)));
    }
    return eps;
}

MyDeviation my_deviation(const DeviceModel &device) {
    require_observables(device, Mode::MayersYao);
    MyDeviation out;
    for (const auto &[a, b, m, n] : kMyPairs) {
        out.table.entries[{a, b}] = correlation(device, a, b);
    }
    out.epsilon = my_epsilon_from_table(out.table);
    return out;
}

DeviceModel conjugate_local(const DeviceModel &device, const ComplexMatrix &ua,
                            const ComplexMatrix &ub) {
    DeviceModel out = device;
    out.state = kron(ua, ub) * device.state;
    const ComplexMatrix ua_dag = ua.adjoint();
    const ComplexMatrix ub_dag = ub.adjoint();
    for (auto &[name, op] : out.alice) {
        op = ua * op * ua_dag;
    }
    for (auto &[name, op] : out.bob) {
        op = ub * op * ub_dag;
    }
    return out;
}

} // namespace selftest
