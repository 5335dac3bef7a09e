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


#include <catch2/catch.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

#include "selftest/errors.hpp"
#include "selftest/io.hpp"
#include "support.hpp"
#include "temp_dir.hpp"

using namespace selftest;
using io::json;

namespace {

void write(const std::filesystem::path &p, const std::string &text) {
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("device documents round trip exactly", "[io][property]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DeviceModel d = support::random_device(
            seed % 2 ? Mode::Chsh : Mode::MayersYao, {2 + seed % 3, 3}, seed);
        const json meta{{"origin", "random"}, {"seed", seed}};
        const std::string text = io::serialize_device(d, meta);
        const io::DeviceDocument back = io::parse_device(text);
        CHECK(back.device.dims == d.dims);
        CHECK(back.device.state == d.state);
        CHECK(back.device.alice == d.alice);
        CHECK(back.device.bob == d.bob);
        CHECK(back.metadata == meta);
        CHECK(io::serialize_device(back.device, back.metadata) == text);
    }
}

TEST_CASE("device document schema errors", "[io]") {
    json doc = io::device_to_json(canonical_chsh_device());
    json bad = doc;
    bad["schemaVersion"] = "selftest.device/0";
    CHECK_THROWS_AS(io::device_from_json(bad), FormatError);
    bad = doc;
    bad.erase("state");
    CHECK_THROWS_WITH(io::device_from_json(bad), Catch::Contains("state"));
    bad = doc;
    bad["observables"]["alice"]["A0"][0][0] = json::array({1.0});
    CHECK_THROWS_AS(io::device_from_json(bad), FormatError);
    bad = doc;
    bad["dims"] = json::array({2, 0});
    CHECK_THROWS_AS(io::device_from_json(bad), FormatError);
}

TEST_CASE("device document validation names the observable", "[io]") {
    DeviceModel d = canonical_chsh_device();
    d.bob[names::B1] = 0.5 * pauli::X();
    const std::string text = io::serialize_device(d);
    CHECK_THROWS_AS(io::parse_device(text), ValidationError);
    CHECK_THROWS_WITH(io::parse_device(text), Catch::Contains("B1"));
}

TEST_CASE("truncated documents report the parse position", "[io]") {
    const std::string text = io::serialize_device(canonical_chsh_device());
    const std::string cut = text.substr(0, text.size() / 2);
    CHECK_THROWS_AS(io::parse_device(cut), FormatError);
    CHECK_THROWS_WITH(io::parse_device(cut), Catch::Contains("byte"));
}

TEST_CASE("family documents", "[io]") {
    const json doc = json::parse(R"({"kind": "tilted", "mode": "my",
        "dims": [2, 3], "seed": 12,
        "parameters": {"theta": {"start": 0.1, "stop": 0.7, "steps": 4}}})");
    const FamilySpec s = io::family_from_json(doc);
    CHECK(s.kind == FamilyKind::Tilted);
    CHECK(s.mode == Mode::MayersYao);
    CHECK(s.dims == Dims{2, 3});
    CHECK(s.seed == 12);
    CHECK(std::get<ParamRange>(s.parameters.at("theta")).steps == 4);
    CHECK(io::family_from_json(io::family_to_json(s)).seed == 12);
    CHECK_THROWS_AS(io::family_from_json(json::parse(R"({"mode": "chsh"})")),
                    FormatError);
    CHECK_THROWS_AS(io::family_from_json(json::parse(
                        R"({"kind": "tilted", "parameters": {"theta": "x"}})")),
                    FormatError);
}

TEST_CASE("correlation tables", "[io]") {
    const json chsh = json::parse(R"({"correlations": {
        "A0": {"B0": 0.7, "B1": 0.7}, "A1": {"B0": 0.7, "B1": -0.7}}})");
    const CorrelationTable t = io::table_from_json(chsh, Mode::Chsh);
    CHECK(chsh_from_table(t).value == Approx(2.8));
    CHECK_THROWS_WITH(io::table_from_json(chsh, Mode::MayersYao),
                      Catch::Contains("XA-XB"));
    json bad = chsh;
    bad["correlations"]["A0"]["B0"] = 1.5;
    CHECK_THROWS_AS(io::table_from_json(bad, Mode::Chsh), ValidationError);
    bad["correlations"]["A0"].erase("B0");
    CHECK_THROWS_AS(io::table_from_json(bad, Mode::Chsh), ValidationError);
}

TEST_CASE("correlation report for a CHSH table summing to 2.80", "[io]") {
    CorrelationTable t;
    t.entries[{"A0", "B0"}] = 0.7;
    t.entries[{"A0", "B1"}] = 0.7;
    t.entries[{"A1", "B0"}] = 0.7;
    t.entries[{"A1", "B1"}] = -0.7;
    const json r = io::correlation_report(t, Mode::Chsh);
    const double eps = 2.0 * std::numbers::sqrt2 - 2.8;
    CHECK(r["epsilon"].get<double>() == Approx(eps));
    CHECK(r["epsilon"].get<double>() == Approx(0.02843).epsilon(1e-3));
    CHECK(r["budgets"]["eps1"].get<double>() == Approx(chsh_budget(eps).eps1));
    CHECK(r["bOperatorBound"]["value"].get<double>() ==
          Approx(b_operator_bound(eps)));
    CHECK(r["extraction"].get<std::string>().find("not available") == 0);
}

TEST_CASE("correlation report for an exact and an MY table", "[io]") {
    const double r = 1.0 / std::numbers::sqrt2;
    CorrelationTable exact;
    exact.entries[{"A0", "B0"}] = r;
    exact.entries[{"A0", "B1"}] = r;
    exact.entries[{"A1", "B0"}] = r;
    exact.entries[{"A1", "B1"}] = -r;
    const json e = io::correlation_report(exact, Mode::Chsh);
    CHECK(e["epsilon"].get<double>() <= 1e-15);

    CorrelationTable my;
    for (const auto &[a, b, m, n] :
         {std::tuple{"XA", "XB", "X", "X"}, std::tuple{"XA", "ZB", "X", "Z"},
          std::tuple{"XA", "DB", "X", "D"}, std::tuple{"ZA", "XB", "Z", "X"},
          std::tuple{"ZA", "ZB", "Z", "Z"}, std::tuple{"ZA", "DB", "Z", "D"}}) {
        my.entries[{a, b}] = my_ideal(m, n);
    }
    my.entries[{"ZA", "ZB"}] = 0.99;
    const json m = io::correlation_report(my, Mode::MayersYao);
    CHECK(m["epsilon"].get<double>() == Approx(0.01));
    CHECK(m["budgets"]["eps2"].get<double>() == Approx(std::sqrt(0.02)));
    CHECK(m["fidelity"]["discrepancy"].get<bool>());
}

TEST_CASE("report documents carry anchors and a digest", "[io]") {
    const CertificationReport rep =
        certify(support::tilted(0.7), Mode::Chsh);
    const json doc = io::report_to_json(rep, io::sha256_hex("x"));
    CHECK(doc["schemaVersion"] == io::kReportSchema);
    CHECK(doc["toolVersion"] == SELFTEST_VERSION);
    CHECK(doc["rows"].size() == expected_row_count(Mode::Chsh));
    for (const auto &row : doc["rows"]) {
        CHECK_FALSE(row["anchor"].get<std::string>().empty());
        CHECK(row.contains("measured"));
        CHECK(row.contains("bound"));
        CHECK(row.contains("pass"));
    }
    CHECK(doc["fidelity"]["quotedValue"].get<double>() == 0.2);
    CHECK(doc["fidelity"]["formulaAtQuotedEpsilon"].get<double>() ==
          Approx(my_fidelity_bound(1e-4)));
}

TEST_CASE("non-finite values serialize as null", "[io]") {
    DeviceModel d = canonical_chsh_device();
    d.state = StateVector::basis(4, 3);
    const json doc = io::report_to_json(certify(d, Mode::Chsh), "");
    bool saw_null = false;
    for (const auto &row : doc["rows"]) {
        saw_null |= row["measured"].is_null();
    }
    CHECK(saw_null);
    CHECK(doc["maxExtractionError"].is_null());
}

TEST_CASE("sweep CSV layout", "[io]") {
    SweepRecord r;
    r.parameters = {{"theta", 0.5}};
    r.epsilon = 0.25;
    r.maxExtractionError = std::nan("");
    const std::string csv = io::sweep_csv({r, r});
    CHECK(csv.rfind("theta,epsilon,eps1,eps2,maxError,bound,slack\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("0.5,0.25,0,0,nan,0,0\n") != std::string::npos);
    CHECK(io::sweep_csv({}) == "epsilon,eps1,eps2,maxError,bound,slack\n");
}

TEST_CASE("double formatting round trips", "[io]") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 * std::numbers::sqrt2, 1e-300, -7.5}) {
        CHECK(std::stod(io::format_double(v)) == v);
    }
    CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("sha256 matches the standard test vector", "[io]") {
    CHECK(io::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("atomic writes", "[io]") {
    support::TempDir dir;
    const auto p = dir / "out.txt";
    io::write_atomic(p, "first");
    io::write_atomic(p, "second");
    CHECK(io::read_file(p) == "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto &e :
         std::filesystem::directory_iterator(dir.path())) {
        ++entries;
    }
    CHECK(entries == 1);
    CHECK_THROWS_AS(io::write_atomic(dir / "missing/out.txt", "x"), IoError);
    CHECK_THROWS_AS(io::read_file(dir / "nope.json"), IoError);
}

TEST_CASE("load_device reads files", "[io]") {
    support::TempDir dir;
    write(dir / "d.json", io::serialize_device(canonical_my_device()));
    const io::DeviceDocument doc = io::load_device(dir / "d.json");
    CHECK(my_deviation(doc.device).epsilon < 1e-12);
}
