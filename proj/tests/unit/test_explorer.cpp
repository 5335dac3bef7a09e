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
#include <cstdlib>
#include <numbers>

#include "selftest/errors.hpp"
#include "selftest/explorer.hpp"
#include "selftest/linalg/spectral.hpp"
#include "support.hpp"

using namespace selftest;
using support::kPi;

namespace {

FamilySpec spec_of(FamilyKind kind, Mode mode, const char *param,
                   ParamValue value, Dims dims = {}, std::uint64_t seed = 7) {
    FamilySpec s;
    s.kind = kind;
    s.mode = mode;
    s.dims = dims;
    s.seed = seed;
    s.parameters[param] = value;
    return s;
}

bool same_device(const DeviceModel &a, const DeviceModel &b) {
    return a.dims == b.dims && a.state == b.state && a.alice == b.alice &&
           a.bob == b.bob;
}

} // namespace

TEST_CASE("canonical devices", "[explorer]") {
    const DeviceModel c = canonical_chsh_device();
    CHECK(chsh_value(c).value == Approx(2.8284271247461903).epsilon(1e-12));
    CHECK(validate(c).empty());
    const DeviceModel m = canonical_my_device();
    const MyDeviation dev = my_deviation(m);
    CHECK(dev.epsilon < 1e-12);
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(dev.table.at("XA", "XB") == Approx(1.0));
    CHECK(dev.table.at("XA", "ZB") == Approx(0.0).margin(1e-15));
    CHECK(dev.table.at("XA", "DB") == Approx(r));
    CHECK(dev.table.at("ZA", "XB") == Approx(0.0).margin(1e-15));
    CHECK(dev.table.at("ZA", "ZB") == Approx(1.0));
    CHECK(dev.table.at("ZA", "DB") == Approx(r));
}

TEST_CASE("tilted family endpoints", "[explorer]") {
    const DeviceModel t = support::tilted(kPi / 4.0);
    const DeviceModel c = canonical_chsh_device();
    CHECK(distance(t.state, c.state) < 1e-15);
    CHECK(t.alice == c.alice);
    CHECK(t.bob == c.bob);
    CHECK(chsh_value(support::tilted(kPi / 8.0)).value ==
          Approx(std::numbers::sqrt2 * (1.0 + std::sin(kPi / 4.0))));
}

TEST_CASE("junk embedding leaves every measured quantity unchanged",
          "[explorer][property]") {
    for (double theta : {kPi / 4.0, kPi / 4.0 - 0.1, 0.5}) {
        for (Mode mode : {Mode::Chsh, Mode::MayersYao}) {
            const DeviceModel base = support::tilted(theta, mode);
            const DeviceModel emb = support::family_point(
                FamilyKind::JunkEmbedded, mode, "theta", theta, Dims{4, 6}, 3);
            REQUIRE(validate(emb).empty());
            const CertificationReport rb = certify(base, mode);
            const CertificationReport re = certify(emb, mode);
            CHECK(re.epsilon == Approx(rb.epsilon).margin(1e-9));
            CHECK(re.residuals.eps1() == Approx(rb.residuals.eps1()).margin(1e-9));
            CHECK(re.residuals.eps2() == Approx(rb.residuals.eps2()).margin(1e-9));
            for (const auto &row : rb.rows) {
                if (row.group == "extraction") {
                    CHECK(re.row(row.group, row.name).measured ==
                          Approx(row.measured).margin(1e-9));
                }
            }
        }
    }
    const DeviceModel emb = support::family_point(
        FamilyKind::JunkEmbedded, Mode::Chsh, "theta", kPi / 4.0, Dims{4, 4}, 3);
    CHECK(chsh_value(emb).value == Approx(2.0 * std::numbers::sqrt2));
    CHECK(certify(emb, Mode::Chsh).max_extraction_error() <= 1e-9);
}

TEST_CASE("every family emits valid devices", "[explorer][property]") {
    const Dims dims{3, 2};
    for (Mode mode : {Mode::Chsh, Mode::MayersYao}) {
        const std::vector<FamilySpec> specs{
            spec_of(FamilyKind::Tilted, mode, "theta", ParamRange{0.1, 1.4, 7}, dims),
            spec_of(FamilyKind::StateNoise, mode, "p", ParamRange{0.0, 1.0, 7}, dims),
            spec_of(FamilyKind::MeasurementNoise, mode, "eta",
                    ParamRange{0.0, 0.5, 7}, dims),
            spec_of(FamilyKind::JunkEmbedded, mode, "theta", 0.6, Dims{2, 4}),
            spec_of(FamilyKind::Random, mode, "sample", ParamRange{0, 9, 10}, dims),
        };
        for (const auto &s : specs) {
            for (const auto &d : make_family(s)) {
                CHECK(validate(d).empty());
                CHECK_NOTHROW(require_observables(d, mode));
            }
        }
    }
}

TEST_CASE("random observables have both eigenvalues", "[explorer]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DeviceModel d = support::random_device(Mode::Chsh, {2, 3}, seed);
        for (Party p : {Party::Alice, Party::Bob}) {
            for (const auto &[name, op] : d.observables(p)) {
                const HermitianEigen e = hermitian_eig(op);
                CHECK(e.values.front() == Approx(-1.0));
                CHECK(e.values.back() == Approx(1.0));
            }
        }
    }
}

TEST_CASE("families are deterministic under a fixed seed", "[explorer]") {
    const FamilySpec s = spec_of(FamilyKind::MeasurementNoise, Mode::Chsh, "eta",
                                 ParamRange{0.0, 0.3, 5}, {3, 3}, 99);
    const auto a = make_family(s);
    const auto b = make_family(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(same_device(a[i], b[i]));
    }
    FamilySpec other = s;
    other.seed = 100;
    CHECK_FALSE(same_device(make_family(other)[2], a[2]));
}

TEST_CASE("parameter grids", "[explorer]") {
    FamilySpec s = spec_of(FamilyKind::Tilted, Mode::Chsh, "theta",
                           ParamRange{0.0, 1.0, 0});
    CHECK(parameter_grid(s).empty());
    CHECK(sweep(s).empty());
    s.parameters["theta"] = ParamRange{0.0, 1.0, 5};
    const auto grid = parameter_grid(s);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front().at("theta") == 0.0);
    CHECK(grid.back().at("theta") == 1.0);
    CHECK(grid[2].at("theta") == Approx(0.5));
    s.parameters["theta"] = ParamRange{0.3, 1.0, 1};
    CHECK(parameter_grid(s).front().at("theta") == 0.3);
}

TEST_CASE("invalid family specs are rejected", "[explorer]") {
    FamilySpec s = spec_of(FamilyKind::Tilted, Mode::Chsh, "eta", 0.1);
    CHECK_THROWS_AS(make_family(s), ValidationError);
    s = spec_of(FamilyKind::Tilted, Mode::Chsh, "theta", 0.1, Dims{1, 2});
    CHECK_THROWS_AS(make_family(s), ValidationError);
    s = spec_of(FamilyKind::JunkEmbedded, Mode::Chsh, "theta", 0.1, Dims{3, 2});
    CHECK_THROWS_AS(make_family(s), ValidationError);
    s = spec_of(FamilyKind::MeasurementNoise, Mode::Chsh, "eta", 0.6);
    CHECK_THROWS_AS(make_family(s), ValidationError);
    s = spec_of(FamilyKind::StateNoise, Mode::Chsh, "p", ParamRange{0.0, 1.5, 3});
    CHECK_THROWS_AS(make_family(s), ValidationError);
    s.parameters.clear();
    CHECK_THROWS_AS(make_family(s), ValidationError);
    CHECK_THROWS_AS(parse_family("noise"), ValidationError);
    CHECK(parse_family(family_name(FamilyKind::JunkEmbedded)) ==
          FamilyKind::JunkEmbedded);
}

TEST_CASE("tilted sweep keeps positive slack", "[explorer][sweep]") {
    const FamilySpec s = spec_of(FamilyKind::Tilted, Mode::Chsh, "theta",
                                 ParamRange{kPi / 4.0, kPi / 8.0, 20});
    const auto records = sweep(s);
    REQUIRE(records.size() == 20);
    for (const auto &r : records) {
        CHECK(r.allPass);
        CHECK(r.slack >= -kDefaultCertTol);
        CHECK(r.slack == Approx(r.bound - r.maxExtractionError));
    }
    CHECK(records.front().epsilon < 1e-12);
    CHECK(records.back().epsilon > records.front().epsilon);
}

TEST_CASE("sweep records do not depend on the thread count", "[explorer][sweep]") {
    const FamilySpec s = spec_of(FamilyKind::Random, Mode::Chsh, "sample",
                                 ParamRange{0, 15, 16}, {2, 3}, 5);
    SweepOptions one;
    one.threads = 1;
    SweepOptions four;
    four.threads = 4;
    const auto a = sweep(s, one);
    const auto b = sweep(s, four);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].parameters == b[i].parameters);
        CHECK(a[i].epsilon == b[i].epsilon);
        CHECK(a[i].maxExtractionError == b[i].maxExtractionError);
        CHECK(a[i].slack == b[i].slack);
    }
}

TEST_CASE("configured_threads reads SELFTEST_THREADS", "[explorer]") {
    ::setenv("SELFTEST_THREADS", "3", 1);
    CHECK(configured_threads() == 3);
    ::setenv("SELFTEST_THREADS", "0", 1);
    CHECK(configured_threads() >= 1);
    ::unsetenv("SELFTEST_THREADS");
}

TEST_CASE("search with a budget of one returns the seed proposal",
          "[explorer][search]") {
    SearchOptions opt;
    opt.budget = 1;
    opt.seed = 4;
    opt.epsilonCeiling = 0.05;
    const SearchResult r = worst_case_search(opt);
    CHECK(r.evaluations == 1);
    if (r.found) {
        const SweepRecord again =
            record_for(*r.device, opt.mode, {}, opt.certify);
        CHECK(again.maxExtractionError == r.record.maxExtractionError);
    }
}

TEST_CASE("search with a vanishing ceiling stays at the symmetric point",
          "[explorer][search]") {
    SearchOptions opt;
    opt.family = SearchFamily::Tilted;
    opt.epsilonCeiling = 1e-10;
    opt.budget = 300;
    opt.seed = 2;
    const SearchResult r = worst_case_search(opt);
    REQUIRE(r.found);
    CHECK(r.record.epsilon <= 1e-10);
    CHECK(r.record.maxExtractionError < 1e-3);
    CHECK(std::abs(r.device->state[0] - r.device->state[3]) < 1e-3);
}

TEST_CASE("CHSH search at ceiling 0.01 leaves the bound unsaturated",
          "[explorer][search]") {
    SearchOptions opt;
    opt.epsilonCeiling = 0.01;
    opt.budget = 2000;
    opt.seed = 11;
    const SearchResult r = worst_case_search(opt);
    REQUIRE(r.found);
    CHECK(r.record.epsilon <= 0.01);
    CHECK(r.record.slack > 0.0);
    const SweepRecord again = record_for(*r.device, Mode::Chsh, {}, opt.certify);
    CHECK(again.maxExtractionError ==
          Approx(r.record.maxExtractionError).margin(kDefaultCertTol));
    CHECK(again.bound == Approx(r.record.bound).margin(kDefaultCertTol));
}

TEST_CASE("search is reproducible and validates its options", "[explorer][search]") {
    SearchOptions opt;
    opt.mode = Mode::MayersYao;
    opt.dims = {3, 2};
    opt.budget = 50;
    opt.seed = 8;
    const SearchResult a = worst_case_search(opt);
    const SearchResult b = worst_case_search(opt);
    REQUIRE(a.found == b.found);
    if (a.found) {
        CHECK(same_device(*a.device, *b.device));
    }
    opt.budget = 0;
    CHECK_THROWS_AS(worst_case_search(opt), ValidationError);
    opt.budget = 5;
    opt.epsilonCeiling = 1.0;
    CHECK_THROWS_AS(worst_case_search(opt), ValidationError);
}
