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

#include <random>
#include <vector>

#include "selftest/linalg/kernels.hpp"

using namespace selftest;
using namespace selftest::kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto &x : v) {
        x = {g(rng), g(rng)};
    }
    return v;
}

double max_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST_CASE("scalar table is always available", "[kernels]") {
    CHECK(isa_available(Isa::Scalar));
    CHECK(table_for(Isa::Scalar).isa == Isa::Scalar);
    CHECK(isa_name(Isa::Scalar) == "scalar");
}

TEST_CASE("scalar kernels match textbook loops", "[kernels]") {
    std::mt19937_64 rng(11);
    const std::size_t n = 5;
    const auto a = random_vec(n * n, rng);
    const auto b = random_vec(n * n, rng);
    const auto x = random_vec(n, rng);

    std::vector<cplx> y(n);
    scalar::matvec(a.data(), x.data(), y.data(), n, n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += a[i * n + j] * x[j];
        }
        CHECK(std::abs(y[i] - s) < 1e-12);
    }

    std::vector<cplx> c(n * n);
    scalar::matmul(a.data(), b.data(), c.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += a[i * n + k] * b[k * n + j];
            }
            CHECK(std::abs(c[i * n + j] - s) < 1e-12);
        }
    }

    cplx d = 0.0;
    double nsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d += std::conj(a[i]) * x[i];
        nsq += std::norm(x[i]);
    }
    CHECK(std::abs(scalar::dot(a.data(), x.data(), n) - d) < 1e-12);
    CHECK(scalar::norm_sq(x.data(), n) == Approx(nsq).epsilon(1e-14));

    std::vector<cplx> acc = x;
    scalar::axpy({0.5, -2.0}, a.data(), acc.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(acc[i] - (x[i] + cplx{0.5, -2.0} * a[i])) < 1e-12);
    }
}

TEST_CASE("AVX2 kernels agree with scalar kernels", "[kernels][simd]") {
    if (!isa_available(Isa::Avx2)) {
        WARN("AVX2 not available on this host; equivalence not exercised");
        return;
    }
    const KernelTable &s = table_for(Isa::Scalar);
    const KernelTable &v = table_for(Isa::Avx2);
    REQUIRE(v.isa == Isa::Avx2);
    std::mt19937_64 rng(5);
    // Odd sizes exercise the scalar tails.
    for (std::size_t n = 1; n <= 17; ++n) {
        const auto a = random_vec(n * n, rng);
        const auto b = random_vec(n * n, rng);
        const auto x = random_vec(n, rng);
        const double tol = 1e-12 * static_cast<double>(n);

        std::vector<cplx> ys(n), yv(n);
        s.matvec(a.data(), x.data(), ys.data(), n, n);
        v.matvec(a.data(), x.data(), yv.data(), n, n);
        CHECK(max_diff(ys, yv) < tol);

        std::vector<cplx> cs(n * n), cv(n * n);
        s.matmul(a.data(), b.data(), cs.data(), n);
        v.matmul(a.data(), b.data(), cv.data(), n);
        CHECK(max_diff(cs, cv) < tol);

        CHECK(std::abs(s.dot(a.data(), x.data(), n) -
                       v.dot(a.data(), x.data(), n)) < tol);
        CHECK(s.norm_sq(x.data(), n) ==
              Approx(v.norm_sq(x.data(), n)).epsilon(1e-13));

        std::vector<cplx> as = x, av = x;
        s.axpy({-1.5, 0.25}, a.data(), as.data(), n);
        v.axpy({-1.5, 0.25}, a.data(), av.data(), n);
        CHECK(max_diff(as, av) < tol);
    }
}

TEST_CASE("AVX2 matvec handles rectangular shapes", "[kernels][simd]") {
    if (!isa_available(Isa::Avx2)) {
        return;
    }
    std::mt19937_64 rng(9);
    for (std::size_t rows : {1U, 3U, 8U}) {
        for (std::size_t cols : {1U, 2U, 5U, 12U}) {
            const auto m = random_vec(rows * cols, rng);
            const auto x = random_vec(cols, rng);
            std::vector<cplx> ys(rows), yv(rows);
            scalar::matvec(m.data(), x.data(), ys.data(), rows, cols);
            table_for(Isa::Avx2).matvec(m.data(), x.data(), yv.data(), rows,
                                        cols);
            CHECK(max_diff(ys, yv) < 1e-12);
        }
    }
}

TEST_CASE("force_isa switches the active table", "[kernels]") {
    const Isa before = active().isa;
    REQUIRE(force_isa(Isa::Scalar));
    CHECK(active().isa == Isa::Scalar);
    CHECK(force_isa(Isa::Avx2) == isa_available(Isa::Avx2));
    force_isa(before);
    CHECK(active().isa == before);
}
