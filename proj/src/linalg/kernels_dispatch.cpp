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

#include "selftest/linalg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace selftest::kernels {

namespace {

constexpr KernelTable kScalarTable{Isa::Scalar,     scalar::matvec,
                                   scalar::matmul,  scalar::dot,
                                   scalar::norm_sq, scalar::axpy};

#ifdef SELFTEST_HAVE_AVX2
constexpr KernelTable kAvx2Table{Isa::Avx2,      avx2::matvec,
                                 avx2::matmul,   avx2::dot,
                                 avx2::norm_sq,  avx2::axpy};
#endif

bool cpu_has_avx2() noexcept {
#if defined(SELFTEST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable *initial_table() noexcept {
    if (const char *env = std::getenv("SELFTEST_SIMD")) {
        if (std::string{env} == "scalar") {
            return &kScalarTable;
        }
    }
    return &table_for(Isa::Avx2);
}

std::atomic<const KernelTable *> &selected() noexcept {
    static std::atomic<const KernelTable *> table{initial_table()};
    return table;
}

} // namespace

bool isa_available(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
        return cpu_has_avx2();
    }
    return false;
}

const KernelTable &table_for(Isa isa) noexcept {
#ifdef SELFTEST_HAVE_AVX2
    if (isa == Isa::Avx2 && cpu_has_avx2()) {
        return kAvx2Table;
    }
#endif
    (void)isa;
    return kScalarTable;
}

const KernelTable &active() noexcept {
    return *selected().load(std::memory_order_acquire);
}

bool force_isa(Isa isa) noexcept {
    if (!isa_available(isa)) {
        return false;
    }
    selected().store(&table_for(isa), std::memory_order_release);
    return true;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    }
    return "unknown";
}

} // namespace selftest::kernels
