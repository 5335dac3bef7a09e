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
 * Complex double inner-loop kernels.
 *
 * Every kernel has a portable scalar reference implementation and, on x86-64,
 * an AVX2+FMA variant. The variant is chosen once at runtime from CPUID; the
 * environment variable SELFTEST_SIMD=scalar forces the reference path.
 * All matrices are dense, row-major, interleaved (re, im).
 */
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace selftest::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

/// y[i] = sum_j m[i*cols + j] * x[j]
using MatVecFn = void (*)(const cplx *m, const cplx *x, cplx *y,
                          std::size_t rows, std::size_t cols);
/// c = a * b, all n x n
using MatMulFn = void (*)(const cplx *a, const cplx *b, cplx *c,
                          std::size_t n);
/// sum_i conj(a[i]) * b[i]
using DotFn = cplx (*)(const cplx *a, const cplx *b, std::size_t n);
/// sum_i |a[i]|^2
using NormSqFn = double (*)(const cplx *a, std::size_t n);
/// y[i] += alpha * x[i]
using AxpyFn = void (*)(cplx alpha, const cplx *x, cplx *y, std::size_t n);

struct KernelTable {
    Isa isa;
    MatVecFn matvec;
    MatMulFn matmul;
    DotFn dot;
    NormSqFn norm_sq;
    AxpyFn axpy;
};

namespace scalar {
void matvec(const cplx *m, const cplx *x, cplx *y, std::size_t rows,
            std::size_t cols);
void matmul(const cplx *a, const cplx *b, cplx *c, std::size_t n);
cplx dot(const cplx *a, const cplx *b, std::size_t n);
double norm_sq(const cplx *a, std::size_t n);
void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n);
} // namespace scalar

#ifdef SELFTEST_HAVE_AVX2
namespace avx2 {
void matvec(const cplx *m, const cplx *x, cplx *y, std::size_t rows,
            std::size_t cols);
void matmul(const cplx *a, const cplx *b, cplx *c, std::size_t n);
cplx dot(const cplx *a, const cplx *b, std::size_t n);
double norm_sq(const cplx *a, std::size_t n);
void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n);
} // namespace avx2
#endif

/// True if the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Table for a specific variant; falls back to scalar if unavailable.
const KernelTable &table_for(Isa isa) noexcept;

/// The table selected at startup (or by the last force_isa call).
const KernelTable &active() noexcept;

/// Override the runtime selection. Returns false (and leaves the selection
/// unchanged) when the variant is not available.
bool force_isa(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

} // namespace selftest::kernels
