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

// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.
//
// One __m256d holds two interleaved complex doubles: [re0, im0, re1, im1].

#include "selftest/linalg/kernels.hpp"

#include <immintrin.h>

namespace selftest::kernels::avx2 {

namespace {

inline const double *as_doubles(const cplx *p) {
    return reinterpret_cast<const double *>(p);
}
inline double *as_doubles(cplx *p) { return reinterpret_cast<double *>(p); }

// [a, b, c, d] -> (a + c, b + d) as a complex
inline cplx fold_pairs(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

inline double hsum(__m256d v) {
    const cplx c = fold_pairs(v);
    return c.real() + c.imag();
}

} // namespace

void matvec(const cplx *m, const cplx *x, cplx *y, std::size_t rows,
            std::size_t cols) {
    const std::size_t paired = cols & ~std::size_t{1};
    const double *xd = as_doubles(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double *row = as_doubles(m + i * cols);
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (std::size_t j = 0; j < paired; j += 2) {
            const __m256d mv = _mm256_loadu_pd(row + 2 * j);
            const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
            const __m256d x_re = _mm256_movedup_pd(xv);
            const __m256d x_im = _mm256_permute_pd(xv, 0xF);
            acc_re = _mm256_fmadd_pd(mv, x_re, acc_re);
            acc_im = _mm256_fmadd_pd(_mm256_permute_pd(mv, 0x5), x_im, acc_im);
        }
        cplx acc = fold_pairs(_mm256_addsub_pd(acc_re, acc_im));
        for (std::size_t j = paired; j < cols; ++j) {
            acc += m[i * cols + j] * x[j];
        }
        y[i] = acc;
    }
}

void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n) {
    const std::size_t paired = n & ~std::size_t{1};
    const __m256d a_re = _mm256_set1_pd(alpha.real());
    const __m256d a_im = _mm256_set1_pd(alpha.imag());
    const double *xd = as_doubles(x);
    double *yd = as_doubles(y);
    for (std::size_t j = 0; j < paired; j += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
        const __m256d swapped = _mm256_permute_pd(xv, 0x5);
        const __m256d prod =
            _mm256_fmaddsub_pd(xv, a_re, _mm256_mul_pd(swapped, a_im));
        _mm256_storeu_pd(yd + 2 * j,
                         _mm256_add_pd(_mm256_loadu_pd(yd + 2 * j), prod));
    }
    for (std::size_t j = paired; j < n; ++j) {
        y[j] += alpha * x[j];
    }
}

void matmul(const cplx *a, const cplx *b, cplx *c, std::size_t n) {
    for (std::size_t i = 0; i < n * n; ++i) {
        c[i] = cplx{0.0, 0.0};
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx{0.0, 0.0}) {
                continue;
            }
            axpy(aik, b + k * n, c + i * n, n);
        }
    }
}

cplx dot(const cplx *a, const cplx *b, std::size_t n) {
    const std::size_t paired = n & ~std::size_t{1};
    const double *ad = as_doubles(a);
    const double *bd = as_doubles(b);
    __m256d acc_re = _mm256_setzero_pd(); // [ar*br, ai*bi, ...]
    __m256d acc_im = _mm256_setzero_pd(); // [ar*bi, ai*br, ...]
    for (std::size_t j = 0; j < paired; j += 2) {
        const __m256d av = _mm256_loadu_pd(ad + 2 * j);
        const __m256d bv = _mm256_loadu_pd(bd + 2 * j);
        acc_re = _mm256_fmadd_pd(av, bv, acc_re);
        acc_im = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0x5), acc_im);
    }
    const cplx im_pair = fold_pairs(acc_im);
    cplx acc{hsum(acc_re), im_pair.real() - im_pair.imag()};
    for (std::size_t j = paired; j < n; ++j) {
        acc += std::conj(a[j]) * b[j];
    }
    return acc;
}

double norm_sq(const cplx *a, std::size_t n) {
    const std::size_t paired = n & ~std::size_t{1};
    const double *ad = as_doubles(a);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < paired; j += 2) {
        const __m256d av = _mm256_loadu_pd(ad + 2 * j);
        acc = _mm256_fmadd_pd(av, av, acc);
    }
    double total = hsum(acc);
    for (std::size_t j = paired; j < n; ++j) {
        total += std::norm(a[j]);
    }
    return total;
}

} // namespace selftest::kernels::avx2
