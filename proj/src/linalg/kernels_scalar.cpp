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

// Reference kernels. These define the semantics the SIMD variants are tested
// against; keep them plain.

#include "selftest/linalg/kernels.hpp"

namespace selftest::kernels::scalar {

void matvec(const cplx *m, const cplx *x, cplx *y, std::size_t rows,
            std::size_t cols) {
    for (std::size_t i = 0; i < rows; ++i) {
        const cplx *row = m + i * cols;
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < cols; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
}

void matmul(const cplx *a, const cplx *b, cplx *c, std::size_t n) {
    for (std::size_t i = 0; i < n * n; ++i) {
        c[i] = cplx{0.0, 0.0};
    }
    // i-k-j order keeps the inner loop contiguous in b and c
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a[i * n + k];
            if (aik == cplx{0.0, 0.0}) {
                continue;
            }
            const cplx *brow = b + k * n;
            cplx *crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += aik * brow[j];
            }
        }
    }
}

cplx dot(const cplx *a, const cplx *b, std::size_t n) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double norm_sq(const cplx *a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += std::norm(a[i]);
    }
    return acc;
}

void axpy(cplx alpha, const cplx *x, cplx *y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

} // namespace selftest::kernels::scalar
