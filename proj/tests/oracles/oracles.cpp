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


#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace oracle {

Mat to_mat(const selftest::ComplexMatrix &m) {
    Mat out(m.dim(), std::vector<cplx>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            out[i][j] = m(i, j);
        }
    }
    return out;
}

Vec to_vec(const selftest::StateVector &v) {
    Vec out(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        out[i] = v[i];
    }
    return out;
}

selftest::ComplexMatrix from_mat(const Mat &m) {
    selftest::ComplexMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out(i, j) = m[i][j];
        }
    }
    return out;
}

Mat zeros(std::size_t n) { return Mat(n, std::vector<cplx>(n)); }

Mat identity(std::size_t n) {
    Mat m = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

Mat mul(const Mat &a, const Mat &b) {
    const std::size_t n = a.size();
    Mat c = zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    return c;
}

Mat add(const Mat &a, const Mat &b) {
    Mat c = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            c[i][j] += b[i][j];
        }
    }
    return c;
}

Mat sub(const Mat &a, const Mat &b) { return add(a, scale(-1.0, b)); }

Mat scale(cplx s, const Mat &a) {
    Mat c = a;
    for (auto &row : c) {
        for (auto &x : row) {
            x *= s;
        }
    }
    return c;
}

Mat adjoint(const Mat &a) {
    Mat c = zeros(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            c[j][i] = std::conj(a[i][j]);
        }
    }
    return c;
}

Mat kron(const Mat &a, const Mat &b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    Mat c = zeros(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < m; ++k) {
                for (std::size_t l = 0; l < m; ++l) {
                    c[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    return c;
}

Vec kron(const Vec &a, const Vec &b) {
    Vec c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            c[i * b.size() + j] = a[i] * b[j];
        }
    }
    return c;
}

Vec apply(const Mat &m, const Vec &v) {
    Vec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            s += m[i][j] * v[j];
        }
        out[i] = s;
    }
    return out;
}

Vec vsub(const Vec &a, const Vec &b) {
    Vec c = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] -= b[i];
    }
    return c;
}

cplx inner(const Vec &a, const Vec &b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double norm(const Vec &v) { return std::sqrt(inner(v, v).real()); }

double max_abs(const Mat &a) {
    double m = 0.0;
    for (const auto &row : a) {
        for (const auto &x : row) {
            m = std::max(m, std::abs(x));
        }
    }
    return m;
}

Mat X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
Mat Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
Mat H() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{r, r}, {r, -r}};
}

Mat on_alice(const Mat &op, std::size_t db) { return kron(op, identity(db)); }
Mat on_bob(const Mat &op, std::size_t da) { return kron(identity(da), op); }

double correlation(const selftest::DeviceModel &d, const std::string &a,
                   const std::string &b) {
    const Mat full =
        kron(to_mat(d.observable(selftest::Party::Alice, a)),
             to_mat(d.observable(selftest::Party::Bob, b)));
    const Vec psi = to_vec(d.state);
    return inner(psi, oracle::apply(full, psi)).real();
}

Mat newton_sign(const Mat &m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXcd x(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            x(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    for (int it = 0; it < 100; ++it) {
        const Eigen::MatrixXcd next = 0.5 * (x + x.inverse());
        const double change = (next - x).cwiseAbs().maxCoeff();
        x = next;
        if (change < 1e-15) {
            break;
        }
    }
    Mat out = zeros(m.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                x(i, j);
        }
    }
    return out;
}

Vec gate_circuit(const Mat &xa, const Mat &za, const Mat &xb, const Mat &zb,
                 std::size_t da, std::size_t db, const Vec &input) {
    const std::size_t n = da * db;
    const Mat p0 = {{1.0, 0.0}, {0.0, 0.0}};
    const Mat p1 = {{0.0, 0.0}, {0.0, 1.0}};
    const Mat i2 = identity(2);
    const Mat in = identity(n);
    // Register order: device, ancilla A, ancilla B.
    const Mat ha = kron(in, kron(H(), i2));
    const Mat hb = kron(in, kron(i2, H()));
    auto ctrl_a = [&](const Mat &local_a) {
        const Mat op = on_alice(local_a, db);
        return add(kron(in, kron(p0, i2)), kron(op, kron(p1, i2)));
    };
    auto ctrl_b = [&](const Mat &local_b) {
        const Mat op = on_bob(local_b, da);
        return add(kron(in, kron(i2, p0)), kron(op, kron(i2, p1)));
    };
    const Vec zero_zero = {1.0, 0.0, 0.0, 0.0};
    Vec s = kron(input, zero_zero);
    for (const Mat &g : {ha, hb, ctrl_a(za), ctrl_b(zb), ha, hb, ctrl_a(xa),
                         ctrl_b(xb)}) {
        s = oracle::apply(g, s);
    }
    return s;
}

Budget chsh_closed_form(long double eps) {
    const long double s = eps * std::sqrt(2.0L);
    return {2.0L * std::pow(s, 0.5L), 4.0L * std::pow(s, 0.25L)};
}

Budget my_closed_form(long double eps) {
    const long double t = 2.0L * eps;
    const long double r2 = std::sqrt(2.0L);
    return {2.0L * (1.0L + r2) * std::pow(t, 0.25L) + 4.0L * std::sqrt(t) +
                (5.0L + 3.0L * r2) / 2.0L * std::pow(t, 0.75L),
            std::sqrt(t)};
}

long double b_bound(long double eps) {
    const long double r2 = std::sqrt(2.0L);
    return r2 * eps + 2.0L * r2 * std::pow(eps * r2, 0.25L);
}

long double fidelity(long double eps) {
    const long double v =
        1.0L - (9.0L * std::sqrt(2.0L) * eps +
                std::pow(2.0L, 0.25L) * 100.0L * std::sqrt(eps) +
                std::pow(2.0L, 0.375L) * 60.0L * std::pow(eps, 0.75L)) /
                   4.0L;
    return v < 0.0L ? 0.0L : v;
}

} // namespace oracle
