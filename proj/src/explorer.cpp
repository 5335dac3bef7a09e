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

#include "selftest/explorer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "selftest/errors.hpp"
#include "selftest/linalg/spectral.hpp"

namespace selftest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

cplx gaussian(Rng &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

StateVector gaussian_state(std::size_t dim, Rng &rng) {
    StateVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = gaussian(rng);
    }
    return v.normalized();
}

ComplexMatrix gaussian_hermitian(std::size_t dim, Rng &rng) {
    ComplexMatrix h(dim);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i) {
        h(i, i) = n(rng);
        for (std::size_t j = i + 1; j < dim; ++j) {
            h(i, j) = gaussian(rng);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

// Unit spectral radius.
ComplexMatrix normalized_hermitian(std::size_t dim, Rng &rng) {
    ComplexMatrix h = gaussian_hermitian(dim, rng);
    const HermitianEigen eig = hermitian_eig(h);
    const double radius =
        std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    h *= cplx{1.0 / radius};
    return h;
}

// QR of a complex Gaussian matrix with the phases of R's diagonal folded
// back into Q.
ComplexMatrix haar_unitary(std::size_t dim, Rng &rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g(i, j) = gaussian(rng);
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    const Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR();
    ComplexMatrix u(dim);
    for (Eigen::Index j = 0; j < d; ++j) {
        const cplx diag = r(j, j);
        const cplx phase = std::abs(diag) > 0.0 ? diag / std::abs(diag) : 1.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                q(i, j) * phase;
        }
    }
    return u;
}

ComplexMatrix random_observable(std::size_t dim, Rng &rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<double> signs(dim);
    for (auto &s : signs) {
        s = coin(rng) ? 1.0 : -1.0;
    }
    if (std::all_of(signs.begin(), signs.end(),
                    [&](double s) { return s == signs.front(); })) {
        std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
        signs[pick(rng)] *= -1.0;
    }
    const ComplexMatrix u = haar_unitary(dim, rng);
    return operator_sign(u * ComplexMatrix::diagonal(signs) * u.adjoint());
}

// op (+) identity up to dim.
ComplexMatrix pad(const ComplexMatrix &op, std::size_t dim) {
    if (dim == op.dim()) {
        return op;
    }
    ComplexMatrix out = ComplexMatrix::identity(dim);
    for (std::size_t i = 0; i < op.dim(); ++i) {
        for (std::size_t j = 0; j < op.dim(); ++j) {
            out(i, j) = op(i, j);
        }
    }
    return out;
}

// cos(theta)|00> + sin(theta)|11> inside the padded joint space.
StateVector tilted_state(double theta, Dims dims) {
    StateVector s(dims.total());
    s[0] = std::cos(theta);
    s[dims.bob + 1] = std::sin(theta);
    return s;
}

DeviceModel qubit_device(Mode mode, const StateVector &state, Dims dims) {
    DeviceModel d;
    d.dims = dims;
    d.state = state;
    const double r = 1.0 / std::numbers::sqrt2;
    if (mode == Mode::Chsh) {
        d.alice[names::A0] = pad(pauli::X(), dims.alice);
        d.alice[names::A1] = pad(pauli::Z(), dims.alice);
        d.bob[names::B0] = pad(r * (pauli::X() + pauli::Z()), dims.bob);
        d.bob[names::B1] = pad(r * (pauli::X() - pauli::Z()), dims.bob);
    } else {
        d.alice[names::XA] = pad(pauli::X(), dims.alice);
        d.alice[names::ZA] = pad(pauli::Z(), dims.alice);
        d.bob[names::XB] = pad(pauli::X(), dims.bob);
        d.bob[names::ZB] = pad(pauli::Z(), dims.bob);
        d.bob[names::DB] = pad(pauli::D(), dims.bob);
    }
    return d;
}

void conjugate_all(std::map<std::string, ComplexMatrix> &ops, double eta,
                   Rng &rng) {
    for (auto &[name, op] : ops) {
        const ComplexMatrix h = normalized_hermitian(op.dim(), rng);
        const ComplexMatrix u = unitary_exp(h, eta);
        op = operator_sign(u * op * u.adjoint());
    }
}

// Qubit device (x) junk, with each party's local index = qubit * j + ancilla.
DeviceModel embed_junk(const DeviceModel &base, const StateVector &junk,
                       Dims dims) {
    const std::size_t ja = dims.alice / 2;
    const std::size_t jb = dims.bob / 2;
    DeviceModel d;
    d.dims = dims;
    d.state = StateVector(dims.total());
    for (std::size_t qa = 0; qa < 2; ++qa) {
        for (std::size_t qb = 0; qb < 2; ++qb) {
            for (std::size_t a = 0; a < ja; ++a) {
                for (std::size_t b = 0; b < jb; ++b) {
                    d.state[(qa * ja + a) * dims.bob + qb * jb + b] =
                        base.state[qa * 2 + qb] * junk[a * jb + b];
                }
            }
        }
    }
    for (const auto &[name, op] : base.alice) {
        d.alice[name] = kron(op, ComplexMatrix::identity(ja));
    }
    for (const auto &[name, op] : base.bob) {
        d.bob[name] = kron(op, ComplexMatrix::identity(jb));
    }
    return d;
}

const std::set<std::string> &allowed_parameters(FamilyKind kind) {
    static const std::set<std::string> theta{"theta"};
    static const std::set<std::string> p{"p"};
    static const std::set<std::string> eta{"eta"};
    static const std::set<std::string> sample{"sample"};
    switch (kind) {
    case FamilyKind::Tilted:
    case FamilyKind::JunkEmbedded:
        return theta;
    case FamilyKind::StateNoise:
        return p;
    case FamilyKind::MeasurementNoise:
        return eta;
    case FamilyKind::Random:
        break;
    }
    return sample;
}

double value_or(const ParamPoint &point, const std::string &key,
                double fallback) {
    const auto it = point.find(key);
    return it == point.end() ? fallback : it->second;
}

double required(const ParamPoint &point, const std::string &key) {
    const auto it = point.find(key);
    if (it == point.end()) {
        throw ValidationError("family point lacks parameter '" + key + "'");
    }
    return it->second;
}

void check_range(const std::string &name, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        std::ostringstream msg;
        msg << "parameter " << name << " = " << v << " outside [" << lo << ", "
            << hi << "]";
        throw ValidationError(msg.str());
    }
}

// Search-space decoding.
struct Decoder {
    Mode mode;
    Dims dims;
    SearchFamily family;
    DeviceModel base;

    std::size_t size() const {
        if (family == SearchFamily::Tilted) {
            return 1;
        }
        std::size_t n = 2 * dims.total();
        for (Party p : {Party::Alice, Party::Bob}) {
            n += base.observables(p).size() * dims.of(p) * dims.of(p);
        }
        return n;
    }

    static ComplexMatrix hermitian_from(const std::vector<double> &x,
                                        std::size_t &k, std::size_t dim) {
        ComplexMatrix h(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            h(i, i) = x[k++];
            for (std::size_t j = i + 1; j < dim; ++j) {
                h(i, j) = cplx{x[k], x[k + 1]};
                h(j, i) = std::conj(h(i, j));
                k += 2;
            }
        }
        return h;
    }

    DeviceModel decode(const std::vector<double> &x) const {
        if (family == SearchFamily::Tilted) {
            return qubit_device(mode, tilted_state(kPi / 4.0 + x[0], dims),
                                dims);
        }
        DeviceModel d = base;
        std::size_t k = 0;
        StateVector s = base.state;
        for (std::size_t i = 0; i < dims.total(); ++i) {
            s[i] += cplx{x[k], x[k + 1]};
            k += 2;
        }
        d.state = s.normalized();
        for (auto *ops : {&d.alice, &d.bob}) {
            for (auto &[name, op] : *ops) {
                const ComplexMatrix u =
                    unitary_exp(hermitian_from(x, k, op.dim()), 1.0);
                op = operator_sign(u * op * u.adjoint());
            }
        }
        return d;
    }
};

} // namespace

DeviceModel canonical_chsh_device() {
    return qubit_device(Mode::Chsh, phi_plus(), Dims{});
}

DeviceModel canonical_my_device() {
    return qubit_device(Mode::MayersYao, phi_plus(), Dims{});
}

DeviceModel canonical_device(Mode mode) {
    return mode == Mode::Chsh ? canonical_chsh_device() : canonical_my_device();
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::Tilted:
        return "tilted";
    case FamilyKind::StateNoise:
        return "state-noise";
    case FamilyKind::MeasurementNoise:
        return "measurement-noise";
    case FamilyKind::JunkEmbedded:
        return "junk-embedded";
    case FamilyKind::Random:
        break;
    }
    return "random";
}

FamilyKind parse_family(const std::string &text) {
    for (FamilyKind k :
         {FamilyKind::Tilted, FamilyKind::StateNoise,
          FamilyKind::MeasurementNoise, FamilyKind::JunkEmbedded,
          FamilyKind::Random}) {
        if (family_name(k) == text) {
            return k;
        }
    }
    throw ValidationError("unknown family kind '" + text + "'");
}

double ParamRange::at(std::size_t i) const {
    if (steps <= 1) {
        return start;
    }
    if (i + 1 == steps) {
        return stop;
    }
    return start +
           (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void validate_spec(const FamilySpec &spec) {
    if (spec.dims.alice < 2 || spec.dims.bob < 2) {
        throw ValidationError("family dims must be at least 2");
    }
    if (spec.kind == FamilyKind::JunkEmbedded &&
        (spec.dims.alice % 2 != 0 || spec.dims.bob % 2 != 0)) {
        throw ValidationError("junk-embedded family needs even local dims");
    }
    const auto &allowed = allowed_parameters(spec.kind);
    for (const auto &[name, value] : spec.parameters) {
        if (!allowed.contains(name)) {
            throw ValidationError("family " + family_name(spec.kind) +
                                  " has no parameter '" + name + "'");
        }
        if (const auto *r = std::get_if<ParamRange>(&value)) {
            if (!std::isfinite(r->start) || !std::isfinite(r->stop)) {
                throw ValidationError("parameter " + name +
                                      ": range bounds must be finite");
            }
        } else if (!std::isfinite(std::get<double>(value))) {
            throw ValidationError("parameter " + name + " must be finite");
        }
    }
    if (spec.kind != FamilyKind::JunkEmbedded) {
        for (const auto &name : allowed) {
            if (!spec.parameters.contains(name)) {
                throw ValidationError("family " + family_name(spec.kind) +
                                      " requires parameter '" + name + "'");
            }
        }
    }
}

std::vector<ParamPoint> parameter_grid(const FamilySpec &spec) {
    validate_spec(spec);
    std::vector<ParamPoint> grid{ParamPoint{}};
    for (const auto &[name, value] : spec.parameters) {
        std::vector<double> values;
        if (const auto *r = std::get_if<ParamRange>(&value)) {
            for (std::size_t i = 0; i < r->steps; ++i) {
                values.push_back(r->at(i));
            }
        } else {
            values.push_back(std::get<double>(value));
        }
        std::vector<ParamPoint> next;
        next.reserve(grid.size() * values.size());
        for (const auto &point : grid) {
            for (double v : values) {
                ParamPoint p = point;
                p[name] = v;
                next.push_back(std::move(p));
            }
        }
        grid = std::move(next);
    }
    return grid;
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

DeviceModel make_point(const FamilySpec &spec, const ParamPoint &point,
                       std::size_t index) {
    const Dims dims = spec.dims;
    Rng rng(point_seed(spec.seed, index));
    switch (spec.kind) {
    case FamilyKind::Tilted:
        return qubit_device(spec.mode,
                            tilted_state(required(point, "theta"), dims), dims);
    case FamilyKind::StateNoise: {
        const double p = required(point, "p");
        check_range("p", p, 0.0, 1.0);
        const StateVector ideal = tilted_state(kPi / 4.0, dims);
        StateVector e = gaussian_state(dims.total(), rng);
        e -= ideal.inner(e) * ideal;
        e = e.normalized();
        StateVector s = std::sqrt(1.0 - p) * ideal;
        s += std::sqrt(p) * e;
        return qubit_device(spec.mode, s.normalized(), dims);
    }
    case FamilyKind::MeasurementNoise: {
        const double eta = required(point, "eta");
        check_range("eta", eta, 0.0, kMaxMeasurementNoise);
        DeviceModel d =
            qubit_device(spec.mode, tilted_state(kPi / 4.0, dims), dims);
        conjugate_all(d.alice, eta, rng);
        conjugate_all(d.bob, eta, rng);
        return d;
    }
    case FamilyKind::JunkEmbedded: {
        const double theta = value_or(point, "theta", kPi / 4.0);
        const Dims qubits{};
        const DeviceModel base =
            qubit_device(spec.mode, tilted_state(theta, qubits), qubits);
        // Fixed across the family: drawn from the family seed alone.
        Rng junk_rng(splitmix64(spec.seed));
        const StateVector junk =
            gaussian_state(dims.alice / 2 * (dims.bob / 2), junk_rng);
        return embed_junk(base, junk, dims);
    }
    case FamilyKind::Random:
        break;
    }
    DeviceModel d;
    d.dims = dims;
    d.state = gaussian_state(dims.total(), rng);
    const std::vector<const char *> alice =
        spec.mode == Mode::Chsh
            ? std::vector<const char *>{names::A0, names::A1}
            : std::vector<const char *>{names::XA, names::ZA};
    const std::vector<const char *> bob =
        spec.mode == Mode::Chsh
            ? std::vector<const char *>{names::B0, names::B1}
            : std::vector<const char *>{names::XB, names::ZB, names::DB};
    for (const char *name : alice) {
        d.alice[name] = random_observable(dims.alice, rng);
    }
    for (const char *name : bob) {
        d.bob[name] = random_observable(dims.bob, rng);
    }
    return d;
}

std::vector<DeviceModel> make_family(const FamilySpec &spec) {
    const std::vector<ParamPoint> grid = parameter_grid(spec);
    std::vector<DeviceModel> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.push_back(make_point(spec, grid[i], i));
    }
    return out;
}

SweepRecord record_for(const DeviceModel &device, Mode mode,
                       const ParamPoint &parameters,
                       const CertifyOptions &options) {
    const CertificationReport rep = certify(device, mode, options);
    SweepRecord r;
    r.parameters = parameters;
    r.epsilon = rep.epsilon;
    r.measuredEps1 = rep.residuals.eps1();
    r.measuredEps2 = rep.residuals.eps2();
    r.bound = extraction_bound(r.measuredEps1, r.measuredEps2);
    r.allPass = rep.all_pass();
    if (rep.degenerate) {
        r.maxExtractionError = kNaN;
        r.slack = kNaN;
        r.note = *rep.degenerate;
    } else {
        r.maxExtractionError = rep.max_extraction_error();
        r.slack = r.bound - r.maxExtractionError;
    }
    return r;
}

unsigned configured_threads() {
    unsigned n = 0;
    if (const char *env = std::getenv("SELFTEST_THREADS")) {
        n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    if (n == 0) {
        n = std::max(1U, std::thread::hardware_concurrency());
    }
    return n;
}

std::vector<SweepRecord> sweep(const FamilySpec &spec,
                               const SweepOptions &options) {
    const std::vector<ParamPoint> grid = parameter_grid(spec);
    std::vector<SweepRecord> records(grid.size());
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(
        options.threads == 0 ? configured_threads() : options.threads,
        std::max<std::size_t>(1, grid.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
            try {
                records[i] = record_for(make_point(spec, grid[i], i), spec.mode,
                                        grid[i], options.certify);
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

SearchResult worst_case_search(const SearchOptions &opt) {
    if (!(opt.epsilonCeiling > 0.0 && opt.epsilonCeiling < 1.0)) {
        throw ValidationError("search: epsilon ceiling must lie in (0, 1)");
    }
    if (opt.budget < 1) {
        throw ValidationError("search: budget must be at least 1");
    }
    if (opt.dims.alice < 2 || opt.dims.bob < 2) {
        throw ValidationError("search: dims must be at least 2");
    }
    if (!(opt.cooling > 0.0 && opt.cooling <= 1.0) ||
        !(opt.initialTemperature > 0.0)) {
        throw ValidationError("search: bad annealing schedule");
    }

    const Decoder decoder{opt.mode, opt.dims, opt.family,
                          qubit_device(opt.mode,
                                       tilted_state(kPi / 4.0, opt.dims),
                                       opt.dims)};
    const std::size_t n = decoder.size();
    Rng rng(point_seed(opt.seed, 0));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SearchResult result;
    const double initial_scale = 0.25 * std::sqrt(opt.epsilonCeiling);
    double scale = initial_scale;
    double temperature = opt.initialTemperature;
    const double minus_inf = -std::numeric_limits<double>::infinity();

    std::vector<double> current(n, 0.0);
    double current_obj = minus_inf;
    double best_obj = minus_inf;

    auto evaluate = [&](const std::vector<double> &x, DeviceModel &device,
                        SweepRecord &record) {
        device = decoder.decode(x);
        ++result.evaluations;
        try {
            record = record_for(device, opt.mode, ParamPoint{}, opt.certify);
        } catch (const ValidationError &) {
            return false;
        } catch (const NumericalError &) {
            return false;
        }
        return record.epsilon <= opt.epsilonCeiling &&
               std::isfinite(record.maxExtractionError);
    };

    for (std::size_t it = 0; it < opt.budget; ++it) {
        // Proposals start from the canonical point until something feasible
        // has been accepted.
        std::vector<double> x = current_obj == minus_inf
                                    ? std::vector<double>(n, 0.0)
                                    : current;
        for (double &v : x) {
            v += scale * normal(rng);
        }
        DeviceModel device;
        SweepRecord record;
        const bool feasible = evaluate(x, device, record);
        if (!feasible) {
            scale = std::max(scale * 0.8, 1e-12);
            temperature *= opt.cooling;
            continue;
        }
        ++result.feasible;
        const double obj = record.maxExtractionError;
        const bool accept =
            obj >= current_obj ||
            uniform(rng) < std::exp((obj - current_obj) / temperature);
        if (accept) {
            current = x;
            current_obj = obj;
            scale = std::min(scale * 1.05, 1.0);
        }
        if (obj > best_obj) {
            best_obj = obj;
            result.found = true;
            result.device = std::move(device);
            result.record = record;
        }
        temperature *= opt.cooling;
    }
    return result;
}

} // namespace selftest
