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
 * Device families, parameter sweeps and a seeded annealing search for the
 * device that maximizes the extraction error under an epsilon ceiling.
 *
 * Family parameters (all optional unless noted):
 *   tilted             theta (required)
 *   state-noise        p (required, in [0, 1])
 *   measurement-noise  eta (required, in [0, 0.5])
 *   junk-embedded      theta (default pi/4); local dims must be even
 *   random             sample (required; only labels the point)
 *
 * Local dimensions above 2 extend the qubit device by an identity block.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "selftest/bounds.hpp"
#include "selftest/device.hpp"

namespace selftest {

DeviceModel canonical_chsh_device();
DeviceModel canonical_my_device();
DeviceModel canonical_device(Mode mode);

enum class FamilyKind { Tilted, StateNoise, MeasurementNoise, JunkEmbedded, Random };

std::string family_name(FamilyKind kind);
FamilyKind parse_family(const std::string &text);

inline constexpr double kMaxMeasurementNoise = 0.5;

/// steps points from start to stop inclusive; steps == 1 gives start only.
struct ParamRange {
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 1;

    [[nodiscard]] double at(std::size_t i) const;
};

using ParamValue = std::variant<double, ParamRange>;
using ParamPoint = std::map<std::string, double>;

struct FamilySpec {
    FamilyKind kind = FamilyKind::Tilted;
    Mode mode = Mode::Chsh;
    std::map<std::string, ParamValue> parameters;
    Dims dims;
    std::uint64_t seed = 0;
};

/// Throws ValidationError on unknown parameters, bad ranges or dims.
void validate_spec(const FamilySpec &spec);

/// Cartesian product of the parameter ranges, in lexicographic order of the
/// parameter names (last name varies fastest).
std::vector<ParamPoint> parameter_grid(const FamilySpec &spec);

/// Independent 64-bit stream seed for point `index`.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t index);

/// Device at one grid point; depends only on (spec, point, index).
DeviceModel make_point(const FamilySpec &spec, const ParamPoint &point,
                       std::size_t index);

std::vector<DeviceModel> make_family(const FamilySpec &spec);

struct SweepRecord {
    ParamPoint parameters;
    double epsilon = 0.0;
    double measuredEps1 = 0.0;
    double measuredEps2 = 0.0;
    double maxExtractionError = 0.0; ///< NaN for a degenerate extraction
    double bound = 0.0;              ///< (11 eps1 + 5 eps2)/2, measured residuals
    double slack = 0.0;              ///< bound - maxExtractionError
    bool allPass = true;             ///< every certification row passed
    std::string note;
};

SweepRecord record_for(const DeviceModel &device, Mode mode,
                       const ParamPoint &parameters,
                       const CertifyOptions &options = {});

struct SweepOptions {
    CertifyOptions certify;
    /// Worker count; 0 reads SELFTEST_THREADS (0 or unset = hardware).
    unsigned threads = 0;
};

/// One record per grid point, in grid order, identical for any thread count.
std::vector<SweepRecord> sweep(const FamilySpec &spec,
                               const SweepOptions &options = {});

/// Worker count from SELFTEST_THREADS (0 or unset = hardware concurrency).
unsigned configured_threads();

enum class SearchFamily {
    Tilted, ///< one angle
    General ///< state perturbation plus a Hermitian generator per observable
};

struct SearchOptions {
    Mode mode = Mode::Chsh;
    double epsilonCeiling = 0.01;
    Dims dims;
    std::size_t budget = 1000;
    std::uint64_t seed = 0;
    SearchFamily family = SearchFamily::General;
    double initialTemperature = 1e-2;
    double cooling = 0.995;
    CertifyOptions certify;
};

struct SearchResult {
    bool found = false;
    std::optional<DeviceModel> device;
    SweepRecord record;
    std::size_t evaluations = 0;
    std::size_t feasible = 0;
};

/// Seeded simulated annealing maximizing the largest extraction error over
/// devices with epsilon <= ceiling. The first proposal is a random
/// perturbation of the canonical device sized to the ceiling. Returns
/// found == false when no proposal was feasible. No optimality claim.
SearchResult worst_case_search(const SearchOptions &options);

} // namespace selftest
