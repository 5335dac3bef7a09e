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

#pragma once

#include <cstdint>
#include <numbers>

#include "selftest/explorer.hpp"

namespace support {

inline selftest::DeviceModel family_point(selftest::FamilyKind kind,
                                          selftest::Mode mode,
                                          const char *param, double value,
                                          selftest::Dims dims = {},
                                          std::uint64_t seed = 1) {
    selftest::FamilySpec spec;
    spec.kind = kind;
    spec.mode = mode;
    spec.dims = dims;
    spec.seed = seed;
    spec.parameters[param] = value;
    return selftest::make_point(spec, selftest::ParamPoint{{param, value}}, 0);
}

inline selftest::DeviceModel tilted(double theta,
                                    selftest::Mode mode = selftest::Mode::Chsh,
                                    selftest::Dims dims = {}) {
    return family_point(selftest::FamilyKind::Tilted, mode, "theta", theta,
                        dims);
}

inline selftest::DeviceModel random_device(selftest::Mode mode,
                                           selftest::Dims dims,
                                           std::uint64_t seed) {
    return family_point(selftest::FamilyKind::Random, mode, "sample", 0.0, dims,
                        seed);
}

inline constexpr double kPi = std::numbers::pi;

} // namespace support
