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
 * Command-line front end: certify, correlations, sweep, search, canonical.
 */
#pragma once

#include <ostream>

namespace selftest::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;  ///< some certification row failed
inline constexpr int kExitInput = 2; ///< usage, parse, schema or I/O error

/// Runs one invocation; argv[0] is the program name.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace selftest::cli
