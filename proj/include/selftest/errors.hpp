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

#include <stdexcept>
#include <string>

namespace selftest {

/// Input does not satisfy a documented precondition (non-Hermitian matrix,
/// out-of-range epsilon, unknown observable name, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A quantity that should be real (or otherwise consistent) came out of
/// floating point arithmetic outside tolerance.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The junk candidate has (near) zero norm, so no extraction exists.
class DegenerateExtraction : public std::runtime_error {
  public:
    DegenerateExtraction(const std::string &what, double raw_norm)
        : std::runtime_error(what), raw_norm_(raw_norm) {}
    [[nodiscard]] double raw_norm() const noexcept { return raw_norm_; }

  private:
    double raw_norm_;
};

/// Malformed document or file-level problem (parse error, schema mismatch).
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace selftest
