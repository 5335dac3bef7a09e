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
 * Document formats: device and family documents (JSON in), report and
 * correlation-report documents (JSON out), sweep tables (CSV out).
 *
 * Device document:
 * @code{.json}
 * {
 *   "schemaVersion": "selftest.device/1",
 *   "dims": [2, 2],
 *   "state": [[re, im], ...],
 *   "observables": {"alice": {"A0": [[[re, im], ...], ...]}, "bob": {...}},
 *   "metadata": {}
 * }
 * @endcode
 *
 * Family document:
 * @code{.json}
 * {"kind": "tilted", "mode": "chsh", "dims": [2, 2], "seed": 7,
 *  "parameters": {"theta": {"start": 0.785, "stop": 0.392, "steps": 20}}}
 * @endcode
 *
 * Correlation table: {"correlations": {"A0": {"B0": 0.7071, ...}, ...}}.
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "selftest/bounds.hpp"
#include "selftest/device.hpp"
#include "selftest/explorer.hpp"

namespace selftest::io {

using json = nlohmann::json;

inline constexpr const char *kDeviceSchema = "selftest.device/1";
inline constexpr const char *kReportSchema = "selftest.report/1";
inline constexpr const char *kCorrelationReportSchema =
    "selftest.correlations-report/1";

struct DeviceDocument {
    DeviceModel device;
    json metadata = json::object();
};

json device_to_json(const DeviceModel &device,
                    const json &metadata = json::object());
/// Schema and invariant checks; throws FormatError or ValidationError.
DeviceDocument device_from_json(const json &doc);

std::string serialize_device(const DeviceModel &device,
                             const json &metadata = json::object());
/// Parse errors carry the byte position.
DeviceDocument parse_device(std::string_view text);
DeviceDocument load_device(const std::filesystem::path &path);

FamilySpec family_from_json(const json &doc);
json family_to_json(const FamilySpec &spec);
FamilySpec load_family(const std::filesystem::path &path);

/// Entries for the mode; every value must lie in [-1, 1].
CorrelationTable table_from_json(const json &doc, Mode mode);
json table_to_json(const CorrelationTable &table);

/// Difference between the fidelity formula at the quoted epsilon and the
/// quoted value above which the report raises its discrepancy flag.
inline constexpr double kFidelityDiscrepancyTol = 0.01;

json fidelity_to_json(std::optional<double> at_epsilon);

json report_to_json(const CertificationReport &report,
                    const std::string &inputs_digest);

/// Budgets and data-only bounds from a correlation table (no extraction).
json correlation_report(const CorrelationTable &table, Mode mode);

/// Header: parameter columns, epsilon, eps1, eps2, maxError, bound, slack.
std::string sweep_csv(const std::vector<SweepRecord> &records);

std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path &path);
/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path &path, std::string_view content);

/// Shortest text that parses back to the same double; "nan"/"inf" otherwise.
std::string format_double(double v);

} // namespace selftest::io
