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

#include "selftest/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <string>
#include <vector>

#include "selftest/bounds.hpp"
#include "selftest/errors.hpp"
#include "selftest/explorer.hpp"
#include "selftest/io.hpp"

namespace selftest::cli {

namespace {

const std::map<std::string, Mode> kModes{{"chsh", Mode::Chsh},
                                         {"my", Mode::MayersYao}};

void print_rows(const CertificationReport &rep, std::ostream &out) {
    out << "mode " << mode_name(rep.mode) << ", epsilon "
        << io::format_double(rep.epsilon);
    if (rep.chshValue) {
        out << ", CHSH " << io::format_double(*rep.chshValue);
    }
    out << "\n";
    std::size_t failed = 0;
    for (const auto &r : rep.rows) {
        const char *status = !r.applicable ? "n/a " : r.pass ? "PASS" : "FAIL";
        failed += r.pass ? 0 : 1;
        out << status << "  " << std::left << std::setw(42)
            << (r.group + "/" + r.name) << std::right << std::setw(24)
            << io::format_double(r.measured) << ' '
            << (r.cmp == Comparison::AtMost ? "<=" : ">=") << ' '
            << io::format_double(r.bound);
        if (!r.note.empty()) {
            out << "  (" << r.note << ")";
        }
        out << "\n";
    }
    if (rep.fidelityBound) {
        const double at_quoted = my_fidelity_bound(kQuotedFidelityEpsilon);
        out << "fidelity lower bound " << io::format_double(*rep.fidelityBound)
            << "; at eps " << kQuotedFidelityEpsilon << " formula gives "
            << io::format_double(at_quoted) << ", quoted value "
            << kQuotedFidelityValue
            << (std::abs(at_quoted - kQuotedFidelityValue) >
                        io::kFidelityDiscrepancyTol
                    ? " [discrepancy]"
                    : "")
            << "\n";
    }
    out << rep.rows.size() - failed << "/" << rep.rows.size()
        << " rows pass\n";
}

int cmd_certify(const std::string &device_path, Mode mode,
                const std::string &out_path, double cert_tol,
                std::ostream &out) {
    const std::string text = io::read_file(device_path);
    const io::DeviceDocument doc = io::parse_device(text);
    CertifyOptions opt;
    opt.certTol = cert_tol;
    const CertificationReport rep = certify(doc.device, mode, opt);
    if (!out_path.empty()) {
        io::write_atomic(out_path,
                         io::report_to_json(rep, io::sha256_hex(text)).dump(2) +
                             "\n");
    }
    print_rows(rep, out);
    return rep.all_pass() ? kExitPass : kExitFail;
}

int cmd_correlations(const std::string &table_path, Mode mode,
                     const std::string &out_path, std::ostream &out) {
    io::json doc;
    try {
        doc = io::json::parse(io::read_file(table_path));
    } catch (const io::json::parse_error &e) {
        throw FormatError(std::string("parse error: ") + e.what());
    }
    const CorrelationTable table = io::table_from_json(doc, mode);
    const std::string text = io::correlation_report(table, mode).dump(2) + "\n";
    if (!out_path.empty()) {
        io::write_atomic(out_path, text);
    }
    out << text;
    return kExitPass;
}

int cmd_sweep(const std::string &family_path, const std::string &out_path,
              unsigned threads, double cert_tol, std::ostream &out) {
    const FamilySpec spec = io::load_family(family_path);
    SweepOptions opt;
    opt.threads = threads;
    opt.certify.certTol = cert_tol;
    const std::vector<SweepRecord> records = sweep(spec, opt);
    io::write_atomic(out_path, io::sweep_csv(records));
    std::size_t failing = 0;
    for (const auto &r : records) {
        if (!r.allPass) {
            ++failing;
        }
    }
    out << records.size() << " points, " << failing
        << " with failing rows, written to " << out_path << "\n";
    return failing == 0 ? kExitPass : kExitFail;
}

int cmd_search(SearchOptions opt, const std::string &out_path,
               std::string report_path, std::ostream &out) {
    const SearchResult res = worst_case_search(opt);
    out << res.evaluations << " evaluations, " << res.feasible
        << " feasible\n";
    if (!res.found) {
        out << "no device with epsilon <= "
            << io::format_double(opt.epsilonCeiling) << " found\n";
        return kExitFail;
    }
    const CertificationReport rep = certify(*res.device, opt.mode, opt.certify);
    const std::string device_text = io::serialize_device(
        *res.device, io::json{{"search",
                               {{"mode", mode_name(opt.mode)},
                                {"epsilonCeiling", opt.epsilonCeiling},
                                {"budget", opt.budget},
                                {"seed", opt.seed}}}});
    if (report_path.empty()) {
        report_path = out_path + ".report.json";
    }
    io::write_atomic(out_path, device_text);
    io::write_atomic(report_path,
                     io::report_to_json(rep, io::sha256_hex(device_text))
                             .dump(2) +
                         "\n");
    out << "epsilon " << io::format_double(res.record.epsilon)
        << ", max extraction error "
        << io::format_double(res.record.maxExtractionError) << ", bound "
        << io::format_double(res.record.bound) << ", slack "
        << io::format_double(res.record.slack) << "\n";
    return rep.all_pass() ? kExitPass : kExitFail;
}

int cmd_canonical(Mode mode, const std::string &out_path, std::ostream &out) {
    const std::string text = io::serialize_device(canonical_device(mode));
    if (out_path.empty()) {
        out << text;
    } else {
        io::write_atomic(out_path, text);
    }
    return kExitPass;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
    CLI::App app{"Robust self-testing certification of Bell devices", "selftest"};
    app.set_version_flag("--version", std::string(SELFTEST_VERSION));
    app.require_subcommand(1);

    double cert_tol = kDefaultCertTol;
    Mode mode = Mode::Chsh;
    std::string device_path;
    std::string table_path;
    std::string family_path;
    std::string out_path;
    std::string report_path;
    unsigned threads = 0;
    SearchOptions search_opt;
    std::vector<std::size_t> dims{2, 2};
    std::string search_family = "general";

    auto *certify_cmd = app.add_subcommand("certify", "certify a device document");
    certify_cmd->add_option("--device", device_path, "device document")
        ->required();
    certify_cmd->add_option("--mode", mode, "chsh or my")
        ->required()
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    certify_cmd->add_option("--out", out_path, "report document to write");
    certify_cmd->add_option("--cert-tol", cert_tol, "absolute tolerance")
        ->check(CLI::NonNegativeNumber);

    auto *corr_cmd = app.add_subcommand(
        "correlations", "budgets and bounds from a correlation table alone");
    corr_cmd->add_option("--table", table_path, "correlation table")
        ->required();
    corr_cmd->add_option("--mode", mode, "chsh or my")
        ->required()
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    corr_cmd->add_option("--out", out_path, "report document to write");

    auto *sweep_cmd = app.add_subcommand("sweep", "certify a device family");
    sweep_cmd->add_option("--family", family_path, "family document")
        ->required();
    sweep_cmd->add_option("--out", out_path, "CSV output")->required();
    sweep_cmd->add_option("--threads", threads,
                          "worker count (0 = SELFTEST_THREADS or hardware)");
    sweep_cmd->add_option("--cert-tol", cert_tol, "absolute tolerance")
        ->check(CLI::NonNegativeNumber);

    auto *search_cmd =
        app.add_subcommand("search", "annealing search for the worst device");
    search_cmd->add_option("--mode", mode, "chsh or my")
        ->required()
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    search_cmd
        ->add_option("--epsilon-ceiling", search_opt.epsilonCeiling,
                     "largest admissible epsilon")
        ->required();
    search_cmd->add_option("--dims", dims, "local dimensions dA dB")
        ->expected(2);
    search_cmd->add_option("--budget", search_opt.budget, "iterations");
    search_cmd->add_option("--seed", search_opt.seed, "RNG seed");
    search_cmd->add_option("--family", search_family, "tilted or general")
        ->check(CLI::IsMember({"tilted", "general"}));
    search_cmd->add_option("--out", out_path, "device document to write")
        ->required();
    search_cmd->add_option("--report", report_path,
                           "report path (default: <out>.report.json)");

    auto *canonical_cmd =
        app.add_subcommand("canonical", "emit a canonical device document");
    canonical_cmd->add_option("--mode", mode, "chsh or my")
        ->required()
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    canonical_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    try {
        if (*certify_cmd) {
            return cmd_certify(device_path, mode, out_path, cert_tol, out);
        }
        if (*corr_cmd) {
            return cmd_correlations(table_path, mode, out_path, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(family_path, out_path, threads, cert_tol, out);
        }
        if (*search_cmd) {
            search_opt.mode = mode;
            search_opt.dims = Dims{dims.at(0), dims.at(1)};
            search_opt.family = search_family == "tilted" ? SearchFamily::Tilted
                                                          : SearchFamily::General;
            return cmd_search(search_opt, out_path, report_path, out);
        }
        return cmd_canonical(mode, out_path, out);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
    } catch (const FormatError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const NumericalError &e) {
        err << "error: " << e.what() << "\n";
    } catch (const io::json::exception &e) {
        err << "error: malformed document: " << e.what() << "\n";
    }
    return kExitInput;
}

} // namespace selftest::cli
