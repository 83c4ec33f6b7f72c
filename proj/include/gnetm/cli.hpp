#pragma once

// Command-line front end. Every module surface is reachable from one
// binary; outputs are deterministic for a fixed invocation.
//
// Exit codes:
//   0  success
//   1  usage or domain error
//   2  Goldbach falsification found (machine halt, or an empty
//      partition set for some even ne >= 6)
//   3  resource guard exceeded or internal error

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gnetm/congruence.hpp"
#include "gnetm/errors.hpp"
#include "gnetm/estimator.hpp"
#include "gnetm/machine.hpp"
#include "gnetm/matrices.hpp"
#include "gnetm/partitions.hpp"
#include "gnetm/primes.hpp"

namespace gnetm::cli {

using json = nlohmann::ordered_json;

enum class Output { text, csv, json };

namespace detail {

inline unsigned default_threads() {
    if (const char* env = std::getenv("GNETM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline std::map<std::string, Output> output_map() {
    return {{"text", Output::text}, {"csv", Output::csv}, {"json", Output::json}};
}

inline json audit_to_json(const DeletionAudit& audit) {
    json j;
    j["ne"] = audit.ne;
    j["rows_required_for_elimination"] = audit.rows_required_for_elimination;
    j["interval_low_primes"] = audit.interval_low_primes;
    j["interval_high_primes"] = audit.interval_high_primes;
    j["mismatch_count_formula"] = audit.mismatch_count_formula;
    j["non_matching_pairs"] = audit.non_matching_pairs;
    j["surviving_prime_pairs"] = audit.surviving_prime_pairs;
    j["contradiction"] = audit.contradiction;
    return j;
}

}  // namespace detail

inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Goldbach partition toolkit: sieves, congruence systems, "
                 "partition counts, sum matrices and the tape-machine experiment"};
    app.require_subcommand(1);

    unsigned threads = detail::default_threads();
    app.add_option("--threads", threads, "worker threads for scans and audits")
        ->check(CLI::PositiveNumber);

    // ---- primes ----------------------------------------------------
    auto* cmd_primes = app.add_subcommand("primes", "list the primes up to a limit");
    u64 primes_limit = 0;
    u64 sieve_guard = kDefaultSieveGuard;
    Output primes_output = Output::text;
    cmd_primes->add_option("limit", primes_limit, "inclusive sieve limit")->required();
    cmd_primes->add_option("--sieve-guard", sieve_guard, "memory guard for the sieve");
    cmd_primes->add_option("--output", primes_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- partitions ------------------------------------------------
    auto* cmd_partitions = app.add_subcommand("partitions", "Goldbach partitions of one even");
    u64 partitions_ne = 0;
    bool partitions_allow_two = false;
    Output partitions_output = Output::text;
    cmd_partitions->add_option("ne", partitions_ne, "even number >= 4")->required();
    cmd_partitions->add_flag("--allow-two", partitions_allow_two, "admit the prime 2 in pairs");
    cmd_partitions->add_option("--output", partitions_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- phi-scan --------------------------------------------------
    auto* cmd_scan = app.add_subcommand("phi-scan", "partition counts over an even range");
    u64 scan_lo = 0, scan_hi = 0;
    bool scan_allow_two = false;
    u64 scan_guard = kDefaultScanGuard;
    Output scan_output = Output::csv;
    cmd_scan->add_option("lo", scan_lo, "even lower bound >= 4")->required();
    cmd_scan->add_option("hi", scan_hi, "even upper bound")->required();
    cmd_scan->add_flag("--allow-two", scan_allow_two, "admit the prime 2 in pairs");
    cmd_scan->add_option("--scan-guard", scan_guard, "upper guard for the scan range");
    cmd_scan->add_option("--output", scan_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- modm ------------------------------------------------------
    auto* cmd_modm = app.add_subcommand("modm", "prime-moduli congruence system of an even");
    u64 modm_ne = 0;
    Output modm_output = Output::text;
    cmd_modm->add_option("ne", modm_ne, "even number >= 6")->required();
    cmd_modm->add_option("--output", modm_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- crt -------------------------------------------------------
    auto* cmd_crt = app.add_subcommand("crt", "solve a coprime congruence system");
    std::vector<std::string> crt_rows;
    Output crt_output = Output::text;
    cmd_crt->add_option("rows", crt_rows, "rows as <modulus>:<residue>")->required();
    cmd_crt->add_option("--output", crt_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- table1 ----------------------------------------------------
    auto* cmd_table1 = app.add_subcommand("table1", "r(theta, ne) reference table with "
                                                    "computed partition counts");
    std::vector<u64> table1_rows = table1_default_rows();
    std::vector<double> table1_thetas = table1_default_thetas();
    u64 table1_phi_limit = 1'000'000;
    Output table1_output = Output::csv;
    cmd_table1->add_option("--rows", table1_rows, "even numbers to tabulate");
    cmd_table1->add_option("--thetas", table1_thetas, "probability column values");
    cmd_table1->add_option("--phi-limit", table1_phi_limit,
                           "compute partition counts only up to this ne");
    cmd_table1->add_option("--output", table1_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- matrix ----------------------------------------------------
    auto* cmd_matrix = app.add_subcommand("matrix", "render a sum matrix as a dense grid");
    u64 matrix_ne = 0;
    std::string matrix_kind = "full";
    u64 dense_guard = kDefaultDenseGuard;
    Output matrix_output = Output::text;
    cmd_matrix->add_option("ne", matrix_ne, "even number >= 4")->required();
    cmd_matrix->add_option("--kind", matrix_kind, "full | regular | max-antidiagonal | prime")
        ->check(CLI::IsMember({"full", "regular", "max-antidiagonal", "max", "prime"}));
    cmd_matrix->add_option("--dense-guard", dense_guard, "largest ne rendered densely");
    cmd_matrix->add_option("--output", matrix_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- audit -----------------------------------------------------
    auto* cmd_audit = app.add_subcommand("audit", "deletion audits over an even range");
    u64 audit_lo = 0, audit_hi = 0;
    Output audit_output = Output::json;
    cmd_audit->add_option("lo", audit_lo, "even lower bound >= 6")->required();
    cmd_audit->add_option("hi", audit_hi, "even upper bound")->required();
    cmd_audit->add_option("--output", audit_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- run-machine -----------------------------------------------
    auto* cmd_run = app.add_subcommand("run-machine", "run the tape machine over a range");
    MachineConfig machine_config;
    machine_config.limit_even = 1'000'000;
    std::string machine_basis = "basis2";
    bool machine_trace = false;
    bool machine_cross_check = false;
    Output run_output = Output::json;
    cmd_run->add_option("--start", machine_config.start_even, "first even on the tape segment");
    cmd_run->add_option("--limit", machine_config.limit_even, "last even on the tape segment");
    cmd_run->add_option("--controller", machine_basis, "basis1 | basis2 | basis3")
        ->check(CLI::IsMember({"basis1", "basis2", "basis3"}));
    cmd_run->add_option("--recheck", machine_config.recheck_count,
                        "re-reads before a halt is accepted");
    cmd_run->add_flag("--allow-two", machine_config.allow_two, "admit the prime 2 in witnesses");
    cmd_run->add_flag("--trace", machine_trace, "stream one line per cell");
    cmd_run->add_flag("--cross-check", machine_cross_check,
                      "also require basis1/basis2/basis3 agreement over the range");
    cmd_run->add_option("--output", run_output, "output format")
        ->transform(CLI::CheckedTransformer(detail::output_map(), CLI::ignore_case));

    // ---- bench -----------------------------------------------------
    auto* cmd_bench = app.add_subcommand("bench", "timings for sieve and scan workloads");
    u64 bench_sieve_n = 10'000'000;
    u64 bench_scan_n = 100'000;
    cmd_bench->add_option("--sieve-n", bench_sieve_n, "sieve workload size");
    cmd_bench->add_option("--scan-n", bench_scan_n, "phi-scan workload upper bound");

    // app-level options (--threads) stay usable after a subcommand name
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        err << app.help();
        return 1;
    }

    try {
        if (*cmd_primes) {
            const PrimeTable table = sieve(primes_limit, sieve_guard);
            if (primes_output == Output::json) {
                out << json(table.primes).dump() << '\n';
            } else {
                if (primes_output == Output::csv) out << "p\n";
                for (u64 p : table.primes) out << p << '\n';
            }
            return 0;
        }

        if (*cmd_partitions) {
            const PartitionSet set = goldbach_pairs(partitions_ne, partitions_allow_two);
            if (partitions_output == Output::json) {
                json j;
                j["ne"] = set.ne;
                j["pairs"] = json::array();
                for (const auto& [p, q] : set.pairs) j["pairs"].push_back({p, q});
                j["phi"] = set.phi;
                out << j.dump() << '\n';
            } else if (partitions_output == Output::csv) {
                out << "p,q\n";
                for (const auto& [p, q] : set.pairs) out << p << ',' << q << '\n';
            } else {
                for (const auto& [p, q] : set.pairs)
                    out << set.ne << " = " << p << " + " << q << '\n';
                out << "phi=" << set.phi << '\n';
            }
            return (set.ne >= 6 && set.phi == 0) ? 2 : 0;
        }

        if (*cmd_scan) {
            const auto records = phi_scan(scan_lo, scan_hi, scan_allow_two, threads, scan_guard);
            if (scan_output == Output::json) {
                json j = json::array();
                for (const auto& rec : records) j.push_back({{"ne", rec.ne}, {"phi", rec.phi}});
                out << j.dump() << '\n';
            } else if (scan_output == Output::text) {
                for (const auto& rec : records) out << rec.ne << ' ' << rec.phi << '\n';
            } else {
                write_phi_csv(records, out);
            }
            const bool falsified = std::any_of(records.begin(), records.end(), [](const auto& r) {
                return r.ne >= 6 && r.phi == 0;
            });
            return falsified ? 2 : 0;
        }

        if (*cmd_modm) {
            const CongruenceSystem sys = build_mod_m(modm_ne);
            if (modm_output == Output::json) {
                json j;
                j["ne"] = sys.ne;
                j["rows"] = json::array();
                for (const auto& row : sys.rows)
                    j["rows"].push_back({{"modulus", row.modulus},
                                         {"residue", row.residue},
                                         {"residue_is_prime", row.residue_is_prime}});
                out << j.dump() << '\n';
            } else if (modm_output == Output::csv) {
                out << "modulus,residue,residue_is_prime\n";
                for (const auto& row : sys.rows)
                    out << row.modulus << ',' << row.residue << ','
                        << (row.residue_is_prime ? "true" : "false") << '\n';
            } else {
                write_system(sys, out);
            }
            return 0;
        }

        if (*cmd_crt) {
            std::vector<std::pair<u64, u64>> rows;
            for (const std::string& row_arg : crt_rows) {
                const auto colon = row_arg.find(':');
                if (colon == std::string::npos)
                    throw std::domain_error("crt: rows must be <modulus>:<residue>, got '" +
                                            row_arg + "'");
                rows.emplace_back(std::stoull(row_arg.substr(0, colon)),
                                  std::stoull(row_arg.substr(colon + 1)));
            }
            const u64 solution = crt_solve(rows);
            if (crt_output == Output::json) {
                json j;
                j["solution"] = solution;
                out << j.dump() << '\n';
            } else {
                out << solution << '\n';
            }
            return 0;
        }

        if (*cmd_table1) {
            const auto rows = table1(table1_rows, table1_thetas, table1_phi_limit);
            if (table1_output == Output::json) {
                json j = json::array();
                for (const auto& row : rows) {
                    json item;
                    item["ne"] = row.ne;
                    item["r"] = row.r_values;
                    if (row.phi_computed) item["phi_computed"] = *row.phi_computed;
                    if (row.phi_published) item["phi_paper"] = *row.phi_published;
                    if (row.agree) item["agree"] = *row.agree;
                    j.push_back(item);
                }
                out << j.dump() << '\n';
            } else {
                write_table1_csv(rows, table1_thetas, out);
            }
            return 0;
        }

        if (*cmd_matrix) {
            MatrixKind kind = MatrixKind::full;
            if (matrix_kind == "regular") kind = MatrixKind::regular;
            else if (matrix_kind == "max-antidiagonal" || matrix_kind == "max")
                kind = MatrixKind::max_antidiagonal;
            else if (matrix_kind == "prime") kind = MatrixKind::prime;
            const SumMatrix matrix = build_matrix(matrix_ne, kind);
            if (matrix_output == Output::json) {
                if (matrix.ne() > dense_guard)
                    throw ResourceError("matrix: ne " + std::to_string(matrix.ne()) +
                                        " exceeds dense guard " + std::to_string(dense_guard));
                json j;
                j["ne"] = matrix.ne();
                j["kind"] = matrix_kind_name(matrix.kind());
                j["labels"] = matrix.row_labels();
                json entries = json::array();
                for (std::size_t i = 0; i < matrix.size(); ++i) {
                    json row = json::array();
                    for (std::size_t j2 = 0; j2 < matrix.size(); ++j2)
                        row.push_back(matrix.entry(i, j2));
                    entries.push_back(row);
                }
                j["entries"] = entries;
                out << j.dump() << '\n';
            } else {
                render_dense(matrix, out, dense_guard);
            }
            return 0;
        }

        if (*cmd_audit) {
            const auto audits = audit_range(audit_lo, audit_hi, threads);
            bool all_contradict = true;
            for (const auto& audit : audits) {
                all_contradict = all_contradict && audit.contradiction;
                if (audit_output == Output::text) {
                    out << "ne=" << audit.ne << " rows_required="
                        << audit.rows_required_for_elimination
                        << " low_primes=" << audit.interval_low_primes
                        << " high_primes=" << audit.interval_high_primes
                        << " survivors=" << audit.surviving_prime_pairs
                        << (audit.contradiction ? " contradiction" : " NO-CONTRADICTION") << '\n';
                } else if (audit_output == Output::csv) {
                    if (audit.ne == audits.front().ne)
                        out << "ne,rows_required_for_elimination,interval_low_primes,"
                               "interval_high_primes,mismatch_count_formula,non_matching_pairs,"
                               "surviving_prime_pairs,contradiction\n";
                    out << audit.ne << ',' << audit.rows_required_for_elimination << ','
                        << audit.interval_low_primes << ',' << audit.interval_high_primes << ','
                        << std::setprecision(17) << audit.mismatch_count_formula << ','
                        << audit.non_matching_pairs << ',' << audit.surviving_prime_pairs << ','
                        << (audit.contradiction ? "true" : "false") << '\n';
                } else {
                    out << detail::audit_to_json(audit).dump() << '\n';
                }
            }
            return all_contradict ? 0 : 2;
        }

        if (*cmd_run) {
            if (machine_basis == "basis1") machine_config.controller = Basis::basis1;
            else if (machine_basis == "basis3") machine_config.controller = Basis::basis3;
            else machine_config.controller = Basis::basis2;
            const RunReport report = run(machine_config, machine_trace ? &out : nullptr);
            bool agree = true;
            if (machine_cross_check) agree = cross_check(machine_config);
            if (run_output == Output::text) {
                out << "evaluated " << report.cells_evaluated << " cells in ["
                    << report.start_even << ", " << report.limit_even << "] with "
                    << basis_name(report.controller) << ": "
                    << (report.halted ? "HALTED" : "no halt") << '\n';
                for (u64 ne : report.failures) out << "failure at " << ne << '\n';
                if (machine_cross_check)
                    out << "cross-check: " << (agree ? "agree" : "DISAGREE") << '\n';
            } else {
                write_report_json(report, out);
                if (machine_cross_check)
                    out << "{\"cross_check\":" << (agree ? "true" : "false") << "}\n";
            }
            if (report.halted) return 2;
            return agree ? 0 : 3;
        }

        if (*cmd_bench) {
            out << "task,n,elapsed_ms,throughput\n";
            {
                const auto t0 = std::chrono::steady_clock::now();
                const PrimeTable table = sieve(bench_sieve_n, ~u64{0});
                const auto t1 = std::chrono::steady_clock::now();
                const double ms =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
                out << "sieve," << bench_sieve_n << ',' << std::llround(ms) << ','
                    << std::llround(static_cast<double>(bench_sieve_n) / (ms / 1000.0)) << '\n';
                (void)table;
            }
            {
                const auto t0 = std::chrono::steady_clock::now();
                const auto records = phi_scan(4, bench_scan_n, false, threads);
                const auto t1 = std::chrono::steady_clock::now();
                const double ms =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
                out << "phi-scan," << bench_scan_n << ',' << std::llround(ms) << ','
                    << std::llround(static_cast<double>(records.size()) / (ms / 1000.0)) << '\n';
            }
            return 0;
        }
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}

}  // namespace gnetm::cli
