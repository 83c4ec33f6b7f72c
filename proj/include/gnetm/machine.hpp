#pragma once

// Tape-machine experiment over the even numbers.
//
// The tape holds the evens from 4 upward (cell i <-> even 2i + 4; no 0
// or 2 on the tape). The controller scans a cell's even for a prime
// pair, prints T and moves right on success, and on failure re-reads
// the cell recheck_count times before halting with F. A halt is a
// checked counterexample, so it is reported as a first-class result,
// never asserted away.
//
// Three controller strategies exist; they enumerate the same odd
// decompositions in different encodings and must agree cell-for-cell:
//   basis1  shifts the seed pair (1, ne-1) by even k and tests (1+k, ne-1-k)
//   basis2  scans odd K ascending from 3 and tests (K, ne-K)
//   basis3  scans odd K descending from ne-3 and tests (K, |K-ne|)
// Witnesses are normalized to (min, max) before comparison.

#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "gnetm/primes.hpp"

namespace gnetm {

enum class Basis { basis1, basis2, basis3 };

inline const char* basis_name(Basis basis) {
    switch (basis) {
        case Basis::basis1: return "basis1";
        case Basis::basis2: return "basis2";
        case Basis::basis3: return "basis3";
    }
    return "?";
}

struct Witness {
    u64 p = 0;
    u64 q = 0;

    friend bool operator==(const Witness&, const Witness&) = default;
};

using Controller = std::function<std::optional<Witness>(u64)>;

namespace detail {

inline bool probe(u64 x, const PrimeBitset* bits) {
    if (bits && x <= bits->limit()) return bits->is_prime(x);
    return is_prime(x);
}

}  // namespace detail

// First witness under the strategy's canonical scan, or absent.
inline std::optional<Witness> controller_eval(u64 ne, Basis basis, bool allow_two = false,
                                              const PrimeBitset* bits = nullptr) {
    if (ne < 4 || ne % 2 != 0)
        throw std::domain_error("controller_eval: ne must be even and >= 4");
    if (allow_two && detail::probe(ne - 2, bits)) return Witness{2, ne - 2};
    switch (basis) {
        case Basis::basis1:
            for (u64 k = 2; 1 + k <= ne / 2; k += 2) {
                const u64 x = 1 + k, y = ne - 1 - k;
                if (detail::probe(x, bits) && detail::probe(y, bits)) return Witness{x, y};
            }
            break;
        case Basis::basis2:
            for (u64 k = 3; k <= ne / 2; k += 2)
                if (detail::probe(k, bits) && detail::probe(ne - k, bits))
                    return Witness{k, ne - k};
            break;
        case Basis::basis3:
            for (u64 k = ne - 3; k >= ne / 2 && k >= 3; k -= 2) {
                const u64 diff = k > ne ? k - ne : ne - k;  // |k - ne|
                if (detail::probe(k, bits) && detail::probe(diff, bits))
                    return Witness{diff, k};
            }
            break;
    }
    return std::nullopt;
}

inline Controller make_controller(Basis basis, bool allow_two = false,
                                  std::shared_ptr<const PrimeBitset> bits = nullptr) {
    return [basis, allow_two, bits = std::move(bits)](u64 ne) {
        return controller_eval(ne, basis, allow_two, bits.get());
    };
}

struct MachineConfig {
    u64 start_even = 6;
    u64 limit_even = 6;
    Basis controller = Basis::basis2;
    int recheck_count = 3;
    bool allow_two = false;

    void validate() const {
        if (start_even < 4 || start_even % 2 != 0)
            throw std::domain_error("machine config: start_even must be even and >= 4");
        if (limit_even < start_even || limit_even % 2 != 0)
            throw std::domain_error("machine config: limit_even must be even and >= start_even");
        if (recheck_count < 1)
            throw std::domain_error("machine config: recheck_count must be >= 1");
    }
};

enum class Register { T, F };

struct MachineState {
    u64 head_index = 0;    // cell i holds even 2i + 4
    u64 current_even = 4;
    std::optional<Register> reg;  // empty before the first evaluation
    std::optional<Witness> witness;
    u64 step_count = 0;
    bool halted = false;
    std::vector<bool> recheck_log;  // re-read outcomes of the last F read
};

inline MachineState initial_state(const MachineConfig& config) {
    config.validate();
    MachineState state;
    state.head_index = (config.start_even - 4) / 2;
    state.current_even = config.start_even;
    return state;
}

// One transition. A no-witness read triggers the leftward re-check
// protocol: only recheck_count unanimous failed re-reads halt the
// machine; any successful re-read resumes the normal rightward run.
inline MachineState step(const MachineState& state, const MachineConfig& config,
                         const Controller& controller) {
    if (state.halted) throw std::logic_error("step: machine already halted");
    MachineState next = state;
    next.step_count = state.step_count + 1;
    next.recheck_log.clear();
    std::optional<Witness> witness = controller(state.current_even);
    if (!witness) {
        for (int i = 0; i < config.recheck_count && !witness; ++i) {
            witness = controller(state.current_even);
            next.recheck_log.push_back(witness.has_value());
        }
    }
    if (witness) {
        next.reg = Register::T;
        next.witness = witness;
        next.head_index = state.head_index + 1;
        next.current_even = state.current_even + 2;
    } else {
        next.reg = Register::F;
        next.witness.reset();
        next.halted = true;
    }
    return next;
}

inline MachineState step(const MachineState& state, const MachineConfig& config) {
    return step(state, config, make_controller(config.controller, config.allow_two));
}

struct RunReport {
    u64 start_even = 0;
    u64 limit_even = 0;
    Basis controller = Basis::basis2;
    u64 cells_evaluated = 0;
    std::vector<u64> failures;  // empty unless the run halted
    std::vector<std::pair<u64, Witness>> first_witnesses;  // ascending even
    bool halted = false;
    std::uint64_t elapsed_ms = 0;

    const Witness* find_witness(u64 ne) const {
        auto it = std::lower_bound(first_witnesses.begin(), first_witnesses.end(), ne,
                                   [](const auto& entry, u64 key) { return entry.first < key; });
        return it != first_witnesses.end() && it->first == ne ? &it->second : nullptr;
    }
};

inline RunReport run_with_controller(const MachineConfig& config, const Controller& controller,
                                     std::ostream* trace = nullptr) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.start_even = config.start_even;
    report.limit_even = config.limit_even;
    report.controller = config.controller;
    MachineState state = initial_state(config);
    while (state.current_even <= config.limit_even && !state.halted) {
        const u64 ne = state.current_even;
        state = step(state, config, controller);
        ++report.cells_evaluated;
        if (state.halted) {
            report.failures.push_back(ne);
            if (trace) *trace << ne << "\tF\n";
        } else {
            report.first_witnesses.emplace_back(ne, *state.witness);
            if (trace) *trace << ne << "\tT\t" << state.witness->p << '+' << state.witness->q << '\n';
        }
    }
    report.halted = state.halted;
    const auto t1 = std::chrono::steady_clock::now();
    report.elapsed_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    return report;
}

inline RunReport run(const MachineConfig& config, std::ostream* trace = nullptr) {
    config.validate();
    auto bits = std::make_shared<const PrimeBitset>(config.limit_even);
    return run_with_controller(config, make_controller(config.controller, config.allow_two, bits),
                               trace);
}

// true iff all three strategies agree on witness presence and, after
// normalization, on the witness itself for every even in range.
inline bool cross_check(const MachineConfig& config) {
    config.validate();
    auto bits = std::make_shared<const PrimeBitset>(config.limit_even);
    auto evaluate = [&](Basis basis) {
        std::vector<std::optional<Witness>> results;
        results.reserve((config.limit_even - config.start_even) / 2 + 1);
        for (u64 ne = config.start_even; ne <= config.limit_even; ne += 2)
            results.push_back(controller_eval(ne, basis, config.allow_two, bits.get()));
        return results;
    };
    auto f1 = std::async(std::launch::async, evaluate, Basis::basis1);
    auto f2 = std::async(std::launch::async, evaluate, Basis::basis2);
    auto f3 = std::async(std::launch::async, evaluate, Basis::basis3);
    const auto r1 = f1.get(), r2 = f2.get(), r3 = f3.get();
    for (std::size_t i = 0; i < r2.size(); ++i) {
        if (r1[i].has_value() != r2[i].has_value() || r2[i].has_value() != r3[i].has_value())
            return false;
        if (r2[i] && (*r1[i] != *r2[i] || *r2[i] != *r3[i])) return false;
    }
    return true;
}

// JSON form of a run report; field set is fixed:
// start, limit, controller, cells, failures, halted, elapsed_ms.
inline void write_report_json(const RunReport& report, std::ostream& out) {
    out << "{\"start\":" << report.start_even << ",\"limit\":" << report.limit_even
        << ",\"controller\":\"" << basis_name(report.controller) << "\""
        << ",\"cells\":" << report.cells_evaluated << ",\"failures\":[";
    for (std::size_t i = 0; i < report.failures.size(); ++i) {
        if (i) out << ',';
        out << report.failures[i];
    }
    out << "],\"halted\":" << (report.halted ? "true" : "false")
        << ",\"elapsed_ms\":" << report.elapsed_ms << "}\n";
}

}  // namespace gnetm
