#pragma once

// Congruence systems over an even number ne: the odd-complete group
// (one row per odd modulus k < ne, residue ne - k) and the prime-extended
// system (moduli restricted to the odd primes below ne), plus a classical
// CRT solver for coprime systems.
//
// Rows store the paired residue b = ne - m, not the canonical residue
// b mod m: row validity is divisibility m | (ne - b), which is equivalent,
// and it keeps serialized systems in the paired form.

#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gnetm/errors.hpp"
#include "gnetm/primes.hpp"

namespace gnetm {

constexpr u64 kDefaultRowGuard = 1'000'000;

struct CongruenceRow {
    u64 modulus = 0;
    u64 residue = 0;
    bool residue_is_prime = false;
};

enum class SystemKind { odd_complete, prime_extended };

struct CongruenceSystem {
    u64 ne = 0;
    SystemKind kind = SystemKind::odd_complete;
    std::vector<CongruenceRow> rows;  // ascending modulus
};

// true iff modulus divides (ne - residue) and modulus + residue = ne.
inline bool verify_row(u64 ne, const CongruenceRow& row) {
    if (row.modulus == 0 || row.residue > ne) return false;
    return (ne - row.residue) % row.modulus == 0 && row.modulus + row.residue == ne;
}

// One row (k, ne - k) per odd k in [1, ne - 1]; exactly ne/2 rows.
inline CongruenceSystem build_odd_complete(u64 ne, u64 row_guard = kDefaultRowGuard) {
    if (ne < 4 || ne % 2 != 0)
        throw std::domain_error("build_odd_complete: ne must be even and >= 4");
    if (ne / 2 > row_guard) {
        std::ostringstream msg;
        msg << "build_odd_complete: " << ne / 2 << " rows exceed row guard " << row_guard;
        throw ResourceError(msg.str());
    }
    CongruenceSystem sys;
    sys.ne = ne;
    sys.kind = SystemKind::odd_complete;
    sys.rows.reserve(ne / 2);
    PrimeBitset bits(ne);
    for (u64 k = 1; k <= ne - 1; k += 2)
        sys.rows.push_back({k, ne - k, bits.is_prime(ne - k)});
    return sys;
}

// One row (p, ne - p) per odd prime p <= ne - 1, each annotated with
// whether the paired residue is itself prime.
inline CongruenceSystem build_mod_m(u64 ne) {
    if (ne < 6 || ne % 2 != 0)
        throw std::domain_error("build_mod_m: ne must be even and >= 6");
    CongruenceSystem sys;
    sys.ne = ne;
    sys.kind = SystemKind::prime_extended;
    PrimeBitset bits(ne);
    for (u64 p = 3; p <= ne - 1; p += 2)
        if (bits.is_prime(p)) sys.rows.push_back({p, ne - p, bits.is_prime(ne - p)});
    return sys;
}

struct PropertyReport {
    bool uniqueness = false;
    bool closure = false;
    std::optional<bool> symmetry;  // empty for prime-extended systems

    bool all_ok() const { return uniqueness && closure && symmetry.value_or(true); }
};

inline PropertyReport check_properties(const CongruenceSystem& sys) {
    PropertyReport report;
    std::unordered_map<u64, u64> residue_of;
    residue_of.reserve(sys.rows.size());
    report.uniqueness = true;
    for (const auto& row : sys.rows)
        if (!residue_of.emplace(row.modulus, row.residue).second) report.uniqueness = false;
    report.closure = true;
    for (const auto& row : sys.rows)
        if (!verify_row(sys.ne, row)) report.closure = false;
    if (sys.kind == SystemKind::odd_complete) {
        bool sym = true;
        for (const auto& row : sys.rows) {
            auto it = residue_of.find(row.residue);
            if (it == residue_of.end() || it->second != row.modulus) sym = false;
        }
        report.symmetry = sym;
    }
    return report;
}

// Least nonnegative S with S = b (mod m) for every row; moduli must be
// pairwise coprime and their product must fit in 64 bits.
inline u64 crt_solve(const std::vector<std::pair<u64, u64>>& rows) {
    if (rows.empty()) throw std::domain_error("crt_solve: empty system");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first == 0) throw std::domain_error("crt_solve: zero modulus");
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (std::gcd(rows[i].first, rows[j].first) != 1) {
                std::ostringstream msg;
                msg << "crt_solve: moduli " << rows[i].first << " and " << rows[j].first
                    << " are not coprime";
                throw std::domain_error(msg.str());
            }
        }
    }
    unsigned __int128 product = 1;
    for (const auto& [m, b] : rows) {
        product *= m;
        if (product > ~u64{0}) throw ResourceError("crt_solve: modulus product overflows 64 bits");
    }
    // incremental combination: x = x + m_acc * t with t solving the next row
    u64 solution = rows[0].second % rows[0].first;
    u64 modulus_acc = rows[0].first;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const u64 m = rows[i].first;
        const u64 b = rows[i].second % m;
        // t = (b - solution) * inverse(modulus_acc) mod m
        const u64 diff = (b + m - solution % m) % m;
        // extended gcd for the inverse of modulus_acc mod m
        std::int64_t t0 = 0, t1 = 1;
        u64 r0 = m, r1 = modulus_acc % m;
        while (r1 != 0) {
            const u64 q = r0 / r1;
            const u64 r2 = r0 - q * r1;
            const std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
            r0 = r1; r1 = r2;
            t0 = t1; t1 = t2;
        }
        const u64 inv = static_cast<u64>((t0 % static_cast<std::int64_t>(m) +
                                          static_cast<std::int64_t>(m)) % static_cast<std::int64_t>(m));
        const u64 t = static_cast<u64>((static_cast<unsigned __int128>(diff) * inv) % m);
        // t < m, so t * modulus_acc < product <= 2^64 - 1: no overflow here
        solution += t * modulus_acc;
        modulus_acc *= m;
        solution %= modulus_acc;
    }
    return solution;
}

// Text form consumed by the CLI: one `<ne> = <residue> (mod <modulus>)`
// line per row, ascending modulus.
inline void write_system(const CongruenceSystem& sys, std::ostream& out) {
    for (const auto& row : sys.rows)
        out << sys.ne << " = " << row.residue << " (mod " << row.modulus << ")\n";
}

}  // namespace gnetm
