#pragma once

// Goldbach partitions G(ne) and quasi-partitions G'(ne).
//
// Counting convention: phi counts unordered prime pairs (p, q) with
// p <= q and p + q = ne. The prime 2 is excluded by default (every
// pairing here runs over odd primes starting at 3); allow_two restores
// (2, ne-2) for callers that want the unrestricted count.

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gnetm/errors.hpp"
#include "gnetm/primes.hpp"

namespace gnetm {

constexpr u64 kDefaultScanGuard = u64{1} << 33;

struct PartitionSet {
    u64 ne = 0;
    std::vector<std::pair<u64, u64>> pairs;  // p <= q, ascending in p
    u64 phi = 0;                             // = pairs.size()
};

struct QuasiEntry {
    u64 p = 0;
    u64 q = 0;  // ne - p
    bool q_is_prime = false;
};

struct QuasiSet {
    u64 ne = 0;
    std::vector<QuasiEntry> entries;  // one per odd prime p <= ne - 1
    u64 r = 0;                        // = entries.size()
};

namespace detail {

inline void require_even(u64 ne, u64 min, const char* op) {
    if (ne < min || ne % 2 != 0) {
        std::ostringstream msg;
        msg << op << ": ne must be even and >= " << min;
        throw std::domain_error(msg.str());
    }
}

// Unordered-pair count against a sieve that already covers ne.
inline u64 phi_with(const PrimeBitset& bits, u64 ne, bool allow_two) {
    u64 count = 0;
    if (allow_two && ne >= 4 && bits.is_prime(ne - 2)) ++count;
    for (u64 p = 3; p <= ne / 2; p += 2)
        if (bits.is_prime(p) && bits.is_prime(ne - p)) ++count;
    return count;
}

}  // namespace detail

inline PartitionSet goldbach_pairs(u64 ne, bool allow_two = false) {
    detail::require_even(ne, 4, "goldbach_pairs");
    PartitionSet set;
    set.ne = ne;
    PrimeBitset bits(ne);
    if (allow_two && bits.is_prime(ne - 2)) set.pairs.emplace_back(2, ne - 2);
    for (u64 p = 3; p <= ne / 2; p += 2)
        if (bits.is_prime(p) && bits.is_prime(ne - p)) set.pairs.emplace_back(p, ne - p);
    set.phi = set.pairs.size();
    return set;
}

// Count-only fast path; equals goldbach_pairs(ne, allow_two).phi.
inline u64 phi(u64 ne, bool allow_two = false, u64 scan_guard = kDefaultScanGuard) {
    detail::require_even(ne, 4, "phi");
    if (ne > scan_guard) {
        std::ostringstream msg;
        msg << "phi: ne " << ne << " exceeds scan guard " << scan_guard;
        throw ResourceError(msg.str());
    }
    PrimeBitset bits(ne);
    return detail::phi_with(bits, ne, allow_two);
}

// Same count against a caller-provided sieve covering ne.
inline u64 phi(u64 ne, const PrimeBitset& bits, bool allow_two = false) {
    detail::require_even(ne, 4, "phi");
    return detail::phi_with(bits, ne, allow_two);
}

inline QuasiSet quasi_pairs(u64 ne) {
    detail::require_even(ne, 6, "quasi_pairs");
    QuasiSet set;
    set.ne = ne;
    PrimeBitset bits(ne);
    for (u64 p = 3; p <= ne - 1; p += 2)
        if (bits.is_prime(p)) set.entries.push_back({p, ne - p, bits.is_prime(ne - p)});
    set.r = set.entries.size();
    return set;
}

struct PhiRecord {
    u64 ne = 0;
    u64 phi = 0;
};

// One record per even ne in [lo, hi]. Workers shard the index range and
// write into preassigned slots, so the output does not depend on the
// thread count.
inline std::vector<PhiRecord> phi_scan(u64 lo, u64 hi, bool allow_two = false,
                                       unsigned threads = 1,
                                       u64 scan_guard = kDefaultScanGuard) {
    if (lo < 4 || lo > hi || lo % 2 != 0 || hi % 2 != 0)
        throw std::domain_error("phi_scan: need even 4 <= lo <= hi");
    if (hi > scan_guard) {
        std::ostringstream msg;
        msg << "phi_scan: hi " << hi << " exceeds scan guard " << scan_guard;
        throw ResourceError(msg.str());
    }
    const PrimeBitset bits(hi);
    const u64 n = (hi - lo) / 2 + 1;
    std::vector<PhiRecord> records(n);
    if (threads == 0) threads = 1;
    const unsigned workers = static_cast<unsigned>(std::min<u64>(threads, n));
    auto work = [&](u64 begin, u64 end) {
        for (u64 i = begin; i < end; ++i) {
            const u64 ne = lo + 2 * i;
            records[i] = {ne, detail::phi_with(bits, ne, allow_two)};
        }
    };
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const u64 begin = n * w / workers;
            const u64 end = n * (w + 1) / workers;
            pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return records;
}

// CSV consumed by plotting tools: exact header `ne,phi`, LF endings.
inline void write_phi_csv(const std::vector<PhiRecord>& records, std::ostream& out) {
    out << "ne,phi\n";
    for (const auto& rec : records) out << rec.ne << ',' << rec.phi << '\n';
}

}  // namespace gnetm
