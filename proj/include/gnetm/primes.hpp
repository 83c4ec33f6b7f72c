#pragma once

// Prime generation, primality predicates and exact/approximate counting.
// Everything downstream (partitions, congruence systems, the machine)
// sits on top of this module, so the sieve is bit-packed and the hot
// predicates are O(1) table probes.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gnetm/errors.hpp"

namespace gnetm {

using u64 = std::uint64_t;

constexpr u64 kDefaultSieveGuard = u64{1} << 32;

inline u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// -------------------------------------------------------------------
// PrimeBitset: primality for odd numbers in [3, limit], 1 bit each.
//   bit index i  ->  odd number 2*i + 3
//   odd number n ->  bit index  (n - 3) / 2
// 2 is answered as a special case; even numbers are never stored.
// -------------------------------------------------------------------
class PrimeBitset {
public:
    explicit PrimeBitset(u64 limit) : limit_(limit) {
        if (limit_ >= 3) {
            words_.assign((bit_count() + 63) / 64, ~u64{0});
            // clear excess bits past the last odd <= limit
            const u64 n = bit_count();
            if (n % 64 != 0) words_.back() &= (u64{1} << (n % 64)) - 1;
            for (u64 p = 3; p * p <= limit_; p += 2) {
                if (!test_odd(p)) continue;
                for (u64 c = p * p; c <= limit_; c += 2 * p) clear_odd(c);
            }
        }
    }

    u64 limit() const { return limit_; }

    bool is_prime(u64 n) const {
        if (n < 2) return false;
        if (n == 2) return true;
        if (n % 2 == 0) return false;
        assert(n <= limit_ && "PrimeBitset probe past sieved limit");
        return test_odd(n);
    }

    // Number of primes in [lo, hi], including 2 when it falls in range.
    u64 count_range(u64 lo, u64 hi) const {
        if (lo > hi) return 0;
        assert(hi <= limit_ && "PrimeBitset count past sieved limit");
        u64 c = (lo <= 2 && hi >= 2) ? 1 : 0;
        const u64 first = std::max<u64>(lo | 1, 3);
        if (first > hi || hi < 3) return c;
        const u64 a = (first - 3) / 2;       // inclusive bit range [a, b]
        const u64 b = ((hi | 1) == hi ? hi - 3 : hi - 4) / 2;
        for (u64 w = a >> 6; w <= b >> 6; ++w) {
            u64 word = words_[w];
            if (w == a >> 6) word &= ~u64{0} << (a & 63);
            if (w == b >> 6 && (b & 63) != 63) word &= (u64{1} << ((b & 63) + 1)) - 1;
            c += static_cast<u64>(__builtin_popcountll(word));
        }
        return c;
    }

    template <typename F>
    void for_each_prime(F&& fn) const {
        if (limit_ >= 2) fn(u64{2});
        for (u64 n = 3; n <= limit_; n += 2)
            if (test_odd(n)) fn(n);
    }

private:
    u64 bit_count() const { return limit_ < 3 ? 0 : (limit_ - 3) / 2 + 1; }
    bool test_odd(u64 n) const {
        const u64 i = (n - 3) / 2;
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void clear_odd(u64 n) {
        const u64 i = (n - 3) / 2;
        words_[i >> 6] &= ~(u64{1} << (i & 63));
    }

    u64 limit_;
    std::vector<u64> words_;
};

// -------------------------------------------------------------------
// PrimeTable: materialized ascending primes up to a limit.
// -------------------------------------------------------------------
struct PrimeTable {
    u64 limit = 0;
    std::vector<u64> primes;

    u64 count() const { return primes.size(); }

    bool contains(u64 x) const {
        return std::binary_search(primes.begin(), primes.end(), x);
    }
};

inline PrimeTable sieve(u64 limit, u64 memory_guard = kDefaultSieveGuard) {
    if (limit > memory_guard) {
        std::ostringstream msg;
        msg << "sieve limit " << limit << " exceeds memory guard " << memory_guard;
        throw ResourceError(msg.str());
    }
    PrimeTable table;
    table.limit = limit;
    PrimeBitset bits(limit);
    bits.for_each_prime([&](u64 p) { table.primes.push_back(p); });
    return table;
}

// Primes in [lo, hi] via a base table that must cover sqrt(hi).
// Concatenating consecutive segments reproduces a direct sieve.
inline std::vector<u64> sieve_segment(u64 lo, u64 hi, const PrimeTable& base) {
    if (lo > hi) throw std::domain_error("sieve_segment: lo > hi");
    if (base.limit < isqrt(hi)) {
        std::ostringstream msg;
        msg << "sieve_segment: base table limit " << base.limit
            << " is below sqrt(" << hi << ") = " << isqrt(hi);
        throw std::domain_error(msg.str());
    }
    std::vector<char> composite(hi - lo + 1, 0);
    for (u64 n = lo; n < std::min<u64>(hi + 1, 2); ++n) composite[n - lo] = 1;
    for (u64 p : base.primes) {
        if (p * p > hi) break;
        u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (u64 c = start; c <= hi; c += p) composite[c - lo] = 1;
    }
    std::vector<u64> out;
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
        if (!composite[n - lo]) out.push_back(n);
    return out;
}

// Deterministic trial-division primality (the standalone predicate;
// bulk callers should probe a PrimeBitset instead).
inline bool is_prime(u64 x) {
    if (x < 2) return false;
    if (x < 4) return true;
    if (x % 2 == 0 || x % 3 == 0) return false;
    for (u64 d = 5; d * d <= x; d += 6) {
        if (x % d == 0 || x % (d + 2) == 0) return false;
    }
    return true;
}

// The x-th prime; nth_prime(0) = 0, nth_prime(1) = 2.
inline u64 nth_prime(u64 x) {
    if (x == 0) return 0;
    // p_x < x(ln x + ln ln x) for x >= 6; small cases padded
    double bound = 15.0;
    if (x >= 6) {
        const double lx = std::log(static_cast<double>(x));
        bound = static_cast<double>(x) * (lx + std::log(lx)) + 8.0;
    }
    u64 limit = static_cast<u64>(bound);
    for (;;) {
        PrimeTable t = sieve(limit, ~u64{0});
        if (t.count() >= x) return t.primes[x - 1];
        limit *= 2;
    }
}

// Exact pi(x).
inline u64 prime_count(u64 x) {
    if (x < 2) return 0;
    PrimeBitset bits(x);
    return bits.count_range(2, x);
}

// The x / ln(x) approximation to pi(x).
inline double pi_approx(u64 x) {
    if (x < 2) throw std::domain_error("pi_approx: x must be >= 2");
    return static_cast<double>(x) / std::log(static_cast<double>(x));
}

// (pi(ne/2), pi(ne) - pi(ne/2)): prime counts below and above the
// midpoint of an even number. Both are >= 1 for every even ne >= 6;
// the caller-facing contract checks it rather than assuming it.
inline std::pair<u64, u64> interval_prime_count(u64 ne) {
    if (ne < 6 || ne % 2 != 0)
        throw std::domain_error("interval_prime_count: ne must be even and >= 6");
    PrimeBitset bits(ne);
    const u64 low = bits.count_range(2, ne / 2);
    const u64 high = bits.count_range(ne / 2 + 1, ne);
    return {low, high};
}

}  // namespace gnetm
