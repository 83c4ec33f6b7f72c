#pragma once

// Sum-matrix views over an even number ne and the deletion audit.
//
// The matrices are label/accessor objects: entry(i, j) is computed from
// the axis labels, never materialized, because every check only inspects
// labels and the anti-diagonal. Dense rendering is a separate, guarded
// operation.
//
//   full             labels = odd 1..ne-1, entry = sum
//   regular          same labels, cells past the anti-diagonal masked to 0
//   max_antidiagonal same labels, only cells summing to ne kept
//   prime            labels = odd primes <= ne-1, entry = sum

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gnetm/errors.hpp"
#include "gnetm/partitions.hpp"
#include "gnetm/primes.hpp"

namespace gnetm {

constexpr u64 kDefaultDenseGuard = 10'000;

enum class MatrixKind { full, regular, max_antidiagonal, prime };

inline const char* matrix_kind_name(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::full: return "full";
        case MatrixKind::regular: return "regular";
        case MatrixKind::max_antidiagonal: return "max-antidiagonal";
        case MatrixKind::prime: return "prime";
    }
    return "?";
}

class SumMatrix {
public:
    SumMatrix(u64 ne, MatrixKind kind, std::vector<u64> labels)
        : ne_(ne), kind_(kind), labels_(std::move(labels)) {}

    u64 ne() const { return ne_; }
    MatrixKind kind() const { return kind_; }
    const std::vector<u64>& row_labels() const { return labels_; }
    const std::vector<u64>& col_labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }

    u64 entry(std::size_t i, std::size_t j) const {
        const u64 sum = labels_[i] + labels_[j];
        switch (kind_) {
            case MatrixKind::full:
            case MatrixKind::prime:
                return sum;
            case MatrixKind::regular:
                return sum <= ne_ ? sum : 0;
            case MatrixKind::max_antidiagonal:
                return sum == ne_ ? sum : 0;
        }
        return 0;
    }

private:
    u64 ne_;
    MatrixKind kind_;
    std::vector<u64> labels_;
};

inline SumMatrix build_matrix(u64 ne, MatrixKind kind) {
    if (ne < 4 || ne % 2 != 0)
        throw std::domain_error("build_matrix: ne must be even and >= 4");
    std::vector<u64> labels;
    if (kind == MatrixKind::prime) {
        PrimeBitset bits(ne);
        for (u64 n = 3; n <= ne - 1; n += 2)
            if (bits.is_prime(n)) labels.push_back(n);
    } else {
        labels.reserve(ne / 2);
        for (u64 n = 1; n <= ne - 1; n += 2) labels.push_back(n);
    }
    return SumMatrix(ne, kind, std::move(labels));
}

// Drop every row/column whose label is not an odd prime; the result is
// identical to build_matrix(ne, prime).
inline SumMatrix delete_transform(const SumMatrix& full) {
    if (full.kind() != MatrixKind::full)
        throw std::domain_error("delete_transform: input matrix must be of kind full");
    PrimeBitset bits(full.ne());
    std::vector<u64> labels;
    for (u64 n : full.row_labels())
        if (n >= 3 && bits.is_prime(n)) labels.push_back(n);
    return SumMatrix(full.ne(), MatrixKind::prime, std::move(labels));
}

// Ordered pairs (x, y) of odd labels in [min_label, ne-1] with x + y = m.
// min_label 1 gives m/2 for m <= ne; min_label 3 gives m/2 - 2 for
// 6 <= m <= ne.
inline u64 antidiagonal_count(u64 ne, u64 m, u64 min_label = 1) {
    if (ne < 4 || ne % 2 != 0)
        throw std::domain_error("antidiagonal_count: ne must be even and >= 4");
    if (m % 2 != 0 || m < 2 || m > 2 * (ne - 1))
        throw std::domain_error("antidiagonal_count: m must be even in [2, 2(ne-1)]");
    if (min_label % 2 != 1)
        throw std::domain_error("antidiagonal_count: min_label must be odd");
    const u64 lo = std::max(min_label, m > (ne - 1) ? m - (ne - 1) : u64{1});
    if (m < min_label + lo) return 0;
    const u64 hi = std::min(ne - 1, m - min_label);
    if (lo > hi) return 0;
    return (hi - lo) / 2 + 1;  // both ends odd
}

struct PrimeCellCount {
    bool contained = false;
    u64 ordered_count = 0;
};

// Does any cell of the prime matrix over ne_bound equal m, and how many
// ordered cells do: 2*phi(m) - [m/2 prime].
inline PrimeCellCount prime_matrix_contains(u64 ne_bound, u64 m) {
    if (ne_bound < 4 || ne_bound % 2 != 0)
        throw std::domain_error("prime_matrix_contains: ne_bound must be even and >= 4");
    if (m % 2 != 0 || m > ne_bound)
        throw std::domain_error("prime_matrix_contains: m must be even and <= ne_bound");
    PrimeBitset bits(ne_bound);
    PrimeCellCount result;
    for (u64 p = 3; p + 3 <= m && p <= ne_bound - 1; p += 2)
        if (bits.is_prime(p) && bits.is_prime(m - p)) ++result.ordered_count;
    result.contained = result.ordered_count > 0;
    return result;
}

// ------------------------------------------------------------------
// Deletion audit: the executable form of the elimination argument.
// Eliminating an even from the prime matrix would require deleting all
// ne/2 anti-diagonal cells of the full matrix, yet primes provably
// exist on both sides of the midpoint and Goldbach cells survive.
// ------------------------------------------------------------------
struct DeletionAudit {
    u64 ne = 0;
    u64 rows_required_for_elimination = 0;  // ne/2
    u64 interval_low_primes = 0;            // odd primes in the low interval
    u64 interval_high_primes = 0;           // odd primes in the high interval
    double mismatch_count_formula = 0.0;    // ne/2 - 2*ne/ln(ne), raw (may be < 0)
    u64 non_matching_pairs = 0;             // exact anti-diagonal cells without a prime pair
    u64 surviving_prime_pairs = 0;          // ordered Goldbach cells = 2*phi - [ne/2 prime]
    bool contradiction = false;             // surviving_prime_pairs >= 1
};

// Interval split depends on ne mod 4: the midpoint ne/2 is even for
// ne = 0 (mod 4) and odd for ne = 2 (mod 4), and the odd labels divide
// around it accordingly.
inline std::pair<std::pair<u64, u64>, std::pair<u64, u64>> audit_intervals(u64 ne) {
    if (ne % 4 == 0) return {{1, ne / 2 - 1}, {ne / 2 + 1, ne - 1}};
    return {{1, ne / 2}, {ne / 2 + 2, ne - 1}};
}

namespace detail {

inline u64 odd_prime_count(const PrimeBitset& bits, u64 lo, u64 hi) {
    u64 c = bits.count_range(lo, hi);
    if (lo <= 2 && hi >= 2) --c;  // labels are odd: 2 never counts
    return c;
}

inline DeletionAudit audit_with(const PrimeBitset& bits, u64 ne) {
    DeletionAudit audit;
    audit.ne = ne;
    audit.rows_required_for_elimination = ne / 2;
    const auto [low, high] = audit_intervals(ne);
    audit.interval_low_primes = odd_prime_count(bits, low.first, low.second);
    audit.interval_high_primes = odd_prime_count(bits, high.first, high.second);
    const double nd = static_cast<double>(ne);
    audit.mismatch_count_formula = nd / 2.0 - 2.0 * nd / std::log(nd);
    const u64 unordered = phi_with(bits, ne, false);
    audit.surviving_prime_pairs = 2 * unordered - (bits.is_prime(ne / 2) ? 1 : 0);
    audit.non_matching_pairs = ne / 2 - audit.surviving_prime_pairs;
    audit.contradiction = audit.surviving_prime_pairs >= 1;
    return audit;
}

}  // namespace detail

inline DeletionAudit deletion_audit(u64 ne) {
    if (ne < 6 || ne % 2 != 0)
        throw std::domain_error("deletion_audit: ne must be even and >= 6");
    PrimeBitset bits(ne);
    return detail::audit_with(bits, ne);
}

// Audits for every even ne in [lo, hi] against one shared sieve.
inline std::vector<DeletionAudit> audit_range(u64 lo, u64 hi, unsigned threads = 1) {
    if (lo < 6 || lo > hi || lo % 2 != 0 || hi % 2 != 0)
        throw std::domain_error("audit_range: need even 6 <= lo <= hi");
    const PrimeBitset bits(hi);
    const u64 n = (hi - lo) / 2 + 1;
    std::vector<DeletionAudit> audits(n);
    if (threads == 0) threads = 1;
    const unsigned workers = static_cast<unsigned>(std::min<u64>(threads, n));
    auto work = [&](u64 begin, u64 end) {
        for (u64 i = begin; i < end; ++i) audits[i] = detail::audit_with(bits, lo + 2 * i);
    };
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        for (auto& t : pool) t.join();
    }
    return audits;
}

// Aligned integer grid, one row per line, masked cells printed as 0.
inline void render_dense(const SumMatrix& matrix, std::ostream& out,
                         u64 dense_guard = kDefaultDenseGuard) {
    if (matrix.ne() > dense_guard) {
        std::ostringstream msg;
        msg << "render_dense: ne " << matrix.ne() << " exceeds dense guard " << dense_guard;
        throw ResourceError(msg.str());
    }
    const u64 max_entry = 2 * matrix.ne();
    int width = 1;
    for (u64 v = max_entry; v >= 10; v /= 10) ++width;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            if (j) out << ' ';
            out.width(width);
            out << matrix.entry(i, j);
        }
        out << '\n';
    }
}

}  // namespace gnetm
