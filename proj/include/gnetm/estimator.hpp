#pragma once

// The random-selection estimate for how many residues must be probed
// before a prime match appears: r(theta, ne) = c(theta) * sqrt(ne) with
// c(theta) = sqrt(ln(1/(1-theta))).
//
// Rounding pipeline (load-bearing): the coefficient is rounded half-up
// to 3 decimals FIRST, and r is rounded half-up from the scaled value.
// Rounding the coefficient late changes large-ne cells, e.g.
// r(10^9, 0.2) becomes 14938 instead of 14926.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gnetm/partitions.hpp"
#include "gnetm/primes.hpp"

namespace gnetm {

namespace detail {
inline double round_half_up(double x) { return std::floor(x + 0.5); }
}

// sqrt(ln(1/(1-theta))) rounded half-up to 3 decimals.
inline double coefficient(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::domain_error("coefficient: theta must lie in (0, 1)");
    const double c = std::sqrt(std::log(1.0 / (1.0 - theta)));
    return detail::round_half_up(c * 1000.0) / 1000.0;
}

struct Estimate {
    u64 ne = 0;
    double theta = 0.0;
    double coefficient = 0.0;   // 3-decimal rounded
    double r_continuous = 0.0;  // coefficient * sqrt(ne)
    u64 r_rounded = 0;
};

inline Estimate estimate(u64 ne, double theta) {
    if (ne < 4 || ne % 2 != 0)
        throw std::domain_error("estimate: ne must be even and >= 4");
    Estimate est;
    est.ne = ne;
    est.theta = theta;
    est.coefficient = coefficient(theta);
    est.r_continuous = est.coefficient * std::sqrt(static_cast<double>(ne));
    est.r_rounded = static_cast<u64>(detail::round_half_up(est.r_continuous));
    return est;
}

// round-half-up(coefficient(theta) * sqrt(ne)).
inline u64 r_of_theta(u64 ne, double theta) { return estimate(ne, theta).r_rounded; }

// Probability that r distinct random draws out of n contain a match:
// 1 - exp(-r(r-1) / 2n). Strictly increasing in r; zero at r = 1.
inline double success_probability(u64 r, u64 n) {
    if (r < 1 || n < 1)
        throw std::domain_error("success_probability: r and n must be >= 1");
    const double rd = static_cast<double>(r);
    return 1.0 - std::exp(-(rd * (rd - 1.0)) / (2.0 * static_cast<double>(n)));
}

// Large-r limit of the same model, 1 - exp(-r^2 / 2n), defined for
// continuous r. This is the form the r(theta, ne) estimate inverts, so
// success_probability_asymptotic(sqrt(ne * ln(1/(1-theta))), ne/2)
// recovers theta exactly.
inline double success_probability_asymptotic(double r, double n) {
    if (!(r >= 0.0) || !(n > 0.0))
        throw std::domain_error("success_probability_asymptotic: need r >= 0 and n > 0");
    return 1.0 - std::exp(-(r * r) / (2.0 * n));
}

// Published reference counts for the eleven standard table rows.
inline const std::map<u64, u64>& published_real_values() {
    static const std::map<u64, u64> values = {
        {100, 6},           {2688, 88},         {6000, 178},
        {30000, 602},       {60000, 1084},      {100000, 810},
        {300000, 3915},     {560000, 3971},     {3000000, 27502},
        {60000000, 371226}, {1000000000, 2274205},
    };
    return values;
}

inline std::vector<u64> table1_default_rows() {
    return {100,    2688,   6000,    30000,    60000,     100000,
            300000, 560000, 3000000, 60000000, 1000000000};
}

inline std::vector<double> table1_default_thetas() { return {0.2, 0.5, 0.99}; }

struct Table1Row {
    u64 ne = 0;
    std::vector<u64> r_values;          // one per theta
    std::optional<u64> phi_computed;    // empty above phi_limit
    std::optional<u64> phi_published;   // empty off the published rows
    std::optional<bool> agree;          // set when both sides are present
};

// r cells for every (ne, theta), plus the computed partition count up to
// phi_limit and the agreement flag against the published column.
inline std::vector<Table1Row> table1(const std::vector<u64>& rows,
                                     const std::vector<double>& thetas,
                                     u64 phi_limit = 1'000'000) {
    std::vector<Table1Row> out;
    out.reserve(rows.size());
    u64 sieve_to = 0;
    for (u64 ne : rows)
        if (ne <= phi_limit) sieve_to = std::max(sieve_to, ne);
    std::optional<PrimeBitset> bits;
    if (sieve_to >= 4) bits.emplace(sieve_to);
    for (u64 ne : rows) {
        Table1Row row;
        row.ne = ne;
        for (double theta : thetas) row.r_values.push_back(r_of_theta(ne, theta));
        if (ne <= phi_limit && bits) row.phi_computed = detail::phi_with(*bits, ne, false);
        if (auto it = published_real_values().find(ne); it != published_real_values().end())
            row.phi_published = it->second;
        if (row.phi_computed && row.phi_published)
            row.agree = *row.phi_computed == *row.phi_published;
        out.push_back(std::move(row));
    }
    return out;
}

// CSV with header `ne,r_theta_<t>...,phi_computed,phi_paper,agree`;
// absent cells are left empty.
inline void write_table1_csv(const std::vector<Table1Row>& rows,
                             const std::vector<double>& thetas, std::ostream& out) {
    out << "ne";
    for (double theta : thetas) {
        std::ostringstream t;
        t << theta;  // 0.2 -> "0.2", 0.99 -> "0.99"
        out << ",r_theta_" << t.str();
    }
    out << ",phi_computed,phi_paper,agree\n";
    for (const auto& row : rows) {
        out << row.ne;
        for (u64 r : row.r_values) out << ',' << r;
        out << ',';
        if (row.phi_computed) out << *row.phi_computed;
        out << ',';
        if (row.phi_published) out << *row.phi_published;
        out << ',';
        if (row.agree) out << (*row.agree ? "true" : "false");
        out << '\n';
    }
}

}  // namespace gnetm
