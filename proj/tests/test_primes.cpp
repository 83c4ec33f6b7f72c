#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gnetm/primes.hpp"
#include "oracles.hpp"

using gnetm::u64;

TEST_CASE("sieve matches the trial-division oracle") {
    CHECK(gnetm::sieve(1).primes.empty());
    CHECK(gnetm::sieve(0).primes.empty());
    CHECK(gnetm::sieve(10).primes == std::vector<u64>{2, 3, 5, 7});
    CHECK(gnetm::sieve(34).primes ==
          std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31});

    for (u64 limit = 0; limit <= 500; ++limit)
        REQUIRE(gnetm::sieve(limit).primes == oracle::primes_upto(limit));

    const auto big = gnetm::sieve(100'000);
    REQUIRE(big.primes == oracle::primes_upto(100'000));
    CHECK(big.count() == 9592);
}

TEST_CASE("sieve guard rejects oversized limits") {
    CHECK_THROWS_MATCHES(gnetm::sieve(1'000'000, 1'000), gnetm::ResourceError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("guard 1000")));
}

TEST_CASE("sieve_segment returns exactly the primes in range") {
    const auto base10 = gnetm::sieve(10);
    const auto base4 = gnetm::sieve(4);
    CHECK(gnetm::sieve_segment(90, 100, base10) == std::vector<u64>{97});
    CHECK(gnetm::sieve_segment(0, 10, base4) == std::vector<u64>{2, 3, 5, 7});
    CHECK(gnetm::sieve_segment(14, 16, base4).empty());

    SECTION("base table must cover sqrt(hi)") {
        CHECK_THROWS_AS(gnetm::sieve_segment(0, 200, base10), std::domain_error);
        CHECK_THROWS_AS(gnetm::sieve_segment(10, 5, base10), std::domain_error);
    }

    SECTION("segments agree with slices of a direct sieve") {
        std::mt19937_64 rng(20240811);
        const u64 hi_max = 10'000'000;
        const auto direct = gnetm::sieve(hi_max);
        const auto base = gnetm::sieve(4'000);
        for (int i = 0; i < 40; ++i) {
            u64 lo = rng() % hi_max;
            u64 hi = std::min(lo + rng() % 2'000'000, hi_max);
            const auto segment = gnetm::sieve_segment(lo, hi, base);
            std::vector<u64> expected;
            const auto from = std::lower_bound(direct.primes.begin(), direct.primes.end(), lo);
            for (auto it = from; it != direct.primes.end() && *it <= hi; ++it)
                expected.push_back(*it);
            REQUIRE(segment == expected);
        }
    }

    SECTION("consecutive segments concatenate to a direct sieve") {
        const auto base = gnetm::sieve(400);
        std::vector<u64> stitched;
        for (u64 lo = 0; lo < 120'000; lo += 7'919) {
            const u64 hi = std::min<u64>(lo + 7'918, 119'999);
            const auto part = gnetm::sieve_segment(lo, hi, base);
            stitched.insert(stitched.end(), part.begin(), part.end());
        }
        REQUIRE(stitched == gnetm::sieve(119'999).primes);
    }
}

TEST_CASE("is_prime is the unit-aware primality predicate") {
    CHECK_FALSE(gnetm::is_prime(0));
    CHECK_FALSE(gnetm::is_prime(1));
    CHECK(gnetm::is_prime(2));
    CHECK(gnetm::is_prime(31));
    CHECK_FALSE(gnetm::is_prime(27));
    for (u64 n = 0; n <= 5'000; ++n)
        REQUIRE(gnetm::is_prime(n) == oracle::is_prime(n));
}

TEST_CASE("nth_prime with the zeroth prime pinned to 0") {
    CHECK(gnetm::nth_prime(0) == 0);
    CHECK(gnetm::nth_prime(1) == 2);
    CHECK(gnetm::nth_prime(11) == 31);
    const auto primes = oracle::primes_upto(10'000);
    for (u64 n = 1; n <= 500; ++n)
        REQUIRE(gnetm::nth_prime(n) == primes[n - 1]);
}

TEST_CASE("prime_count is exact and pi_approx is x/ln x") {
    CHECK(gnetm::prime_count(0) == 0);
    CHECK(gnetm::prime_count(2) == 1);
    CHECK(gnetm::prime_count(100) == 25);
    CHECK(gnetm::prime_count(1'000'000) == 78'498);
    for (u64 x : {3ull, 57ull, 1024ull, 99'991ull})
        REQUIRE(gnetm::prime_count(x) == gnetm::sieve(x).count());

    CHECK_THAT(gnetm::pi_approx(100),
               Catch::Matchers::WithinAbs(21.71472409516259, 1e-9));
    CHECK_THROWS_AS(gnetm::pi_approx(1), std::domain_error);
    CHECK_THROWS_AS(gnetm::pi_approx(0), std::domain_error);

    SECTION("relative approximation error shrinks by decade") {
        double previous = 1.0;
        for (u64 x : {1'000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
            const double exact = static_cast<double>(gnetm::prime_count(x));
            const double rel = std::abs(exact - gnetm::pi_approx(x)) / exact;
            REQUIRE(rel < previous);
            previous = rel;
        }
    }
}

TEST_CASE("interval_prime_count splits pi at the midpoint") {
    CHECK(gnetm::interval_prime_count(20) == std::pair<u64, u64>{4, 4});
    CHECK(gnetm::interval_prime_count(6) == std::pair<u64, u64>{2, 1});
    CHECK(gnetm::interval_prime_count(100) == std::pair<u64, u64>{15, 10});
    CHECK_THROWS_AS(gnetm::interval_prime_count(7), std::domain_error);
    CHECK_THROWS_AS(gnetm::interval_prime_count(4), std::domain_error);

    for (u64 ne = 6; ne <= 10'000; ne += 2) {
        const auto [low, high] = gnetm::interval_prime_count(ne);
        REQUIRE(low >= 1);
        REQUIRE(high >= 1);
        REQUIRE(low + high == gnetm::prime_count(ne));
    }
}
