#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnetm/cli.hpp"

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = gnetm::cli::dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("modm prints the paired congruence system line-for-line") {
    const auto result = run_cli({"modm", "34"});
    REQUIRE(result.code == 0);
    CHECK(result.out ==
          "34 = 31 (mod 3)\n"
          "34 = 29 (mod 5)\n"
          "34 = 27 (mod 7)\n"
          "34 = 23 (mod 11)\n"
          "34 = 21 (mod 13)\n"
          "34 = 17 (mod 17)\n"
          "34 = 15 (mod 19)\n"
          "34 = 11 (mod 23)\n"
          "34 = 5 (mod 29)\n"
          "34 = 3 (mod 31)\n");
}

TEST_CASE("partitions prints pairs and the count") {
    const auto result = run_cli({"partitions", "6"});
    REQUIRE(result.code == 0);
    CHECK(result.out == "6 = 3 + 3\nphi=1\n");

    SECTION("json payload carries ne, pairs and phi") {
        const auto json_result = run_cli({"partitions", "34", "--output", "json"});
        REQUIRE(json_result.code == 0);
        const auto payload = nlohmann::json::parse(json_result.out);
        CHECK(payload["ne"] == 34);
        CHECK(payload["phi"] == 4);
        REQUIRE(payload["pairs"].size() == 4);
        CHECK(payload["pairs"][0][0] == 3);
        CHECK(payload["pairs"][0][1] == 31);
    }

    SECTION("an even below 6 with no pairs is not a falsification") {
        const auto result4 = run_cli({"partitions", "4"});
        CHECK(result4.code == 0);
        CHECK(result4.out == "phi=0\n");
        const auto with_two = run_cli({"partitions", "4", "--allow-two"});
        CHECK(with_two.out == "4 = 2 + 2\nphi=1\n");
    }

    SECTION("domain errors exit 1") {
        const auto odd = run_cli({"partitions", "7"});
        CHECK(odd.code == 1);
        CHECK(odd.err.find("even") != std::string::npos);
    }
}

TEST_CASE("primes lists primes and honours its guard") {
    const auto result = run_cli({"primes", "10"});
    REQUIRE(result.code == 0);
    CHECK(result.out == "2\n3\n5\n7\n");

    const auto guarded = run_cli({"primes", "100000", "--sieve-guard", "1000"});
    CHECK(guarded.code == 3);
    CHECK(guarded.err.find("guard") != std::string::npos);

    const auto json_result = run_cli({"primes", "10", "--output", "json"});
    CHECK(nlohmann::json::parse(json_result.out) == nlohmann::json({2, 3, 5, 7}));
}

TEST_CASE("phi-scan emits the ne,phi csv") {
    const auto result = run_cli({"phi-scan", "4", "10"});
    REQUIRE(result.code == 0);
    CHECK(result.out == "ne,phi\n4,0\n6,1\n8,1\n10,2\n");

    SECTION("byte-identical across thread counts") {
        const auto one = run_cli({"phi-scan", "4", "2000", "--threads", "1"});
        const auto four = run_cli({"phi-scan", "4", "2000", "--threads", "4"});
        REQUIRE(one.code == 0);
        REQUIRE(four.code == 0);
        CHECK(one.out == four.out);
    }

    SECTION("GNETM_THREADS is the fallback worker count") {
        setenv("GNETM_THREADS", "3", 1);
        const auto from_env = run_cli({"phi-scan", "4", "2000"});
        unsetenv("GNETM_THREADS");
        const auto plain = run_cli({"phi-scan", "4", "2000"});
        REQUIRE(from_env.code == 0);
        CHECK(from_env.out == plain.out);
    }

    SECTION("scan guard exceeds exit 3") {
        const auto guarded = run_cli({"phi-scan", "4", "100000", "--scan-guard", "50"});
        CHECK(guarded.code == 3);
        CHECK(guarded.err.find("guard") != std::string::npos);
    }
}

TEST_CASE("crt solves coprime systems from modulus:residue arguments") {
    const auto result = run_cli({"crt", "3:2", "5:3", "7:2"});
    REQUIRE(result.code == 0);
    CHECK(result.out == "23\n");

    const auto bad = run_cli({"crt", "4:1", "6:2"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("coprime") != std::string::npos);

    const auto malformed = run_cli({"crt", "11"});
    CHECK(malformed.code == 1);
}

TEST_CASE("table1 reproduces the reference r columns") {
    const auto result = run_cli({"table1"});
    REQUIRE(result.code == 0);
    std::istringstream lines(result.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "ne,r_theta_0.2,r_theta_0.5,r_theta_0.99,phi_computed,phi_paper,agree");
    std::getline(lines, line);
    CHECK(line == "100,5,8,21,6,6,true");
    std::vector<std::string> rest;
    while (std::getline(lines, line)) rest.push_back(line);
    REQUIRE(rest.size() == 10);
    CHECK(rest.back() == "1000000000,14926,26342,67862,,2274205,");
}

TEST_CASE("matrix renders dense grids") {
    const auto result = run_cli({"matrix", "6", "--kind", "full"});
    REQUIRE(result.code == 0);
    CHECK(result.out == " 2  4  6\n 4  6  8\n 6  8 10\n");

    const auto masked = run_cli({"matrix", "6", "--kind", "max-antidiagonal"});
    CHECK(masked.out == " 0  0  6\n 0  6  0\n 6  0  0\n");

    const auto guarded = run_cli({"matrix", "40000", "--kind", "full"});
    CHECK(guarded.code == 3);

    const auto json_result = run_cli({"matrix", "6", "--kind", "prime", "--output", "json"});
    const auto payload = nlohmann::json::parse(json_result.out);
    CHECK(payload["labels"] == nlohmann::json({3, 5}));
    CHECK(payload["entries"][0][0] == 6);
}

TEST_CASE("audit emits one json object per even") {
    const auto result = run_cli({"audit", "20", "22"});
    REQUIRE(result.code == 0);
    std::istringstream lines(result.out);
    std::string line;
    REQUIRE(std::getline(lines, line));
    const auto first = nlohmann::json::parse(line);
    CHECK(first["ne"] == 20);
    CHECK(first["rows_required_for_elimination"] == 10);
    CHECK(first["interval_low_primes"] == 3);
    CHECK(first["interval_high_primes"] == 4);
    CHECK(first["surviving_prime_pairs"] == 4);
    CHECK(first["non_matching_pairs"] == 6);
    CHECK(first["contradiction"] == true);
    CHECK(first.contains("mismatch_count_formula"));
    REQUIRE(std::getline(lines, line));
    CHECK(nlohmann::json::parse(line)["ne"] == 22);
}

TEST_CASE("run-machine reports and exits by outcome") {
    const auto result = run_cli({"run-machine", "--start", "6", "--limit", "100"});
    REQUIRE(result.code == 0);
    const auto payload = nlohmann::json::parse(result.out);
    CHECK(payload["start"] == 6);
    CHECK(payload["limit"] == 100);
    CHECK(payload["controller"] == "basis2");
    CHECK(payload["cells"] == 48);
    CHECK(payload["failures"].empty());
    CHECK(payload["halted"] == false);
    CHECK(payload.contains("elapsed_ms"));

    SECTION("a genuine empty witness exits 2") {
        const auto halted = run_cli({"run-machine", "--start", "4", "--limit", "4"});
        CHECK(halted.code == 2);
        const auto halted_payload = nlohmann::json::parse(halted.out);
        CHECK(halted_payload["halted"] == true);
        CHECK(halted_payload["failures"] == nlohmann::json({4}));
    }

    SECTION("trace lines precede the report") {
        const auto traced =
            run_cli({"run-machine", "--start", "6", "--limit", "8", "--trace"});
        CHECK(traced.out.rfind("6\tT\t3+3\n8\tT\t3+5\n", 0) == 0);
    }

    SECTION("cross-check flag verifies controller agreement") {
        const auto checked = run_cli({"run-machine", "--start", "6", "--limit", "200",
                                      "--cross-check"});
        CHECK(checked.code == 0);
        CHECK(checked.out.find("\"cross_check\":true") != std::string::npos);
    }
}

TEST_CASE("usage errors exit 1 with help on stderr") {
    const auto unknown = run_cli({"frobnicate"});
    CHECK(unknown.code == 1);
    CHECK_FALSE(unknown.err.empty());

    const auto nothing = run_cli({});
    CHECK(nothing.code == 1);

    const auto help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("primes") != std::string::npos);
}

TEST_CASE("bench prints the task csv") {
    const auto result = run_cli({"bench", "--sieve-n", "100000", "--scan-n", "2000"});
    REQUIRE(result.code == 0);
    std::istringstream lines(result.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "task,n,elapsed_ms,throughput");
    std::getline(lines, line);
    CHECK(line.rfind("sieve,100000,", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("phi-scan,2000,", 0) == 0);
}
