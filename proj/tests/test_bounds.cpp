#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "eh/bounds.hpp"
#include "eh/combinatorics.hpp"
#include "eh/exact_count.hpp"
#include "eh/report.hpp"
#include "eh/solver.hpp"
#include "helpers.hpp"

using namespace eh;

TEST_CASE("theorem bounds on K6^(3)") {
    double h = 2.0 * std::log2(10.0);
    BoundReport r = theorem_bounds(6, 3, 2, 2.0 / 3.0, h);
    double expect_t16 = 3 * h - 6 * std::log2(15.0) + 6 * std::log2(6.0) - 6 * kLog2E;
    CHECK(r.bound_t16 == doctest::Approx(expect_t16).epsilon(1e-12));
    CHECK(r.bound_t16 == doctest::Approx(3.3438).epsilon(1e-3));

    double exact = std::log2(60.0);
    CHECK(exact - r.bound_t16 == doctest::Approx(2.563).epsilon(1e-3));

    // t17 exceeds the exact count at this scale; reported, never asserted.
    CHECK(r.bound_t17 == doctest::Approx(6 * std::log2(2.0 / 3.0) + log2_factorial(6)));
    CHECK(r.bound_t17 > exact);

    // hbar matches its definition.
    CHECK(r.hbar == doctest::Approx(h - 2 * std::log2(15.0) + 2 * std::log2(6.0)));
}

TEST_CASE("theorem bounds on K6 graph (k=2)") {
    double h = 3.0 * std::log2(5.0);
    BoundReport r = theorem_bounds(6, 2, 1, 5.0 / 6.0, h);
    CHECK(r.bound_t16 == doctest::Approx(2 * h - 6 * kLog2E).epsilon(1e-12));
    CHECK(r.bound_t16 == doctest::Approx(5.2754).epsilon(1e-3));
    CHECK(r.bound_t16 <= std::log2(60.0));
}

TEST_CASE("delta = 1 collapses t17 to log2 n!") {
    BoundReport r = theorem_bounds(8, 3, 2, 1.0, 10.0);
    CHECK(r.bound_t17 == doctest::Approx(log2_factorial(8)).epsilon(1e-12));
}

TEST_CASE("t18 specializes to t16 at ell = k-1") {
    for (int n : {6, 8, 9, 12}) {
        for (int k : {2, 3}) {
            double h = 0.37 * n * std::log2(static_cast<double>(n));
            BoundReport r = theorem_bounds(n, k, k - 1, 0.6, h);
            CHECK(r.bound_t18 == doctest::Approx(r.bound_t16).epsilon(1e-10));
            CHECK(r.hbar_ell == doctest::Approx(r.hbar).epsilon(1e-10));
        }
    }
}

TEST_CASE("divisibility is enforced") {
    CHECK_THROWS_AS(theorem_bounds(5, 3, 1, 0.6, 4.0), DivisibilityViolated);
}

TEST_CASE("t16 with the sandwich floor reproduces t17 up to Stirling error") {
    for (int n : {6, 9, 12, 20, 40}) {
        int k = 3;
        double delta = 0.62;
        double h_lower = entropy_sandwich(n, k, delta).first;
        BoundReport r = theorem_bounds(n, k, k - 1, delta, h_lower);
        double diff = r.bound_t16 - r.bound_t17;
        CHECK(std::abs(diff) <= std::log2(static_cast<double>(n)) + 2.0);
    }
}

TEST_CASE("sweep over complete 3-graphs") {
    std::vector<Hypergraph> graphs;
    for (int n = 5; n <= 9; ++n) graphs.push_back(complete_hypergraph(n, 3));
    std::vector<std::pair<std::string, const Hypergraph*>> inst;
    for (std::size_t i = 0; i < graphs.size(); ++i)
        inst.emplace_back("K" + std::to_string(i + 5), &graphs[i]);

    SweepOptions so;
    so.exact_max_n = 9;
    auto rows = sweep(inst, so);
    REQUIRE(rows.size() == 5);
    for (const auto& row : rows) {
        REQUIRE(row.report.has_value());
        REQUIRE(row.report->exact_log2.has_value());
        REQUIRE(row.report->gap.has_value());
        CHECK(*row.report->gap > 0.0);
    }

    // Guard: exact counts are skipped above the cap.
    Hypergraph k15 = complete_hypergraph(15, 3);
    std::vector<std::pair<std::string, const Hypergraph*>> inst2{{"K15", &k15}};
    SweepOptions so2;
    so2.exact_max_n = 10;
    auto rows2 = sweep(inst2, so2);
    REQUIRE(rows2[0].report.has_value());
    CHECK_FALSE(rows2[0].report->exact_log2.has_value());

    // Empty input, empty table.
    auto rows3 = sweep({}, so);
    CHECK(rows3.empty());

    // Errors are captured per row.
    Hypergraph iso = Hypergraph::build(6, 3, {{0, 1, 2}});
    std::vector<std::pair<std::string, const Hypergraph*>> inst4{{"bad", &iso}};
    auto rows4 = sweep(inst4, so);
    REQUIRE(rows4.size() == 1);
    CHECK_FALSE(rows4[0].report.has_value());
    CHECK(!rows4[0].error.empty());
}

TEST_CASE("CSV and JSON emission round-trips numbers") {
    Hypergraph k6 = test::k6_3();
    std::vector<std::pair<std::string, const Hypergraph*>> inst{{"k6", &k6}};
    SweepOptions so;
    so.exact_max_n = 9;
    auto rows = sweep(inst, so);

    std::string csv = bound_rows_csv(rows);
    CHECK(csv.find("n,k,ell,delta,h_bits,bound_t16") == 0);
    CHECK(csv.find("6,3,2,") != std::string::npos);

    std::string js = bound_rows_json(rows);
    auto parsed = nlohmann::json::parse(js);
    CHECK(parsed["schema_version"] == 1);
    REQUIRE(parsed["rows"].size() == 1);
    double h_back = parsed["rows"][0]["h_bits"].get<double>();
    CHECK(h_back == rows[0].report->h_bits);  // exact 17-digit round trip
    double t16_back = parsed["rows"][0]["bound_t16"].get<double>();
    CHECK(t16_back == rows[0].report->bound_t16);

    // Empty rows still produce a valid header-only CSV.
    std::string empty_csv = bound_rows_csv({});
    CHECK(empty_csv.find("n,k,ell,") == 0);
    CHECK(std::count(empty_csv.begin(), empty_csv.end(), '\n') == 1);

    // Failed rows turn into trailing comment lines, not data rows.
    SweepRow bad;
    bad.instance = "broken";
    bad.error = "solver blew up";
    std::vector<SweepRow> mixed{rows[0], bad};
    std::string mixed_csv = bound_rows_csv(mixed);
    CHECK(mixed_csv.find("# broken: solver blew up") != std::string::npos);
}

TEST_CASE("manifest helpers") {
    RunManifest m;
    m.command_line = "eh solve --input x.edges";
    m.seed = 3;
    m.threads = 2;
    m.config_digest = fnv1a_hex(m.command_line);
    m.created_utc = utc_timestamp();
    m.tool_version = "test";
    auto parsed = nlohmann::json::parse(m.to_json());
    CHECK(parsed["seed"] == 3);
    CHECK(parsed["config_digest"] == fnv1a_hex("eh solve --input x.edges"));
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
}
