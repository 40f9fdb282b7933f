#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eh/combinatorics.hpp"
#include "eh/matching.hpp"
#include "helpers.hpp"

using namespace eh;

TEST_CASE("entropy of simple weightings") {
    test::K6WithUniform fix;
    CHECK(entropy_bits(fix.x) == doctest::Approx(2.0 * std::log2(10.0)).epsilon(1e-12));

    std::vector<double> point(fix.g.edge_count(), 0.0);
    point[0] = 1.0;
    CHECK(entropy_bits(FractionalMatching(fix.g, point)) == 0.0);

    CHECK(entropy_bits(FractionalMatching::constant(fix.g, 0.0)) == 0.0);
}

TEST_CASE("vertex sums and perfection") {
    test::K6WithUniform fix;
    for (int v = 0; v < 6; ++v)
        CHECK(fix.x.vertex_sum(v) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fix.x.is_perfect(1e-12));
    CHECK(fix.x.total_weight() == doctest::Approx(2.0));
}

TEST_CASE("subset weights") {
    test::K6WithUniform fix;
    std::vector<int> pair{0, 1};
    CHECK(subset_weight(fix.x, pair) == doctest::Approx(0.4));
    CHECK(subset_weight(fix.x, std::vector<int>{}) == doctest::Approx(2.0));
    std::vector<int> edge{0, 1, 2};
    CHECK(subset_weight(fix.x, edge) == doctest::Approx(0.1));
    std::vector<int> single{3};
    CHECK(subset_weight(fix.x, single) == doctest::Approx(1.0));
    std::vector<int> non_edge_pair{0, 5};
    CHECK(subset_weight(fix.x, non_edge_pair) == doctest::Approx(0.4));
}

TEST_CASE("normality certificates") {
    test::K6WithUniform fix;
    auto c4 = certify_normality(fix.x, 4.0);
    CHECK(c4.holds);
    CHECK(c4.b_star == doctest::Approx(3.6));  // 0.1 * 36

    auto c1 = certify_normality(fix.x, 1.0);
    CHECK_FALSE(c1.holds);
    CHECK(c1.b_star == doctest::Approx(3.6));

    std::vector<double> w(fix.g.edge_count(), 0.1);
    w[3] = 0.0;
    auto cz = certify_normality(FractionalMatching(fix.g, w), 1e9);
    CHECK_FALSE(cz.holds);
    CHECK(std::isinf(cz.b_star));
    CHECK(cz.witness_edge == 3);
}

TEST_CASE("identity suite on the uniform matching") {
    test::K6WithUniform fix;
    auto rep = verify_identities(fix.x, 3.6, fix.g.dirac_ratio());
    CHECK(rep.res_total_weight <= 1e-12);
    CHECK(rep.res_tuple_sum <= 1e-12);
    CHECK(rep.res_vertex_tuple <= 1e-12);
    CHECK(rep.res_entropy_identity <= 1e-12);
    CHECK(rep.tuple_weight_bounds_ok);
    CHECK(rep.transition_bounds_ok);
}

TEST_CASE("entropy identity holds for non-optimal perfect matchings") {
    // Mix the uniform matching with an integral perfect matching; vertex sums
    // stay 1 but the weighting is no longer entropy-optimal.
    Hypergraph g = test::k6_3();
    std::vector<double> w(g.edge_count(), 0.08);  // 0.8 * uniform
    auto m1 = g.find_edge(std::vector<int>{0, 1, 2});
    auto m2 = g.find_edge(std::vector<int>{3, 4, 5});
    REQUIRE(m1);
    REQUIRE(m2);
    w[static_cast<std::size_t>(*m1)] += 0.2;
    w[static_cast<std::size_t>(*m2)] += 0.2;
    FractionalMatching x(g, w);
    REQUIRE(x.is_perfect(1e-12));
    auto rep = verify_identities(x, certify_normality(x, 1.0).b_star, g.dirac_ratio());
    CHECK(rep.res_total_weight <= 1e-9);
    CHECK(rep.res_tuple_sum <= 1e-9);
    CHECK(rep.res_vertex_tuple <= 1e-9);
    CHECK(rep.res_entropy_identity <= 1e-9);
}

TEST_CASE("imperfect matchings report a residual without throwing") {
    Hypergraph g = test::k6_3();
    FractionalMatching x = FractionalMatching::constant(g, 0.2);
    auto rep = verify_identities(x, 10.0, g.dirac_ratio());
    CHECK(rep.res_total_weight > 0.1);
}

TEST_CASE("general-overlap identities on the uniform matching") {
    test::K6WithUniform fix;
    for (int ell = 0; ell <= 2; ++ell) {
        auto rep = verify_identities_ell(fix.x, ell, 3.6, fix.g.dirac_ratio());
        INFO("ell = ", ell);
        CHECK(rep.res_subset_sum <= 1e-12);
        CHECK(rep.res_vertex_subset <= 1e-12);
        CHECK(rep.res_entropy_identity <= 1e-11);
        CHECK(rep.subset_weight_bounds_ok);
        CHECK(rep.transition_bounds_ok);
    }
}

TEST_CASE("entropy sandwich values") {
    auto [lo, hi] = entropy_sandwich(6, 3, 2.0 / 3.0);
    CHECK(lo == doctest::Approx(2 * std::log2(15.0) + 2 * std::log2(2.0 / 3.0)).epsilon(1e-12));
    CHECK(lo == doctest::Approx(6.6439).epsilon(1e-4));
    CHECK(hi == doctest::Approx(4 * std::log2(6.0)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(10.3398).epsilon(1e-4));

    auto [lo1, hi1] = entropy_sandwich(6, 3, 1.0);
    CHECK(lo1 == doctest::Approx(2 * std::log2(15.0)));

    auto [lo2, hi2] = entropy_sandwich(4, 2, 1.0);
    CHECK(hi2 == doctest::Approx(4.0));
}

TEST_CASE("matching file round trip") {
    test::K6WithUniform fix;
    std::ostringstream os;
    write_matching_file(os, fix.x);
    std::istringstream is(os.str());
    FractionalMatching back = read_matching_file(is, fix.g);
    for (std::size_t e = 0; e < fix.g.edge_count(); ++e)
        CHECK(back.weight(e) == fix.x.weight(e));

    std::istringstream bad("0 1 2\n");
    CHECK_THROWS_AS(read_matching_file(bad, fix.g), ParseError);
    std::istringstream notedge("0 1 5 0.5\n");
    Hypergraph sparse = Hypergraph::build(6, 3, {{0, 1, 2}});
    CHECK_THROWS_AS(read_matching_file(notedge, sparse), ParseError);
}
