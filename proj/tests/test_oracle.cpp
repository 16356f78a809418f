#include <catch2/catch_amalgamated.hpp>

#include "amin/oracle.hpp"
#include "fixtures.hpp"

using namespace amin;

TEST_CASE("oracle reliability on the hand-checked instances") {
    auto f = fixtures::canonical4();
    REQUIRE(brute_force_reliability(f.network, f.dist, f.network.targets()) ==
            15.0 / 32.0);

    auto n5 = fixtures::net5();
    REQUIRE(brute_force_reliability(n5.network, n5.dist,
                                    n5.network.targets()) == 3.0 / 32.0);

    auto sa = fixtures::single_arc();
    REQUIRE(brute_force_reliability(sa.network, sa.dist,
                                    sa.network.targets()) == 0.5);
}

TEST_CASE("oracle reliability on dense instances") {
    auto s5 = gen_semi_complete(5);
    double r5 = brute_force_reliability(s5.network, s5.dist,
                                        s5.network.targets());
    REQUIRE(r5 == 841.0 / 1024.0);
    REQUIRE_THAT(r5, Catch::Matchers::WithinAbs(0.821289, 1e-6));
}

TEST_CASE("oracle feasible counts") {
    auto f = fixtures::canonical4();
    REQUIRE(brute_force_feasible_count(f.network, f.network.targets()) == 11);
    auto n5 = fixtures::net5();
    REQUIRE(brute_force_feasible_count(n5.network, n5.network.targets()) == 3);
    auto s5 = gen_semi_complete(5);
    REQUIRE(brute_force_feasible_count(s5.network, s5.network.targets()) ==
            388);
    auto s6 = gen_semi_complete(6);
    REQUIRE(brute_force_feasible_count(s6.network, s6.network.targets()) ==
            11164);
}

TEST_CASE("oracle budget is enforced") {
    auto s5 = gen_semi_complete(5);
    // The choice space of the 5-node dense instance has 2^10 profiles.
    try {
        brute_force_reliability(s5.network, s5.dist, s5.network.targets(),
                                10);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        REQUIRE(e.required == 1024);
        REQUIRE(e.budget == 10);
    }
    REQUIRE_THROWS_AS(
        brute_force_feasible_count(s5.network, s5.network.targets(), 10),
        BudgetExceeded);
}

TEST_CASE("oracle degenerate requirements") {
    auto f = fixtures::canonical4();
    // No requirement: every profile counts, so the mass is 1.
    REQUIRE(brute_force_reliability(f.network, f.dist, NodeSubset{}) == 1.0);

    // A chain that transmits with certainty reaches its end with certainty.
    AminNetwork chain(3, {{1, 2}, {2, 3}}, {3});
    StateDistribution dist = StateDistribution::uniform(chain);
    dist.set_row(1, {0.0, 1.0});
    dist.set_row(2, {0.0, 1.0});
    REQUIRE(brute_force_reliability(chain, dist, chain.targets()) == 1.0);
}
