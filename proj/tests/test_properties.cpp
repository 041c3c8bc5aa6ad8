#include "properties.hpp"

#include <catch_amalgamated.hpp>

using namespace testing;

namespace {

void require(const CheckResult & r, std::size_t at_least)
{
    INFO(r.detail);
    CHECK(r.passed);
    CHECK(r.instances >= at_least);
}

}

TEST_CASE("generators agree with the oracles", "[property]")
{
    require(check_generators_match_oracles(1001, 200), 200);
}

TEST_CASE("inclusion closure equals gac", "[property]")
{
    require(check_inclusion_equals_gac(1002, 200), 200);
}

TEST_CASE("membership closure equals gac on two-valued columns", "[property]")
{
    require(check_binary_rules_equal_gac(1003, 200), 200);
}

TEST_CASE("gac stores are rule consistent", "[property]")
{
    auto r = check_arc_implies_rule(1004, 200);
    require(r, 200);
    CHECK_THAT(r.detail, Catch::Matchers::ContainsSubstring("witness holds"));
}

TEST_CASE("search agrees with brute force in every mode", "[property]")
{
    require(check_search_matches_brute_force(1005, 100), 100);
    require(check_sample_node_order(), 5);
}

TEST_CASE("fixpoints do not depend on worklist order", "[property]")
{
    require(check_order_independence(1006, 60, 5), 60);
}

TEST_CASE("minimal rules propagate as much as padded rule sets", "[property]")
{
    require(check_minimal_rules_suffice(1007, 100), 100);
}

TEST_CASE("rule sets are sound", "[property]")
{
    // no propagation mode removes a value that occurs in a solution
    std::mt19937_64 rng(1008);
    for (int i = 0; i < 100; ++i) {
        auto p = random_problem(rng, 4, 3, 3);
        auto solutions = brute_force_solutions(p);
        for (auto mode : { Mode::membership, Mode::inclusion, Mode::gac }) {
            auto s = fixpoint(p, PropagatorSet::build(p, mode));
            if (solutions.empty())
                continue;
            REQUIRE_FALSE(s.inconsistent());
            for (const auto & sol : solutions)
                for (std::size_t v = 0; v < p.num_variables(); ++v)
                    REQUIRE(s.contains(v, *p.variable(v).domain.find(sol.values[v])));
        }
    }
}
