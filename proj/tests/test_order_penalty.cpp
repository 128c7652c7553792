#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "edcsel/order.hpp"
#include "edcsel/penalty.hpp"
#include "edcsel/selection.hpp"

using namespace edcsel;

TEST_CASE("lattice comparison") {
    CHECK(leq(OrderIndex{1, 2}, OrderIndex{2, 2}) == OrderRelation::less_equal);
    CHECK(leq(OrderIndex{2, 1}, OrderIndex{1, 2}) == OrderRelation::incomparable);
    CHECK(leq(OrderIndex{1, 1}, OrderIndex{1, 1}) == OrderRelation::equal);
    CHECK(leq(OrderIndex{2, 2}, OrderIndex{1, 2}) == OrderRelation::greater);
    CHECK_THROWS_AS(leq(OrderIndex{1}, OrderIndex{1, 2}), std::invalid_argument);
}

TEST_CASE("candidate enumeration is lexicographic") {
    const auto c = candidates_up_to(OrderIndex{1, 1});
    REQUIRE(c.size() == 4);
    CHECK(c[0] == OrderIndex{0, 0});
    CHECK(c[1] == OrderIndex{0, 1});
    CHECK(c[2] == OrderIndex{1, 0});
    CHECK(c[3] == OrderIndex{1, 1});

    CHECK(candidates_up_to(OrderIndex{0, 0}).size() == 1);
    CHECK(candidates_up_to(OrderIndex{2, 1}).size() == 6);
    CHECK_THROWS_AS(candidates_up_to(OrderIndex{-1}), std::invalid_argument);
}

TEST_CASE("edc score arithmetic") {
    // BIC penalty at n=100 with gamma=12
    const auto rule = PenaltyRule::bic();
    const double score = edc_score(-100.0, 100, 12, rule);
    CHECK(score == doctest::Approx(127.631).epsilon(1e-5));
    CHECK(rule(100) == doctest::Approx(std::log(100.0) / 2.0));

    // vanishing penalty leaves -logL
    const auto tiny = PenaltyRule::constant(1e-12);
    CHECK(edc_score(-100.0, 100, 12, tiny) == doctest::Approx(100.0));

    CHECK(edc_score(0.0, 100, 0, rule) == 0.0);
    CHECK_THROWS_AS(edc_score(0.0, 1, 0, rule), std::invalid_argument);
}

TEST_CASE("penalty consistency classification") {
    CHECK(PenaltyRule::bic().consistency_class() == ConsistencyClass::consistent);
    CHECK(PenaltyRule::constant(1.0).consistency_class() == ConsistencyClass::not_consistent);
    CHECK(PenaltyRule::aic().consistency_class() == ConsistencyClass::not_consistent);
    CHECK(PenaltyRule::power_log(1.0, 0.5, 0.0, 0.0).consistency_class() == ConsistencyClass::consistent); // sqrt(n)

    // boundary and edge cases of the rate conditions
    CHECK(classify_penalty(1.0, 0.0, 0.0, 1.0) == ConsistencyClass::not_consistent);  // exact loglog order
    CHECK(classify_penalty(1.0, 0.0, 0.0, 1.5) == ConsistencyClass::consistent);      // (loglog n)^1.5
    CHECK(classify_penalty(1.0, 1.0, 0.0, 0.0) == ConsistencyClass::not_consistent);  // c_n = n
    CHECK(classify_penalty(1.0, 1.0, -1.0, 0.0) == ConsistencyClass::consistent);     // n / log n
    CHECK(classify_penalty(1.0, 1.5, 0.0, 0.0) == ConsistencyClass::not_consistent);  // super-linear
    CHECK(classify_penalty(1.0, 0.0, -1.0, 0.0) == ConsistencyClass::not_consistent); // decaying
    CHECK_THROWS_AS(classify_penalty(-1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("penalty evaluator stays positive and parses") {
    const auto rules = {PenaltyRule::bic(), PenaltyRule::aic(), PenaltyRule::constant(0.25),
                        PenaltyRule::power_log(1.0, 0.25, -0.5, 2.0)};
    for (const auto& r : rules)
        for (long n : {2L, 3L, 10L, 100L, 100000L}) CHECK(r(n) > 0.0);

    CHECK(PenaltyRule::parse("bic").id() == "bic");
    CHECK(PenaltyRule::parse("const:1").alpha() == 1.0);
    const auto p = PenaltyRule::parse("powerlog:0.5:0:1:0");
    CHECK(p.delta() == 1.0);
    CHECK(p(100) == doctest::Approx(PenaltyRule::bic()(100)));
    CHECK_THROWS_AS(PenaltyRule::parse("nope"), std::invalid_argument);
}
