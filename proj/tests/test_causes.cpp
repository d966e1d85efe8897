#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace causalex;
using namespace testutil;

// The expected sets below were computed with the reference implementations in
// oracle.hpp (direct transcriptions of AC1-AC3 / SC1-SC4 over sem-core) and
// frozen; each test asserts the engine against both the frozen set and the
// oracle.

TEST_CASE("actual causes, example 1, both on") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 1}});
    EventPtr fire = ev(m, "FF");

    CHECK(!is_cause(m, u, setting(m, {{"L", 1}}), fire, CauseKind::Actual).is_cause);

    std::vector<PartialSetting> frozen{setting(m, {{"FF", 1}}),
                                       setting(m, {{"L", 1}, {"MD", 1}})};
    auto got = enumerate_causes(m, u, fire, CauseKind::Actual);
    CHECK(same_settings(got, frozen));
    CHECK(same_settings(oracle::causes(m, u, *fire, false, false), frozen));
}

TEST_CASE("actual causes, example 1, lightning only") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 0}});
    EventPtr fire = ev(m, "FF");

    auto dec = is_cause(m, u, setting(m, {{"L", 1}}), fire, CauseKind::Actual);
    CHECK(dec.is_cause);
    REQUIRE(dec.witness.has_value());
    CHECK(dec.witness->contingency.empty());
    CHECK(dec.witness->flip == setting(m, {{"L", 0}}));

    std::vector<PartialSetting> frozen{setting(m, {{"FF", 1}}), setting(m, {{"L", 1}})};
    CHECK(same_settings(enumerate_causes(m, u, fire, CauseKind::Actual), frozen));
    CHECK(same_settings(oracle::causes(m, u, *fire, false, false), frozen));
}

TEST_CASE("weak actual causes drop minimality") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 1}});
    EventPtr fire = ev(m, "FF");

    auto weak = enumerate_causes(m, u, fire, CauseKind::WeakActual);
    CHECK(same_settings(weak, oracle::causes(m, u, *fire, true, false)));

    // every actual cause is weak; the superset L ^ MD ^ FF is weak but not actual
    for (const PartialSetting& c : enumerate_causes(m, u, fire, CauseKind::Actual))
        CHECK(std::find(weak.begin(), weak.end(), c) != weak.end());
    PartialSetting big = setting(m, {{"L", 1}, {"MD", 1}, {"FF", 1}});
    CHECK(std::find(weak.begin(), weak.end(), big) != weak.end());
    CHECK(!is_cause(m, u, big, fire, CauseKind::Actual).is_cause);
}

TEST_CASE("sufficient causes, example 2") {
    CausalModel m = ex2_model();
    EventPtr fire = ev(m, "FF");

    // [L<-1]FF holds in all 8 contexts, so L = 1 is sufficient wherever it occurs
    for (const Context& u : enumerate_contexts(m)) {
        World w = solve(m, u);
        if (w.idx[static_cast<std::size_t>(m.var_index("L"))] != 1) continue;
        auto dec = is_cause(m, u, setting(m, {{"L", 1}}), fire, CauseKind::Sufficient);
        CHECK(dec.is_cause);
        REQUIRE(dec.witness.has_value());
        CHECK(dec.witness->contexts_checked == 8);
    }

    Context u111 = ctx(m, {{"U_L", 1}, {"U_MD", 1}, {"U_B", 1}});
    CHECK(!is_cause(m, u111, setting(m, {{"MD", 1}}), fire, CauseKind::Sufficient).is_cause);

    std::vector<PartialSetting> frozen{setting(m, {{"FF", 1}}), setting(m, {{"L", 1}}),
                                       setting(m, {{"B", 1}, {"MD", 1}})};
    CHECK(same_settings(enumerate_causes(m, u111, fire, CauseKind::Sufficient), frozen));
    CHECK(same_settings(oracle::causes(m, u111, *fire, false, true), frozen));
}

TEST_CASE("is_part_of_cause") {
    CausalModel m1 = ex1_model();
    EventPtr fire1 = ev(m1, "FF");
    Context u11 = ctx(m1, {{"U_L", 1}, {"U_MD", 1}});
    CHECK(is_part_of_cause(m1, u11, m1.var_index("L"), 1, fire1, CauseKind::Actual));
    CHECK(!is_part_of_cause(m1, u11, m1.var_index("L"), 0, fire1, CauseKind::Actual));

    CausalModel m2 = ex2_model();
    EventPtr fire2 = ev(m2, "FF");
    Context u111 = ctx(m2, {{"U_L", 1}, {"U_MD", 1}, {"U_B", 1}});
    CHECK(is_part_of_cause(m2, u111, m2.var_index("B"), 1, fire2, CauseKind::Sufficient));
}

TEST_CASE("errors: empty candidate and invalid model") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 0}});
    CHECK_THROWS_AS((void)is_cause(m, u, PartialSetting{}, ev(m, "FF"), CauseKind::Actual),
                    QueryError);
}

TEST_CASE("witness replay for actual causes") {
    CausalModel m = ex2_model();
    EventPtr fire = ev(m, "FF");
    for (const Context& u : enumerate_contexts(m)) {
        if (!eval_event(*fire, solve(m, u))) continue;
        for (const PartialSetting& c : enumerate_causes(m, u, fire, CauseKind::Actual)) {
            CauseWitness w;
            CauseEngine eng(m);
            REQUIRE(eng.is_cause(PartialSetting{}, u, c, fire, CauseKind::Actual, &w));
            // re-run the stored witness: [X <- flip, W <- w] defeats the event
            PartialSetting total = merge_override(w.contingency, w.flip);
            CHECK(!eval_event(*fire, solve_with(m, total, u)));
            // and W really holds at its actual values
            CHECK(w.contingency.holds_in(solve(m, u)));
        }
    }
}

TEST_CASE("soft cap on endogenous count") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 0}});
    Limits tight;
    tight.max_endogenous = 2;
    CHECK_THROWS_AS((void)enumerate_causes(m, u, ev(m, "FF"), CauseKind::Actual, tight),
                    QueryError);
    tight.enforce = false;
    CHECK_NOTHROW((void)enumerate_causes(m, u, ev(m, "FF"), CauseKind::Actual, tight));
}
