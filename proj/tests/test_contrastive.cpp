#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"

using namespace causalex;
using namespace testutil;

namespace {

EpistemicState ex2_k(const CausalModel& m) {
    EpistemicState k;
    for (const Context& u : enumerate_contexts(m)) {
        bool ul = u.at(m.var_index("U_L")) == 1;
        bool umd = u.at(m.var_index("U_MD")) == 1;
        bool ub = u.at(m.var_index("U_B")) == 1;
        if (ul && (!umd || ub)) k.push_back(u);
    }
    return make_epistemic(k);
}

FactFoil fire_vs_no_fire(const CausalModel& m) {
    return {ev(m, "FF"), ev(m, "!FF")};
}

}  // namespace

TEST_CASE("contrastive causes on example 1") {
    CausalModel m = ex1_model();
    Context u = ctx(m, {{"U_L", 1}, {"U_MD", 0}});
    FactFoil ff = fire_vs_no_fire(m);

    auto dec = is_contrastive_cause(m, u, pair(m, {{"L", 1, 0}}), ff, CauseKind::Actual);
    CHECK(dec.is_cause);
    REQUIRE(dec.witness.has_value());
    // replay: the fact component sits inside the fact-side cause, the foil
    // component inside the foil-side cause of the intervened model
    CHECK(pair(m, {{"L", 1, 0}}).fact().subset_of(dec.witness->fact_cause));
    CHECK(pair(m, {{"L", 1, 0}}).foil().subset_of(dec.witness->foil_cause));
    CHECK(!dec.witness->w.empty());

    // CC2: a foil true in the actual world disqualifies the pair
    FactFoil bad{ev(m, "FF"), ev(m, "FF")};
    CHECK(!is_contrastive_cause(m, u, pair(m, {{"L", 1, 0}}), bad, CauseKind::Actual).is_cause);

    // CC4 by construction: a pair with equal values is never a cause
    ContrastivePair eq{};
    eq.set(m.var_index("L"), 1, 1);
    CHECK(!is_contrastive_cause(m, u, eq, ff, CauseKind::Actual).is_cause);

    CHECK_THROWS_AS((void)is_contrastive_cause(m, u, ContrastivePair{}, ff, CauseKind::Actual),
                    QueryError);
}

TEST_CASE("example 5: Miller contrastive explanations") {
    CausalModel m = ex2_model();
    EpistemicState k = ex2_k(m);
    FactFoil ff = fire_vs_no_fire(m);

    auto got = enumerate_miller(m, k, ff);
    std::vector<ContrastivePair> expected{
        pair(m, {{"MD", 0, 1}}), pair(m, {{"MD", 1, 0}}),
        pair(m, {{"B", 0, 1}}), pair(m, {{"B", 1, 0}})};
    CHECK(same_pairs(got, expected));
}

TEST_CASE("example 5: modified HP contrastive explanations") {
    CausalModel m = ex2_model();
    EpistemicState k = ex2_k(m);
    FactFoil ff = fire_vs_no_fire(m);

    auto got = enumerate_modified_hp_contrastive(m, k, ff);
    std::vector<ContrastivePair> all, non_trivial;
    for (const auto& r : got) {
        all.push_back(r.pair);
        if (r.non_trivial) non_trivial.push_back(r.pair);
    }
    CHECK(same_pairs(all, {pair(m, {{"MD", 1, 0}}), pair(m, {{"L", 1, 0}}),
                           pair(m, {{"FF", 1, 0}})}));
    CHECK(same_pairs(non_trivial, {pair(m, {{"MD", 1, 0}})}));
}

TEST_CASE("example 5: Borner contrastive explanations") {
    CausalModel m = ex2_model();
    EpistemicState k = ex2_k(m);
    FactFoil ff = fire_vs_no_fire(m);

    auto got = enumerate_borner_contrastive(m, k, ff);
    std::vector<ContrastivePair> pot, act, pars;
    for (const auto& r : got) {
        if (r.potential) pot.push_back(r.pair);
        if (r.actual) act.push_back(r.pair);
        if (r.parsimonious) pars.push_back(r.pair);
    }
    CHECK(same_pairs(pot, {pair(m, {{"MD", 1, 0}}), pair(m, {{"B", 1, 0}})}));
    CHECK(same_pairs(pars, {pair(m, {{"MD", 1, 0}}), pair(m, {{"B", 1, 0}})}));
    CHECK(same_pairs(act, {pair(m, {{"L", 1, 0}}), pair(m, {{"FF", 1, 0}})}));
}

TEST_CASE("example 5: modular enumerations match the direct ones") {
    CausalModel m = ex2_model();
    EpistemicState k = ex2_k(m);
    FactFoil ff = fire_vs_no_fire(m);

    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::OriginalHp),
                     enumerate_miller(m, k, ff)));

    auto direct = enumerate_modified_hp_contrastive(m, k, ff);
    std::vector<ContrastivePair> all, nt;
    for (const auto& r : direct) {
        all.push_back(r.pair);
        if (r.non_trivial) nt.push_back(r.pair);
    }
    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::ModifiedHp), all));
    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::ModifiedHpNonTrivial), nt));

    auto borner = enumerate_borner_contrastive(m, k, ff);
    std::vector<ContrastivePair> pot, act, pars;
    for (const auto& r : borner) {
        if (r.potential) pot.push_back(r.pair);
        if (r.actual) act.push_back(r.pair);
        if (r.parsimonious) pars.push_back(r.pair);
    }
    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::BornerPotential), pot));
    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::BornerActual), act));
    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::BornerParsimonious), pars));

    CHECK(same_pairs(enumerate_modular(m, k, ff, ModularBase::BornerActual),
                     {pair(m, {{"L", 1, 0}}), pair(m, {{"FF", 1, 0}})}));
}

TEST_CASE("check_incompatibility") {
    CausalModel m2 = ex2_model();
    EpistemicState k2 = ex2_k(m2);
    CHECK(check_incompatibility(m2, k2, fire_vs_no_fire(m2)));
    CHECK(!check_incompatibility(m2, k2, FactFoil{ev(m2, "FF"), ev(m2, "FF")}));

    CausalModel m1 = ex1_model();
    EpistemicState k1 = make_epistemic(enumerate_contexts(m1));
    CHECK(!check_incompatibility(m1, k1, FactFoil{ev(m1, "FF"), ev(m1, "L & MD")}));
}

TEST_CASE("CE1 soundness and CC4 on Miller results") {
    CausalModel m = ex2_model();
    EpistemicState k = ex2_k(m);
    FactFoil ff = fire_vs_no_fire(m);
    for (const ContrastivePair& p : enumerate_miller(m, k, ff)) {
        CHECK(p.differs_everywhere());
        for (const Context& u : k) {
            World w = solve(m, u);
            CHECK(eval_event(*ff.fact, w));
            CHECK(!eval_event(*ff.foil, w));
        }
    }
}
