// Property suite over seeded random models: solve fixed points, intervention
// laws, cause soundness and minimality, witness replay, and contrastive set
// sanity. Counts are sized to keep the whole binary comfortably under the
// acceptance budget.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"

#include "causalex/random_models.hpp"

using namespace causalex;
using namespace testutil;

namespace {

RandomModelParams params(std::uint64_t seed) {
    RandomModelParams p;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_CASE("solve satisfies every structural equation (500 models)") {
    for (std::uint64_t t = 0; t < 500; ++t) {
        RandomInstance inst = random_instance(params(101), t);
        const CausalModel& m = inst.doc.model;
        REQUIRE(m.valid());
        for (const Context& u : enumerate_contexts(m)) {
            World w = solve(m, u);
            for (int i : m.endo_indices()) {
                Value v = eval_expr(*m.equation(i), m, w);
                CHECK(m.var(i).domain[w.idx[static_cast<std::size_t>(i)]] == v);
            }
            for (int i : m.exo_indices())
                CHECK(w.idx[static_cast<std::size_t>(i)] == u.at(i));
        }
    }
}

TEST_CASE("intervention laws (500 models)") {
    for (std::uint64_t t = 0; t < 500; ++t) {
        RandomInstance inst = random_instance(params(202), t);
        const CausalModel& m = inst.doc.model;
        std::mt19937_64 rng(t);
        const auto& endo = m.endo_indices();
        int a = endo[rng() % endo.size()];
        int b = endo[rng() % endo.size()];
        PartialSetting iva{}, ivb{};
        iva.set(a, static_cast<std::uint8_t>(rng() % m.var(a).domain.size()));
        ivb.set(b, static_cast<std::uint8_t>(rng() % m.var(b).domain.size()));

        CausalModel ma = intervene(m, iva);
        REQUIRE(ma.valid());
        CHECK(intervene(ma, iva) == ma);  // idempotent
        if (a != b)                       // order-insensitive when disjoint
            CHECK(intervene(ma, ivb) == intervene(intervene(m, ivb), iva));

        for (const Context& u : enumerate_contexts(m)) {
            World w = solve(ma, u);
            CHECK(w.idx[static_cast<std::size_t>(a)] == iva.at(a));  // forced value
            // overlay solving agrees with model surgery
            World w2 = solve_with(m, iva, u);
            CHECK(w.idx == w2.idx);
            // holds with the empty intervention is plain entailment
            CHECK(holds(m, u, PartialSetting{}, *inst.fact) ==
                  eval_event(*inst.fact, solve(m, u)));
        }
    }
}

TEST_CASE("cause enumeration agrees with the reference oracle (120 models)") {
    for (std::uint64_t t = 0; t < 120; ++t) {
        RandomInstance inst = random_instance(params(303), t);
        const CausalModel& m = inst.doc.model;
        CauseEngine eng(m);
        for (const Context& u : inst.k) {
            CHECK(same_settings(eng.causes(PartialSetting{}, u, inst.fact, CauseKind::Actual),
                                oracle::causes(m, u, *inst.fact, false, false)));
            CHECK(same_settings(eng.causes(PartialSetting{}, u, inst.fact, CauseKind::WeakActual),
                                oracle::causes(m, u, *inst.fact, true, false)));
            CHECK(same_settings(eng.causes(PartialSetting{}, u, inst.fact, CauseKind::Sufficient),
                                oracle::causes(m, u, *inst.fact, false, true)));
        }
    }
}

TEST_CASE("cause soundness, minimality, witness replay (250 models)") {
    for (std::uint64_t t = 0; t < 250; ++t) {
        RandomInstance inst = random_instance(params(404), t);
        const CausalModel& m = inst.doc.model;
        CauseEngine eng(m);
        for (const Context& u : inst.k) {
            World actual = solve(m, u);
            bool ev_holds = eval_event(*inst.fact, actual);
            auto actual_causes = eng.causes(PartialSetting{}, u, inst.fact, CauseKind::Actual);
            for (const PartialSetting& c : actual_causes) {
                CHECK(ev_holds);
                CHECK(c.holds_in(actual));  // AC1
                // every actual cause is weak
                CHECK(eng.is_cause(PartialSetting{}, u, c, inst.fact, CauseKind::WeakActual));
                // AC3: no proper non-empty sub-conjunction is weak
                for (std::uint16_t sub = (c.mask - 1) & c.mask; sub; sub = (sub - 1) & c.mask) {
                    PartialSetting part{};
                    for (std::uint16_t r = sub; r;) {
                        int i = std::countr_zero(r);
                        r &= std::uint16_t(r - 1);
                        part.set(i, c.at(i));
                    }
                    CHECK(!eng.is_cause(PartialSetting{}, u, part, inst.fact,
                                        CauseKind::WeakActual));
                }
                // witness replay
                CauseWitness w;
                REQUIRE(eng.is_cause(PartialSetting{}, u, c, inst.fact, CauseKind::Actual, &w));
                CHECK(!eval_event(*inst.fact,
                                  solve_with(m, merge_override(w.contingency, w.flip), u)));
            }
            // SC3 universality and SC4 antichain
            auto sufficient = eng.causes(PartialSetting{}, u, inst.fact, CauseKind::Sufficient);
            for (const PartialSetting& c : sufficient) {
                for (const Context& up : enumerate_contexts(m))
                    CHECK(eval_event(*inst.fact, solve_with(m, c, up)));
                for (const PartialSetting& other : sufficient)
                    if (!(other == c)) CHECK(!other.subset_of(c));
            }
        }
    }
}

TEST_CASE("singleton-domain variables never appear in causes") {
    // Y has a singleton domain; flipping it is impossible.
    std::vector<Variable> vars{exo("U"), endo("X"), {"Y", VarKind::Endogenous, {Value{std::int64_t{7}}}}};
    // sorted: U=0, X=1, Y=2
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    eqs.emplace_back("X", Expr::make_var(0));
    eqs.emplace_back("Y", Expr::make_lit(Value{std::int64_t{7}}));
    CausalModel m = CausalModel::make(vars, std::move(eqs));
    REQUIRE(m.valid());
    Context u{};
    u.set(0, 1);
    EventPtr x_on = Event::prim(1, 1);
    PartialSetting just_y{};
    just_y.set(2, 0);
    CHECK(!is_cause(m, u, just_y, x_on, CauseKind::WeakActual).is_cause);
    for (CauseKind kind : {CauseKind::Actual, CauseKind::Sufficient})
        for (const PartialSetting& c : enumerate_causes(m, u, x_on, kind))
            CHECK(!c.has(2));
}

TEST_CASE("contrastive invariants on random models (60 models)") {
    for (std::uint64_t t = 0; t < 60; ++t) {
        RandomInstance inst = random_instance(params(505), t);
        const CausalModel& m = inst.doc.model;
        FactFoil ff{inst.fact, Event::negate(inst.fact)};
        CauseEngine ce(m);
        ContrastiveEngine eng(ce, inst.k, ff);

        auto miller = eng.miller();
        for (const ContrastivePair& p : miller) {
            CHECK(p.differs_everywhere());  // CC4 everywhere
            for (const Context& u : inst.k) {
                World w = solve(m, u);
                CHECK(eval_event(*ff.fact, w));  // CE1 soundness
                CHECK(!eval_event(*ff.foil, w));
            }
        }
        // CE3: results form an antichain
        for (const ContrastivePair& p : miller)
            for (const ContrastivePair& q : miller)
                if (!(p == q)) CHECK(!q.extends(p));

        // witness replay: both components sit inside containing conjunctions
        // whose clause sets re-verify against the cause engine
        for (const ContrastivePair& p : miller) {
            auto w = eng.candidate_witness(ContainerFamily::Original, p);
            REQUIRE(w.has_value());
            CHECK(p.fact().subset_of(w->fact_container));
            CHECK(p.foil().subset_of(w->foil_container));
            CHECK(!w->w.empty());
            // EX2 replay for the containers: weak wherever they occur
            for (const Context& u : inst.k) {
                if (w->fact_container.holds_in(ce.world(PartialSetting{}, u)))
                    CHECK(ce.is_cause(PartialSetting{}, u, w->fact_container, ff.fact,
                                      CauseKind::WeakActual));
                if (w->foil_container.holds_in(ce.world(w->w, u)))
                    CHECK(ce.is_cause(w->w, u, w->foil_container, ff.foil,
                                      CauseKind::WeakActual));
            }
        }

        // CH2 / CB6 antichains
        auto ch = eng.modified_hp_contrastive();
        for (const auto& a : ch)
            for (const auto& b : ch)
                if (!(a.pair == b.pair)) CHECK(!b.pair.extends(a.pair));
        auto cb = eng.borner_contrastive();
        for (const auto& a : cb)
            if (a.parsimonious)
                for (const auto& b : cb)
                    if (b.parsimonious && !(a.pair == b.pair)) CHECK(!b.pair.extends(a.pair));
    }
}
