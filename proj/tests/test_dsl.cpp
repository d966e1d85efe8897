#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "helpers.hpp"

using namespace causalex;
using namespace testutil;

TEST_CASE("parse example 1 corpus file") {
    ModelDocument doc = load_corpus_model("ex1_disjunctive_forest_fire.scm-model");
    CHECK(doc.model.valid());
    CHECK(doc.model.exo_indices().size() == 2);
    CHECK(doc.model.endo_indices().size() == 3);
    CHECK(enumerate_contexts(doc.model).size() == 4);
    CHECK(resolve_epistemic(doc, "K").size() == 4);
    REQUIRE(doc.events.count("fire"));
}

TEST_CASE("cyclic source yields positioned diagnostics for both equations") {
    std::string src =
        "version 1\n"
        "exogenous U : bool\n"
        "endogenous A : bool = B\n"
        "endogenous B : bool = A\n";
    ParseResult res = parse_model(src);
    CHECK(!res.ok());
    int spans = 0;
    for (const Diagnostic& d : res.diagnostics) {
        CHECK(d.message.find("cyclic") != std::string::npos);
        if (d.line == 3 || d.line == 4) ++spans;
    }
    CHECK(spans == 2);
}

TEST_CASE("every failure carries a position") {
    for (const char* bad : {"endogenous : bool = 1", "exogenous U bool", "version 2",
                            "endogenous A : bool = |", "event e : "}) {
        ParseResult res = parse_model(bad);
        CHECK(!res.ok());
        REQUIRE(!res.diagnostics.empty());
        CHECK(res.diagnostics.front().line >= 1);
        CHECK(res.diagnostics.front().col >= 1);
    }
}

TEST_CASE("example 2 epistemic constraint selects three contexts") {
    ModelDocument doc = load_corpus_model("ex2_overdetermined_forest_fire.scm-model");
    EpistemicState k = resolve_epistemic(doc, "K");
    CHECK(k.size() == 3);
    // brute-force filter over all contexts agrees
    const CausalModel& m = doc.model;
    EpistemicState manual;
    for (const Context& u : enumerate_contexts(m)) {
        bool ul = u.at(m.var_index("U_L")) == 1;
        bool umd = u.at(m.var_index("U_MD")) == 1;
        bool ub = u.at(m.var_index("U_B")) == 1;
        if (ul && (!umd || ub)) manual.push_back(u);
    }
    CHECK(k == make_epistemic(manual));
}

TEST_CASE("explicit context list syntax") {
    std::string src =
        "version 1\n"
        "exogenous U_A : bool\n"
        "exogenous U_B : bool\n"
        "endogenous X : bool = U_A & U_B\n"
        "epistemic K : {(U_A=1, U_B=0), (U_A=1, U_B=1)}\n";
    ParseResult res = parse_model(src);
    REQUIRE(res.ok());
    CHECK(resolve_epistemic(*res.doc, "K").size() == 2);
}

TEST_CASE("event parsing: sugar, errors") {
    CausalModel m = ex2_model();
    EventParse p1 = parse_event("FF", m);
    REQUIRE(p1.ok());
    CHECK(p1.event->op == Event::Op::Prim);
    CHECK(p1.event->var == m.var_index("FF"));
    CHECK(p1.event->val == 1);

    EventParse p2 = parse_event("(MD & B) | L", m);
    REQUIRE(p2.ok());
    CHECK(p2.event->op == Event::Op::Or);

    EventParse p3 = parse_event("U_L", m);
    CHECK(!p3.ok());
    REQUIRE(!p3.diagnostics.empty());
    CHECK(p3.diagnostics.front().message.find("exogenous") != std::string::npos);

    CHECK(!parse_event("FF = 7", m).ok());
}

TEST_CASE("round trip: serialize then parse reproduces the document") {
    for (const char* file : {"ex1_disjunctive_forest_fire.scm-model",
                             "ex2_overdetermined_forest_fire.scm-model",
                             "ex4_suzy_billy.scm-model"}) {
        ModelDocument doc = load_corpus_model(file);
        std::string canon = serialize_model(doc);
        ParseResult res = parse_model(canon);
        REQUIRE(res.ok());
        CHECK(res.doc->model == doc.model);
        CHECK(serialize_model(*res.doc) == canon);  // idempotent canonicalisation
        CHECK(model_digest(*res.doc) == model_digest(doc));
        CHECK(res.doc->event_names == doc.event_names);
        CHECK(res.doc->epistemic_names == doc.epistemic_names);
        for (const std::string& name : doc.epistemic_names)
            CHECK(resolve_epistemic(*res.doc, name) == resolve_epistemic(doc, name));
    }
}

TEST_CASE("rendering uses the boolean abbreviation") {
    CausalModel m = ex1_model();
    CHECK(render_setting(m, setting(m, {{"L", 1}, {"MD", 0}})) == "L ∧ ¬MD");
    CHECK(render_pair(m, pair(m, {{"MD", 1, 0}})) == "<MD, ¬MD>");
    CHECK(render_setting(m, PartialSetting{}) == "⊤");
}

TEST_CASE("non-boolean domains declare values in order") {
    std::string src =
        "version 1\n"
        "exogenous W : {low, mid, high}\n"
        "endogenous OUT : {low, mid, high} = W\n"
        "event high_out : OUT = high\n";
    ParseResult res = parse_model(src);
    REQUIRE(res.ok());
    const CausalModel& m = res.doc->model;
    int w = m.var_index("W");
    CHECK(value_to_string(m.var(w).domain[0]) == "low");
    CHECK(value_to_string(m.var(w).domain[2]) == "high");
    CHECK(enumerate_contexts(m).size() == 3);
    // round trip for identifier domains too
    ParseResult again = parse_model(serialize_model(*res.doc));
    REQUIRE(again.ok());
    CHECK(again.doc->model == m);
}

TEST_CASE("parse_context") {
    CausalModel m = ex1_model();
    auto c = parse_context("(U_L=1, U_MD=0)", m);
    REQUIRE(c.has_value());
    CHECK(c->at(m.var_index("U_L")) == 1);
    CHECK(c->at(m.var_index("U_MD")) == 0);
    std::string err;
    CHECK(!parse_context("(U_L=1)", m, &err).has_value());  // incomplete
    CHECK(!err.empty());
}
