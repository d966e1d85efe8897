#pragma once

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "causalex/contrastive.hpp"
#include "causalex/dsl.hpp"
#include "causalex/model.hpp"

namespace testutil {

using namespace causalex;

inline std::vector<Value> boolean_domain() {
    return {Value{std::int64_t{0}}, Value{std::int64_t{1}}};
}

inline Variable exo(const std::string& name) { return {name, VarKind::Exogenous, boolean_domain()}; }
inline Variable endo(const std::string& name) {
    return {name, VarKind::Endogenous, boolean_domain()};
}

// Example 1: L := U_L, MD := U_MD, FF := L | MD
inline CausalModel ex1_model() {
    std::vector<Variable> vars{exo("U_L"), exo("U_MD"), endo("L"), endo("MD"), endo("FF")};
    auto var = [&](const char* n) {
        std::vector<std::string> sorted;
        for (const auto& v : vars) sorted.push_back(v.name);
        std::sort(sorted.begin(), sorted.end());
        return Expr::make_var(static_cast<int>(
            std::find(sorted.begin(), sorted.end(), n) - sorted.begin()));
    };
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    eqs.emplace_back("L", var("U_L"));
    eqs.emplace_back("MD", var("U_MD"));
    eqs.emplace_back("FF", Expr::make(Expr::Op::Or, {var("L"), var("MD")}));
    return CausalModel::make(vars, std::move(eqs));
}

// Example 2: adds B := U_B and FF := (MD & B) | L
inline CausalModel ex2_model() {
    std::vector<Variable> vars{exo("U_L"), exo("U_MD"), exo("U_B"),
                               endo("L"), endo("MD"),  endo("B"), endo("FF")};
    auto var = [&](const char* n) {
        std::vector<std::string> sorted;
        for (const auto& v : vars) sorted.push_back(v.name);
        std::sort(sorted.begin(), sorted.end());
        return Expr::make_var(static_cast<int>(
            std::find(sorted.begin(), sorted.end(), n) - sorted.begin()));
    };
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    eqs.emplace_back("L", var("U_L"));
    eqs.emplace_back("MD", var("U_MD"));
    eqs.emplace_back("B", var("U_B"));
    eqs.emplace_back("FF", Expr::make(Expr::Op::Or,
                                      {Expr::make(Expr::Op::And, {var("MD"), var("B")}), var("L")}));
    return CausalModel::make(vars, std::move(eqs));
}

// Example 4: Suzy and Billy
inline CausalModel ex4_model() {
    std::vector<Variable> vars{exo("U_SS"), exo("U_ST"), exo("U_BS"), exo("U_BT"),
                               endo("SS"),  endo("ST"),  endo("BS"),  endo("BT"),
                               endo("SH"),  endo("BH"),  endo("BB")};
    auto var = [&](const char* n) {
        std::vector<std::string> sorted;
        for (const auto& v : vars) sorted.push_back(v.name);
        std::sort(sorted.begin(), sorted.end());
        return Expr::make_var(static_cast<int>(
            std::find(sorted.begin(), sorted.end(), n) - sorted.begin()));
    };
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    eqs.emplace_back("SS", var("U_SS"));
    eqs.emplace_back("ST", var("U_ST"));
    eqs.emplace_back("BS", var("U_BS"));
    eqs.emplace_back("BT", var("U_BT"));
    eqs.emplace_back("SH", Expr::make(Expr::Op::And, {var("SS"), var("ST")}));
    eqs.emplace_back("BH", Expr::make(Expr::Op::And,
                                      {Expr::make(Expr::Op::And, {var("BS"), var("BT")}),
                                       Expr::make(Expr::Op::Not, {var("SH")})}));
    eqs.emplace_back("BB", Expr::make(Expr::Op::Or, {var("SH"), var("BH")}));
    return CausalModel::make(vars, std::move(eqs));
}

struct NamedVal {
    const char* name;
    int value;
};

inline PartialSetting setting(const CausalModel& m, std::initializer_list<NamedVal> assigns) {
    PartialSetting s{};
    for (const NamedVal& nv : assigns) {
        int i = m.var_index(nv.name);
        REQUIRE(i >= 0);
        s.set(i, static_cast<std::uint8_t>(nv.value));
    }
    return s;
}

inline Context ctx(const CausalModel& m, std::initializer_list<NamedVal> assigns) {
    return setting(m, assigns);
}

struct NamedPair {
    const char* name;
    int fact;
    int foil;
};

inline ContrastivePair pair(const CausalModel& m, std::initializer_list<NamedPair> assigns) {
    ContrastivePair p{};
    for (const NamedPair& np : assigns) {
        int i = m.var_index(np.name);
        REQUIRE(i >= 0);
        p.set(i, static_cast<std::uint8_t>(np.fact), static_cast<std::uint8_t>(np.foil));
    }
    return p;
}

inline EventPtr ev(const CausalModel& m, const std::string& text) {
    EventParse p = parse_event(text, m);
    REQUIRE(p.ok());
    return p.event;
}

template <typename T, typename Less>
inline std::vector<T> sorted(std::vector<T> v, Less less) {
    std::sort(v.begin(), v.end(), less);
    return v;
}

inline bool same_settings(std::vector<PartialSetting> a, std::vector<PartialSetting> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

inline bool same_pairs(std::vector<ContrastivePair> a, std::vector<ContrastivePair> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

inline std::string corpus_path(const std::string& file) {
    return std::string(CAUSALEX_CORPUS_DIR) + "/" + file;
}

inline ModelDocument load_corpus_model(const std::string& file) {
    std::ifstream in(corpus_path(file));
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    ParseResult res = parse_model(ss.str());
    REQUIRE(res.ok());
    return std::move(*res.doc);
}

}  // namespace testutil
