#include "causalex/random_models.hpp"

#include <algorithm>

#include "causalex/causes.hpp"

namespace causalex {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    return x;
}

ExprPtr random_expr(std::mt19937_64& rng, const std::vector<int>& leaves, int depth) {
    auto leaf = [&]() -> ExprPtr {
        std::uniform_int_distribution<std::size_t> pick(0, leaves.size());  // last = constant
        std::size_t i = pick(rng);
        if (i == leaves.size())
            return Expr::make_lit(Value{static_cast<std::int64_t>(rng() & 1)});
        return Expr::make_var(leaves[i]);
    };
    if (depth <= 0 || (rng() % 4) == 0) return leaf();
    switch (rng() % 4) {
        case 0: return Expr::make(Expr::Op::Not, {random_expr(rng, leaves, depth - 1)});
        case 1:
            return Expr::make(Expr::Op::And, {random_expr(rng, leaves, depth - 1),
                                              random_expr(rng, leaves, depth - 1)});
        case 2:
            return Expr::make(Expr::Op::Or, {random_expr(rng, leaves, depth - 1),
                                             random_expr(rng, leaves, depth - 1)});
        default:
            return Expr::make(Expr::Op::Ite,
                              {random_expr(rng, leaves, depth - 1),
                               random_expr(rng, leaves, depth - 1),
                               random_expr(rng, leaves, depth - 1)});
    }
}

EventPtr random_event(std::mt19937_64& rng, const CausalModel& m, int depth) {
    const auto& endo = m.endo_indices();
    auto prim = [&]() {
        int var = endo[rng() % endo.size()];
        auto val = static_cast<std::uint8_t>(rng() % m.var(var).domain.size());
        return Event::prim(var, val);
    };
    if (depth <= 0 || (rng() % 3) == 0) return prim();
    switch (rng() % 3) {
        case 0: return Event::negate(random_event(rng, m, depth - 1));
        case 1:
            return Event::conj({random_event(rng, m, depth - 1), random_event(rng, m, depth - 1)});
        default:
            return Event::disj({random_event(rng, m, depth - 1), random_event(rng, m, depth - 1)});
    }
}

}  // namespace

RandomInstance random_instance(const RandomModelParams& params, std::uint64_t trial) {
    std::mt19937_64 rng(mix(params.seed, trial));
    int n_exo = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_exogenous));
    int n_endo = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.max_endogenous));

    std::vector<Variable> vars;
    std::vector<Value> boolean{Value{std::int64_t{0}}, Value{std::int64_t{1}}};
    for (int i = 0; i < n_exo; ++i)
        vars.push_back({"U" + std::to_string(i + 1), VarKind::Exogenous, boolean});
    for (int i = 0; i < n_endo; ++i)
        vars.push_back({std::string(1, static_cast<char>('A' + i)), VarKind::Endogenous, boolean});

    // Name-sorted indexing: A..D precede U1..U3, so endogenous i sits at
    // index i and exogenous j at n_endo + j.
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    std::vector<int> leaves;
    for (int j = 0; j < n_exo; ++j) leaves.push_back(n_endo + j);
    for (int i = 0; i < n_endo; ++i) {
        eqs.emplace_back(std::string(1, static_cast<char>('A' + i)),
                         random_expr(rng, leaves, params.max_depth));
        leaves.push_back(i);  // later equations may reference this variable
    }

    RandomInstance inst;
    inst.doc.model = CausalModel::make(std::move(vars), std::move(eqs));
    const CausalModel& m = inst.doc.model;

    auto contexts = enumerate_contexts(m);
    std::vector<Context> chosen;
    for (const Context& u : contexts)
        if (rng() & 1) chosen.push_back(u);
    if (chosen.empty()) chosen.push_back(contexts[rng() % contexts.size()]);
    inst.k = make_epistemic(std::move(chosen));

    // Prefer facts that actually occur somewhere in K and are not constant
    // across all contexts; fall back to the last draw.
    for (int attempt = 0; attempt < 24; ++attempt) {
        inst.fact = random_event(rng, m, 2);
        bool in_k = false, off_somewhere = false;
        for (const Context& u : inst.k)
            if (eval_event(*inst.fact, solve(m, u))) in_k = true;
        for (const Context& u : contexts)
            if (!eval_event(*inst.fact, solve(m, u))) off_somewhere = true;
        if (in_k && off_somewhere) break;
    }
    inst.random_foil = random_event(rng, m, 2);

    inst.doc.event_names = {"fact", "foil"};
    inst.doc.events["fact"] = inst.fact;
    inst.doc.events["foil"] = inst.random_foil;
    return inst;
}

}  // namespace causalex
