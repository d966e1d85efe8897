#include "causalex/contrastive.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace causalex {

// ---------------------------------------------------------------------------
// ContrastivePair
// ---------------------------------------------------------------------------

void ContrastivePair::set(int var, std::uint8_t fact, std::uint8_t foil) {
    mask |= std::uint16_t(1u << var);
    x[static_cast<std::size_t>(var)] = fact;
    xp[static_cast<std::size_t>(var)] = foil;
}

int ContrastivePair::size() const { return std::popcount(mask); }

PartialSetting ContrastivePair::fact() const {
    PartialSetting s{};
    for (std::uint16_t m = mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        s.set(i, x[static_cast<std::size_t>(i)]);
    }
    return s;
}

PartialSetting ContrastivePair::foil() const {
    PartialSetting s{};
    for (std::uint16_t m = mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        s.set(i, xp[static_cast<std::size_t>(i)]);
    }
    return s;
}

bool ContrastivePair::differs_everywhere() const {
    for (std::uint16_t m = mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        if (x[static_cast<std::size_t>(i)] == xp[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

ContrastivePair ContrastivePair::restrict(std::uint16_t submask) const {
    ContrastivePair r{};
    for (std::uint16_t m = mask & submask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        r.set(i, x[static_cast<std::size_t>(i)], xp[static_cast<std::size_t>(i)]);
    }
    return r;
}

bool ContrastivePair::extends(const ContrastivePair& other) const {
    if ((other.mask & mask) != other.mask || other.mask == mask) return false;
    return restrict(other.mask) == other;
}

bool canonical_less(const ContrastivePair& a, const ContrastivePair& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    std::uint16_t ma = a.mask, mb = b.mask;
    while (ma && mb) {
        int ia = std::countr_zero(ma), ib = std::countr_zero(mb);
        if (ia != ib) return ia < ib;
        auto ax = a.x[static_cast<std::size_t>(ia)], bx = b.x[static_cast<std::size_t>(ib)];
        if (ax != bx) return ax < bx;
        auto ap = a.xp[static_cast<std::size_t>(ia)], bp = b.xp[static_cast<std::size_t>(ib)];
        if (ap != bp) return ap < bp;
        ma &= std::uint16_t(ma - 1);
        mb &= std::uint16_t(mb - 1);
    }
    return false;
}

namespace {

// Aligned restriction of two conjunctions to the shared variables where they
// disagree (the difference condition holds by construction).
ContrastivePair shared_difference(const PartialSetting& a, const PartialSetting& b) {
    ContrastivePair p{};
    for (std::uint16_t m = a.mask & b.mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        if (a.at(i) != b.at(i)) p.set(i, a.at(i), b.at(i));
    }
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

ContrastiveEngine::ContrastiveEngine(CauseEngine& causes, EpistemicState k, FactFoil ff)
    : causes_(causes), expl_(causes, k), k_(std::move(k)), ff_(std::move(ff)) {
    if (k_.empty()) throw QueryError("epistemic state must be non-empty");
    for (const PartialSetting& s : settings_within(causes_.model(), causes_.model().endo_mask()))
        if (!s.empty()) interventions_.push_back(s);
}

bool ContrastiveEngine::incompatible() const {
    for (const Context& u : k_) {
        World w = solve(causes_.model(), u);
        if (eval_event(*ff_.fact, w) && eval_event(*ff_.foil, w)) return false;
    }
    return true;
}

ContrastiveEngine::CCInfo& ContrastiveEngine::cc_info(const Context& u, CauseKind kind) {
    auto key = std::make_pair(u, kind);
    auto it = cc_.find(key);
    if (it != cc_.end()) return it->second;

    CCInfo info;
    World actual = causes_.world(PartialSetting{}, u);
    info.cc2 = !eval_event(*ff_.foil, actual);  // CC2
    if (info.cc2) {
        std::set<ContrastivePair> seen;
        const auto& fact_causes = causes_.causes(PartialSetting{}, u, ff_.fact, kind);
        for (const Intervention& iv : interventions_) {
            const auto& foil_causes = causes_.causes(iv, u, ff_.foil, kind);
            if (foil_causes.empty()) continue;
            for (const PartialSetting& cf : fact_causes) {
                for (const PartialSetting& cp : foil_causes) {
                    ContrastivePair p = shared_difference(cf, cp);
                    if (p.empty()) continue;
                    if (seen.insert(p).second)
                        info.witnesses.emplace(p, ContrastiveCauseWitness{cf, iv, cp});
                }
            }
        }
        info.pairs.assign(seen.begin(), seen.end());
    }
    return cc_.emplace(key, std::move(info)).first->second;
}

const std::vector<ContrastivePair>& ContrastiveEngine::contrastive_causes(const Context& u,
                                                                          CauseKind kind) {
    return cc_info(u, kind).pairs;
}

bool ContrastiveEngine::is_contrastive_cause(const Context& u, const ContrastivePair& pair,
                                             CauseKind kind, ContrastiveCauseWitness* witness) {
    if (pair.empty()) throw QueryError("contrastive pairs must be non-empty");
    if (!pair.differs_everywhere()) return false;  // CC4
    CCInfo& info = cc_info(u, kind);
    auto it = info.witnesses.find(pair);
    if (it == info.witnesses.end()) return false;
    if (witness) *witness = it->second;
    return true;
}

// ---------------------------------------------------------------------------
// Container families
//
// Each contrastive definition quantifies over complete conjunctions that the
// pair components are parts of. The equivalence proofs identify these with
// the corresponding non-contrastive explanation candidates relative to K,
// before the occurrence/uncertainty clauses that the contrastive definitions
// restate at the pair level (CE4, CH3-CH4, CB3-CB6). The foil side ranges
// over every intervened model M_{W <- w}, W non-empty.
// ---------------------------------------------------------------------------

ContrastiveEngine::Family& ContrastiveEngine::family(ContainerFamily f) {
    auto it = families_.find(f);
    if (it != families_.end()) return it->second;

    Family fam;
    auto add_side = [&](const Intervention& iv, const EventPtr& ev, bool fact_side) {
        auto push = [&](const PartialSetting& e, bool flag, bool act, bool pars) {
            if (fact_side) {
                fam.fact_all.push_back(e);
                if (flag) fam.fact_flag.push_back(e);
                if (act) fam.fact_actual.push_back(e);
                if (pars) fam.fact_pars.push_back(e);
            } else {
                fam.foil_all.emplace_back(iv, e);
                if (flag) fam.foil_flag.emplace_back(iv, e);
                if (act) fam.foil_actual.emplace_back(iv, e);
                if (pars) fam.foil_pars.emplace_back(iv, e);
            }
        };
        switch (f) {
            case ContainerFamily::Original:
                for (const auto& r : expl_.original_candidates(iv, ev))
                    push(r.explanation, r.ex4, false, false);
                break;
            case ContainerFamily::Modified:
                for (const auto& r : expl_.modified_hp(iv, ev))
                    push(r.explanation, r.non_trivial, false, false);
                break;
            case ContainerFamily::Borner:
                for (const auto& r : expl_.borner(iv, ev))
                    push(r.explanation, r.potential, r.actual, r.parsimonious);
                break;
        }
    };
    add_side(PartialSetting{}, ff_.fact, true);
    for (const Intervention& iv : interventions_) add_side(iv, ff_.foil, false);
    return families_.emplace(f, std::move(fam)).first->second;
}

ContrastiveEngine::CandidateSet ContrastiveEngine::build_candidates(
    const std::vector<PartialSetting>& facts,
    const std::vector<std::pair<Intervention, PartialSetting>>& foils) {
    CandidateSet cs;
    for (const PartialSetting& f : facts) {
        for (const auto& [iv, g] : foils) {
            ContrastivePair d = shared_difference(f, g);
            if (d.empty()) continue;
            // every non-empty aligned sub-pair is a candidate (partiality)
            for (std::uint16_t sub = d.mask; sub; sub = (sub - 1) & d.mask)
                cs.all.emplace(d.restrict(sub), PairWitness{f, iv, g});
        }
    }
    for (const auto& [p, w] : cs.all) {
        bool maximal = true;
        for (const auto& [q, wq] : cs.all)
            if (q.extends(p)) {
                maximal = false;
                break;
            }
        if (maximal) cs.tops.push_back(p);
    }
    std::sort(cs.tops.begin(), cs.tops.end(), CanonicalLess{});
    return cs;
}

bool ContrastiveEngine::is_candidate(ContainerFamily f, const ContrastivePair& p) {
    if (p.empty() || !p.differs_everywhere()) return false;
    auto it = candidates_.find(f);
    if (it == candidates_.end()) {
        Family& fam = family(f);
        it = candidates_.emplace(f, build_candidates(fam.fact_all, fam.foil_all)).first;
    }
    return it->second.all.count(p) > 0;
}

std::optional<PairWitness> ContrastiveEngine::candidate_witness(ContainerFamily f,
                                                                const ContrastivePair& p) {
    if (!is_candidate(f, p)) return std::nullopt;
    return candidates_.at(f).all.at(p);
}

// ---------------------------------------------------------------------------
// Pair-level clauses
// ---------------------------------------------------------------------------

bool ContrastiveEngine::w_differs_from_fact(const Intervention& w,
                                            const PartialSetting& fact) const {
    // "w != x": the intervention, as a set of primitive assignments, must not
    // be contained in the fact assignment.
    return !w.subset_of(fact);
}

// CE4(a) / CH4(a) / CB4(a): the fact component occurs somewhere and fails
// somewhere. For CH/CB the occurrence side is CH3/CB3; the failure side here
// additionally requires the explanandum (see callers).
bool ContrastiveEngine::ce4a(const ContrastivePair& p) {
    PartialSetting fact = p.fact();
    bool some_yes = false, some_no = false;
    for (const Context& u : k_) {
        if (fact.holds_in(causes_.world(PartialSetting{}, u)))
            some_yes = true;
        else
            some_no = true;
    }
    return some_yes && some_no;
}

// CE4(b): some W <- w not contained in the fact assignment makes the foil
// component's occurrence uncertain across K.
bool ContrastiveEngine::ce4b(const ContrastivePair& p) {
    PartialSetting fact = p.fact(), foil = p.foil();
    for (const Intervention& iv : interventions_) {
        if (!w_differs_from_fact(iv, fact)) continue;
        bool some_yes = false, some_no = false;
        for (const Context& u : k_) {
            if (foil.holds_in(causes_.world(iv, u)))
                some_yes = true;
            else
                some_no = true;
            if (some_yes && some_no) return true;
        }
    }
    return false;
}

// CH4(b) / CB4(b): some W <- w not contained in the fact assignment yields a
// context where the foil component fails while psi holds.
bool ContrastiveEngine::ch4b(const ContrastivePair& p) {
    PartialSetting fact = p.fact(), foil = p.foil();
    for (const Intervention& iv : interventions_) {
        if (!w_differs_from_fact(iv, fact)) continue;
        for (const Context& u : k_) {
            World w = causes_.world(iv, u);
            if (!foil.holds_in(w) && eval_event(*ff_.foil, w)) return true;
        }
    }
    return false;
}

// CH3 / CB3: the fact component occurs together with phi and not-psi.
bool ContrastiveEngine::occurs_with_fact_not_foil(const ContrastivePair& p) {
    PartialSetting fact = p.fact();
    for (const Context& u : k_) {
        World w = causes_.world(PartialSetting{}, u);
        if (fact.holds_in(w) && eval_event(*ff_.fact, w) && !eval_event(*ff_.foil, w)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Direct definitions
// ---------------------------------------------------------------------------

std::vector<ContrastivePair> ContrastiveEngine::miller() {
    std::vector<ContrastivePair> out;
    for (const Context& u : k_) {  // CE1
        World w = causes_.world(PartialSetting{}, u);
        if (!eval_event(*ff_.fact, w) || eval_event(*ff_.foil, w)) return out;
    }
    Family& fam = family(ContainerFamily::Original);
    CandidateSet cs = build_candidates(fam.fact_all, fam.foil_all);
    for (const ContrastivePair& p : cs.tops) {  // CE2 with CC5 maximality
        // CE3: no proper sub-pair again satisfies CE2
        bool minimal = true;
        for (std::uint16_t sub = (p.mask - 1) & p.mask; sub && minimal; sub = (sub - 1) & p.mask) {
            ContrastivePair q = p.restrict(sub);
            if (std::binary_search(cs.tops.begin(), cs.tops.end(), q, CanonicalLess{}))
                minimal = false;
        }
        if (!minimal) continue;
        if (!ce4a(p)) continue;  // CE4(a)
        if (!ce4b(p)) continue;  // CE4(b)
        out.push_back(p);
    }
    return out;
}

std::vector<ContrastiveResult> ContrastiveEngine::modified_hp_contrastive() {
    std::vector<ContrastiveResult> out;
    Family& fam = family(ContainerFamily::Modified);
    CandidateSet cs = build_candidates(fam.fact_all, fam.foil_all);
    for (const ContrastivePair& p : cs.tops) {  // CH1 (a)-(d)
        // CH2: minimality holds on the antichain of maximal candidates
        if (!occurs_with_fact_not_foil(p)) continue;  // CH3
        ContrastiveResult r;
        r.pair = p;
        r.witness = cs.all.at(p);
        // CH4(a): the fact component fails somewhere while phi holds
        bool ch4a = false;
        PartialSetting fact = p.fact();
        for (const Context& u : k_) {
            World w = causes_.world(PartialSetting{}, u);
            if (!fact.holds_in(w) && eval_event(*ff_.fact, w)) {
                ch4a = true;
                break;
            }
        }
        r.non_trivial = ch4a && ch4b(p);
        out.push_back(r);
    }
    return out;
}

std::vector<ContrastiveResult> ContrastiveEngine::borner_contrastive() {
    std::vector<ContrastiveResult> out;
    Family& fam = family(ContainerFamily::Borner);
    CandidateSet cs = build_candidates(fam.fact_all, fam.foil_all);
    for (const ContrastivePair& p : cs.tops) {  // CB1-CB2
        if (!occurs_with_fact_not_foil(p)) continue;  // CB3
        ContrastiveResult r;
        r.pair = p;
        r.witness = cs.all.at(p);
        PartialSetting fact = p.fact();
        // CB4(a) and CB5
        bool cb4a = false, cb5 = true;
        for (const Context& u : k_) {
            World w = causes_.world(PartialSetting{}, u);
            bool fx = fact.holds_in(w);
            cb4a |= !fx && eval_event(*ff_.fact, w);
            cb5 &= fx && eval_event(*ff_.fact, w) && !eval_event(*ff_.foil, w);
        }
        r.potential = cb4a && ch4b(p);  // CB4
        r.actual = cb5;
        if (r.potential) {
            r.parsimonious = true;  // CB6: minimal relative to CB1-CB2
            for (std::uint16_t sub = (p.mask - 1) & p.mask; sub && r.parsimonious;
                 sub = (sub - 1) & p.mask)
                if (cs.all.count(p.restrict(sub))) r.parsimonious = false;
        }
        if (r.potential || r.actual) out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Modular definition (CE1'-CE4')
// ---------------------------------------------------------------------------

std::vector<ContrastivePair> ContrastiveEngine::modular(ModularBase base) {
    ContainerFamily f = ContainerFamily::Original;
    switch (base) {
        case ModularBase::OriginalHp: f = ContainerFamily::Original; break;
        case ModularBase::ModifiedHp:
        case ModularBase::ModifiedHpNonTrivial: f = ContainerFamily::Modified; break;
        default: f = ContainerFamily::Borner; break;
    }
    Family& fam = family(f);
    const std::vector<PartialSetting>* facts = &fam.fact_all;
    const std::vector<std::pair<Intervention, PartialSetting>>* foils = &fam.foil_all;
    switch (base) {
        case ModularBase::OriginalHp:  // explanations proper include EX4
        case ModularBase::ModifiedHpNonTrivial:
        case ModularBase::BornerPotential:
            facts = &fam.fact_flag;
            foils = &fam.foil_flag;
            break;
        case ModularBase::BornerActual:
            facts = &fam.fact_actual;
            foils = &fam.foil_actual;
            break;
        case ModularBase::BornerParsimonious:
            facts = &fam.fact_pars;
            foils = &fam.foil_pars;
            break;
        case ModularBase::ModifiedHp: break;  // EX1'-EX3' satisfiers
    }
    return build_candidates(*facts, *foils).tops;  // CE1'-CE3' + CE4'
}

// ---------------------------------------------------------------------------
// spec-facing wrappers
// ---------------------------------------------------------------------------

namespace {

void check_inputs(const CausalModel& m, const EpistemicState& k, const Limits& limits) {
    if (!m.valid()) throw QueryError("model is invalid");
    if (k.empty()) throw QueryError("epistemic state must be non-empty");
    limits.check_model(m);
    limits.check_epistemic(k);
}

std::vector<ContrastivePair> sorted_pairs(std::vector<ContrastivePair> v) {
    std::sort(v.begin(), v.end(), CanonicalLess{});
    return v;
}

std::vector<ContrastiveResult> sorted_results(std::vector<ContrastiveResult> v) {
    std::sort(v.begin(), v.end(), [](const ContrastiveResult& a, const ContrastiveResult& b) {
        return canonical_less(a.pair, b.pair);
    });
    return v;
}

}  // namespace

ContrastiveCauseDecision is_contrastive_cause(const CausalModel& m, const Context& u,
                                              const ContrastivePair& pair, const FactFoil& ff,
                                              CauseKind kind, const Limits& limits) {
    if (!m.valid()) throw QueryError("model is invalid");
    limits.check_model(m);
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, {u}, ff);
    ContrastiveCauseWitness w;
    ContrastiveCauseDecision d;
    d.is_cause = eng.is_contrastive_cause(u, pair, kind, &w);
    if (d.is_cause) d.witness = w;
    return d;
}

std::vector<ContrastivePair> enumerate_miller(const CausalModel& m, const EpistemicState& k,
                                              const FactFoil& ff, const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    return sorted_pairs(eng.miller());
}

std::vector<ContrastiveResult> enumerate_modified_hp_contrastive(const CausalModel& m,
                                                                 const EpistemicState& k,
                                                                 const FactFoil& ff,
                                                                 const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    return sorted_results(eng.modified_hp_contrastive());
}

std::vector<ContrastiveResult> enumerate_borner_contrastive(const CausalModel& m,
                                                            const EpistemicState& k,
                                                            const FactFoil& ff,
                                                            const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    return sorted_results(eng.borner_contrastive());
}

std::vector<ContrastivePair> enumerate_modular(const CausalModel& m, const EpistemicState& k,
                                               const FactFoil& ff, ModularBase base,
                                               const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    return eng.modular(base);
}

bool check_incompatibility(const CausalModel& m, const EpistemicState& k, const FactFoil& ff) {
    if (!m.valid()) throw QueryError("model is invalid");
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    return eng.incompatible();
}

}  // namespace causalex
