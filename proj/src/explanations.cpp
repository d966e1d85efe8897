#include "causalex/explanations.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace causalex {

namespace {

PartialSetting restrict_setting(const PartialSetting& s, std::uint16_t mask) {
    PartialSetting r{};
    for (std::uint16_t m = s.mask & mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        r.set(i, s.at(i));
    }
    return r;
}

PartialSetting conj_union(const PartialSetting& a, const PartialSetting& b) {
    return merge_override(a, b);  // disjoint by construction at call sites
}

}  // namespace

ExplanationEngine::ExplanationEngine(CauseEngine& causes, EpistemicState k)
    : causes_(causes), k_(std::move(k)) {
    if (k_.empty()) throw QueryError("epistemic state must be non-empty");
}

// EX2: a weak actual cause at every plausible context where it occurs.
bool ExplanationEngine::ex2_weak_everywhere(const Intervention& iv, const EventPtr& ev,
                                            const PartialSetting& x) {
    auto key = std::make_pair(EvKey{iv, ev.get()}, x);
    auto it = ex2_memo_.find(key);
    if (it != ex2_memo_.end()) return it->second;
    bool ok = true;
    for (const Context& u : k_) {
        if (!x.holds_in(causes_.world(iv, u))) continue;
        if (!causes_.is_cause(iv, u, x, ev, CauseKind::WeakActual)) {
            ok = false;
            break;
        }
    }
    ex2_memo_.emplace(key, ok);
    return ok;
}

const std::vector<ExplanationEngine::OriginalResult>& ExplanationEngine::original_candidates(
    const Intervention& iv, const EventPtr& ev) {
    EvKey ek{iv, ev.get()};
    auto it = original_candidates_.find(ek);
    if (it != original_candidates_.end()) return it->second;

    std::vector<OriginalResult> out;
    bool ex1 = std::all_of(k_.begin(), k_.end(),
                           [&](const Context& u) { return causes_.event_holds(iv, u, ev); });
    if (ex1) {
        for (const PartialSetting& x : all_candidate_settings(causes_.model())) {
            int holds_at = 0;
            for (const Context& u : k_)
                if (x.holds_in(causes_.world(iv, u))) ++holds_at;
            if (holds_at == 0) continue;  // occurs nowhere
            if (!ex2_weak_everywhere(iv, ev, x)) continue;
            // EX3: no proper non-empty sub-conjunction satisfies EX2
            bool minimal = true;
            for (std::uint16_t sub = (x.mask - 1) & x.mask; sub && minimal; sub = (sub - 1) & x.mask)
                if (ex2_weak_everywhere(iv, ev, restrict_setting(x, sub))) minimal = false;
            if (!minimal) continue;
            // EX4's remaining half: occurrence is uncertain
            out.push_back({x, holds_at < static_cast<int>(k_.size())});
        }
    }
    return original_candidates_.emplace(ek, std::move(out)).first->second;
}

const std::vector<PartialSetting>& ExplanationEngine::original_hp(const Intervention& iv,
                                                                  const EventPtr& ev) {
    EvKey ek{iv, ev.get()};
    auto it = original_.find(ek);
    if (it != original_.end()) return it->second;
    std::vector<PartialSetting> out;
    for (const OriginalResult& r : original_candidates(iv, ev))
        if (r.ex4) out.push_back(r.explanation);
    return original_.emplace(ek, std::move(out)).first->second;
}

// EX1'(a): some conjunct is part of an actual cause wherever X = x and the
// event both occur; EX1'(b): [X <- x] brings the event about at every
// plausible context.
bool ExplanationEngine::ex1p(const Intervention& iv, const EventPtr& ev, const PartialSetting& x) {
    auto key = std::make_pair(EvKey{iv, ev.get()}, x);
    auto it = ex1p_memo_.find(key);
    if (it != ex1p_memo_.end()) return it->second;
    bool ok = true;
    for (const Context& u : k_) {
        if (!eval_event(*ev, solve_with(causes_.model(), merge_override(iv, x), u))) {
            ok = false;  // EX1'(b)
            break;
        }
    }
    if (ok) {
        for (const Context& u : k_) {
            World w = causes_.world(iv, u);
            if (!x.holds_in(w) || !causes_.event_holds(iv, u, ev)) continue;
            if ((x.mask & causes_.parts_mask(iv, u, ev)) == 0) {
                ok = false;  // EX1'(a)
                break;
            }
        }
    }
    ex1p_memo_.emplace(key, ok);
    return ok;
}

const std::vector<ExplanationEngine::ModifiedResult>& ExplanationEngine::modified_hp(
    const Intervention& iv, const EventPtr& ev) {
    EvKey ek{iv, ev.get()};
    auto it = modified_.find(ek);
    if (it != modified_.end()) return it->second;

    std::vector<ModifiedResult> out;
    for (const PartialSetting& x : all_candidate_settings(causes_.model())) {
        // EX3': X = x and the event co-occur somewhere in K
        bool ex3 = false, ex4 = false;
        for (const Context& u : k_) {
            bool ev_holds = causes_.event_holds(iv, u, ev);
            bool x_holds = x.holds_in(causes_.world(iv, u));
            ex3 |= x_holds && ev_holds;
            ex4 |= !x_holds && ev_holds;
        }
        if (!ex3) continue;
        if (!ex1p(iv, ev, x)) continue;
        bool minimal = true;  // EX2'
        for (std::uint16_t sub = (x.mask - 1) & x.mask; sub && minimal; sub = (sub - 1) & x.mask)
            if (ex1p(iv, ev, restrict_setting(x, sub))) minimal = false;
        if (!minimal) continue;
        out.push_back({x, ex4});
    }
    return modified_.emplace(ek, std::move(out)).first->second;
}

// E1-E2: some certain S = s makes (X = x) ^ (S = s) a sufficient cause
// wherever X = x occurs.
std::optional<PartialSetting> ExplanationEngine::borner_e12(const Intervention& iv,
                                                            const EventPtr& ev,
                                                            const PartialSetting& x) {
    auto key = std::make_pair(EvKey{iv, ev.get()}, x);
    auto it = e12_memo_.find(key);
    if (it != e12_memo_.end()) return it->second;

    std::optional<PartialSetting> found;
    std::uint16_t rest = causes_.model().endo_mask() & std::uint16_t(~x.mask);
    for (const PartialSetting& s : settings_within(causes_.model(), rest)) {
        bool s_certain = true;  // E1-E2(b)
        for (const Context& u : k_)
            if (!s.holds_in(causes_.world(iv, u))) {
                s_certain = false;
                break;
            }
        if (!s_certain) continue;
        bool ok = true;  // E1-E2(a)
        for (const Context& u : k_) {
            if (!x.holds_in(causes_.world(iv, u))) continue;
            if (!causes_.is_cause(iv, u, conj_union(x, s), ev, CauseKind::Sufficient)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            found = s;
            break;
        }
    }
    e12_memo_.emplace(key, found);
    return found;
}

const std::vector<ExplanationEngine::BornerResult>& ExplanationEngine::borner(const Intervention& iv,
                                                                              const EventPtr& ev) {
    EvKey ek{iv, ev.get()};
    auto it = borner_.find(ek);
    if (it != borner_.end()) return it->second;

    std::vector<BornerResult> out;
    for (const PartialSetting& x : all_candidate_settings(causes_.model())) {
        bool e3 = false, e4 = false, e5 = true;
        for (const Context& u : k_) {
            bool ev_holds = causes_.event_holds(iv, u, ev);
            bool x_holds = x.holds_in(causes_.world(iv, u));
            e3 |= x_holds && ev_holds;
            e4 |= !x_holds && ev_holds;
            e5 &= x_holds && ev_holds;
        }
        if (!e3) continue;  // required by both variants
        auto s = borner_e12(iv, ev, x);
        if (!s) continue;
        BornerResult r;
        r.explanation = x;
        r.witness_s = *s;
        r.potential = e4;
        r.actual = e5;
        if (r.potential) {
            r.parsimonious = true;  // E6
            for (std::uint16_t sub = (x.mask - 1) & x.mask; sub && r.parsimonious;
                 sub = (sub - 1) & x.mask)
                if (borner_e12(iv, ev, restrict_setting(x, sub))) r.parsimonious = false;
        }
        out.push_back(r);
    }
    return borner_.emplace(ek, std::move(out)).first->second;
}

// --- spec-facing wrappers ---------------------------------------------------

namespace {

void check_inputs(const CausalModel& m, const EpistemicState& k, const Limits& limits) {
    if (!m.valid()) throw QueryError("model is invalid");
    if (k.empty()) throw QueryError("epistemic state must be non-empty");
    limits.check_model(m);
    limits.check_epistemic(k);
}

}  // namespace

std::vector<PartialSetting> enumerate_original_hp(const CausalModel& m, const EpistemicState& k,
                                                  const EventPtr& event, const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ExplanationEngine ee(ce, k);
    return ee.original_hp(PartialSetting{}, event);
}

std::vector<ExplanationResult> enumerate_modified_hp(const CausalModel& m, const EpistemicState& k,
                                                     const EventPtr& event, const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ExplanationEngine ee(ce, k);
    std::vector<ExplanationResult> out;
    for (const auto& r : ee.modified_hp(PartialSetting{}, event)) {
        ExplanationResult e;
        e.explanation = r.explanation;
        e.definition = ExplanationDef::ModifiedHp;
        e.non_trivial = r.non_trivial;
        for (const Context& u : k)
            if (r.explanation.holds_in(ce.world(PartialSetting{}, u)) &&
                ce.event_holds(PartialSetting{}, u, event))
                e.support.push_back(u);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ExplanationResult> enumerate_borner(const CausalModel& m, const EpistemicState& k,
                                                const EventPtr& event, const Limits& limits) {
    check_inputs(m, k, limits);
    CauseEngine ce(m);
    ExplanationEngine ee(ce, k);
    std::vector<ExplanationResult> out;
    for (const auto& r : ee.borner(PartialSetting{}, event)) {
        if (!r.potential && !r.actual) continue;
        ExplanationResult e;
        e.explanation = r.explanation;
        e.definition = ExplanationDef::Borner;
        e.potential = r.potential;
        e.actual = r.actual;
        e.parsimonious = r.parsimonious;
        e.witness_s = r.witness_s;
        for (const Context& u : k)
            if (r.explanation.holds_in(ce.world(PartialSetting{}, u)) &&
                ce.event_holds(PartialSetting{}, u, event))
                e.support.push_back(u);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace causalex
