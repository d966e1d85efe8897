#include "causalex/causes.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <functional>

namespace causalex {

void Limits::check_model(const CausalModel& m) const {
    if (!enforce) return;
    if (static_cast<int>(m.endo_indices().size()) > max_endogenous)
        throw QueryError("model exceeds the soft cap of " + std::to_string(max_endogenous) +
                         " endogenous variables (pass --no-limits to override)");
}

void Limits::check_epistemic(const EpistemicState& k) const {
    if (!enforce) return;
    if (static_cast<int>(k.size()) > max_epistemic)
        throw QueryError("epistemic state exceeds the soft cap of " + std::to_string(max_epistemic) +
                         " contexts (pass --no-limits to override)");
}

namespace {

void require_valid(const CausalModel& m) {
    if (!m.valid()) throw QueryError("model is invalid: " + m.validation().violations.front().message);
}

// Iterates all value assignments over the variables in `mask`, calling fn
// with the setting; stops early when fn returns false.
template <typename Fn>
void for_each_setting(const CausalModel& m, std::uint16_t mask, Fn&& fn) {
    std::vector<int> vars;
    for (std::uint16_t r = mask; r;) {
        int i = std::countr_zero(r);
        r &= std::uint16_t(r - 1);
        vars.push_back(i);
    }
    PartialSetting s{};
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == vars.size()) return fn(s);
        int i = vars[k];
        for (std::size_t d = 0; d < m.var(i).domain.size(); ++d) {
            s.set(i, static_cast<std::uint8_t>(d));
            if (!rec(k + 1)) return false;
        }
        s.unset(i);
        return true;
    };
    rec(0);
}

PartialSetting restrict_to(const World& w, std::uint16_t mask) {
    PartialSetting s{};
    for (std::uint16_t r = mask; r;) {
        int i = std::countr_zero(r);
        r &= std::uint16_t(r - 1);
        s.set(i, w.idx[static_cast<std::size_t>(i)]);
    }
    return s;
}

}  // namespace

CauseEngine::CauseEngine(const CausalModel& m) : model_(m), contexts_(enumerate_contexts(m)) {
    require_valid(m);
}

CauseEngine::Info& CauseEngine::info(const Intervention& iv, const Context& u, const EventPtr& ev) {
    Key key{iv, u, ev.get()};
    auto it = infos_.find(key);
    if (it != infos_.end()) return it->second;
    Info in;
    in.world = solve_with(model_, iv, u);
    in.event_holds = eval_event(*ev, in.world);
    return infos_.emplace(key, std::move(in)).first->second;
}

World CauseEngine::world(const Intervention& iv, const Context& u) {
    return solve_with(model_, iv, u);
}

bool CauseEngine::event_holds(const Intervention& iv, const Context& u, const EventPtr& ev) {
    return info(iv, u, ev).event_holds;
}

// AC2: some W within V \ X, held at its actual values, and some setting x'
// of X defeat the event.
bool CauseEngine::weak_mask(Info& in, const Intervention& iv, const Context& u, const EventPtr& ev,
                            std::uint16_t mask, CauseWitness* witness) {
    if (!in.event_holds) return false;  // AC1
    auto memo = in.weak.find(mask);
    if (memo != in.weak.end() && !witness) return memo->second;

    std::uint16_t rest = model_.endo_mask() & std::uint16_t(~mask);
    bool found = false;
    PartialSetting found_w, found_flip;
    // enumerate W as submasks of rest, empty set first
    std::uint16_t wmask = 0;
    while (true) {
        PartialSetting contingency = restrict_to(in.world, wmask);
        for_each_setting(model_, mask, [&](const PartialSetting& flip) {
            PartialSetting total = merge_override(iv, merge_override(contingency, flip));
            World alt = solve_with(model_, total, u);
            if (!eval_event(*ev, alt)) {
                found = true;
                found_w = contingency;
                found_flip = flip;
                return false;
            }
            return true;
        });
        if (found) break;
        if (wmask == rest) break;
        wmask = std::uint16_t((wmask - rest) & rest);  // next submask of rest
    }
    in.weak[mask] = found;
    if (found && witness) {
        witness->contingency = found_w;
        witness->flip = found_flip;
    }
    return found;
}

bool CauseEngine::actual_mask(Info& in, const Intervention& iv, const Context& u, const EventPtr& ev,
                              std::uint16_t mask, CauseWitness* witness) {
    if (!weak_mask(in, iv, u, ev, mask, witness)) return false;
    // AC3: no proper non-empty sub-conjunction satisfies AC1-AC2
    for (std::uint16_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask)
        if (weak_mask(in, iv, u, ev, sub, nullptr)) return false;
    return true;
}

std::uint16_t CauseEngine::compute_parts(Info& in, const Intervention& iv, const Context& u,
                                         const EventPtr& ev) {
    if (in.parts) return *in.parts;
    std::uint16_t parts = 0;
    std::uint16_t endo = model_.endo_mask();
    for (std::uint16_t mask = endo; mask; mask = (mask - 1) & endo) {
        if ((parts & mask) == mask) continue;  // cannot add new conjuncts
        if (actual_mask(in, iv, u, ev, mask, nullptr)) parts |= mask;
    }
    in.parts = parts;
    return parts;
}

bool CauseEngine::sc3(const Intervention& iv, const PartialSetting& xset, const EventPtr& ev) {
    auto key = std::make_pair(merge_override(iv, xset), ev.get());
    auto it = sc3_.find(key);
    if (it != sc3_.end()) return it->second;
    bool ok = true;
    for (const Context& u : contexts_) {
        if (!eval_event(*ev, solve_with(model_, key.first, u))) {
            ok = false;
            break;
        }
    }
    sc3_.emplace(key, ok);
    return ok;
}

bool CauseEngine::sufficient_mask(Info& in, const Intervention& iv, const Context& u,
                                  const EventPtr& ev, std::uint16_t mask, CauseWitness* witness) {
    if (!in.event_holds) return false;  // SC1
    std::uint16_t parts = compute_parts(in, iv, u, ev);
    auto sc123 = [&](std::uint16_t m) {
        if ((m & parts) == 0) return false;                         // SC2
        return sc3(iv, restrict_to(in.world, m), ev);               // SC3
    };
    if (!sc123(mask)) return false;
    for (std::uint16_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask)
        if (sc123(sub)) return false;  // SC4
    if (witness) {
        std::uint16_t anchored = mask & parts;
        witness->part_var = std::countr_zero(anchored);
        // find one actual cause containing the anchor conjunct
        std::uint16_t endo = model_.endo_mask();
        for (std::uint16_t m = endo; m; m = (m - 1) & endo) {
            if (((m >> witness->part_var) & 1u) && actual_mask(in, iv, u, ev, m, nullptr)) {
                witness->part_cause = restrict_to(in.world, m);
                break;
            }
        }
        witness->contexts_checked = contexts_.size();
    }
    return true;
}

bool CauseEngine::is_cause(const Intervention& iv, const Context& u, const PartialSetting& candidate,
                           const EventPtr& ev, CauseKind kind, CauseWitness* witness) {
    if (candidate.empty()) throw QueryError("cause candidates must be non-empty");
    if ((candidate.mask & ~model_.endo_mask()) != 0)
        throw QueryError("cause candidates range over endogenous variables");
    Info& in = info(iv, u, ev);
    if (!candidate.holds_in(in.world)) return false;  // AC1 / SC1
    if (witness) witness->kind = kind;
    switch (kind) {
        case CauseKind::WeakActual: return weak_mask(in, iv, u, ev, candidate.mask, witness);
        case CauseKind::Actual: return actual_mask(in, iv, u, ev, candidate.mask, witness);
        case CauseKind::Sufficient: return sufficient_mask(in, iv, u, ev, candidate.mask, witness);
    }
    return false;
}

const std::vector<PartialSetting>& CauseEngine::causes(const Intervention& iv, const Context& u,
                                                       const EventPtr& ev, CauseKind kind) {
    Info& in = info(iv, u, ev);
    auto it = in.enumerated.find(kind);
    if (it != in.enumerated.end()) return it->second;

    std::vector<PartialSetting> out;
    if (in.event_holds) {
        std::uint16_t endo = model_.endo_mask();
        for (std::uint16_t mask = endo; mask; mask = (mask - 1) & endo) {
            bool hit = false;
            switch (kind) {
                case CauseKind::WeakActual: hit = weak_mask(in, iv, u, ev, mask, nullptr); break;
                case CauseKind::Actual: hit = actual_mask(in, iv, u, ev, mask, nullptr); break;
                case CauseKind::Sufficient: hit = sufficient_mask(in, iv, u, ev, mask, nullptr); break;
            }
            if (hit) out.push_back(restrict_to(in.world, mask));
        }
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return in.enumerated.emplace(kind, std::move(out)).first->second;
}

std::uint16_t CauseEngine::parts_mask(const Intervention& iv, const Context& u, const EventPtr& ev) {
    Info& in = info(iv, u, ev);
    if (!in.event_holds) return 0;
    return compute_parts(in, iv, u, ev);
}

// --- spec-facing wrappers ---------------------------------------------------

CauseDecision is_cause(const CausalModel& m, const Context& u, const PartialSetting& candidate,
                       const EventPtr& event, CauseKind kind, const Limits& limits) {
    require_valid(m);
    limits.check_model(m);
    CauseEngine eng(m);
    CauseWitness w;
    bool ok = eng.is_cause(PartialSetting{}, u, candidate, event, kind, &w);
    CauseDecision d;
    d.is_cause = ok;
    if (ok) d.witness = w;
    return d;
}

std::vector<PartialSetting> enumerate_causes(const CausalModel& m, const Context& u,
                                             const EventPtr& event, CauseKind kind,
                                             const Limits& limits) {
    require_valid(m);
    limits.check_model(m);
    CauseEngine eng(m);
    return eng.causes(PartialSetting{}, u, event, kind);
}

bool is_part_of_cause(const CausalModel& m, const Context& u, int var, std::uint8_t val,
                      const EventPtr& event, CauseKind kind, const Limits& limits) {
    require_valid(m);
    limits.check_model(m);
    CauseEngine eng(m);
    for (const PartialSetting& c : eng.causes(PartialSetting{}, u, event, kind))
        if (c.has(var) && c.at(var) == val) return true;
    return false;
}

std::vector<PartialSetting> all_candidate_settings(const CausalModel& m) {
    std::vector<PartialSetting> out;
    std::uint16_t endo = m.endo_mask();
    for (std::uint16_t mask = endo; mask; mask = (mask - 1) & endo) {
        for_each_setting(m, mask, [&](const PartialSetting& s) {
            out.push_back(s);
            return true;
        });
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::vector<PartialSetting> settings_within(const CausalModel& m, std::uint16_t mask) {
    std::vector<PartialSetting> out;
    out.push_back(PartialSetting{});
    for (std::uint16_t sub = mask; sub; sub = (sub - 1) & mask) {
        for_each_setting(m, sub, [&](const PartialSetting& s) {
            out.push_back(s);
            return true;
        });
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

}  // namespace causalex
