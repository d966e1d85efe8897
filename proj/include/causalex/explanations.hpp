#pragma once

#include <optional>
#include <vector>

#include "causalex/causes.hpp"
#include "causalex/model.hpp"

namespace causalex {

enum class ExplanationDef { OriginalHp, ModifiedHp, Borner };

struct ExplanationResult {
    PartialSetting explanation;
    ExplanationDef definition = ExplanationDef::OriginalHp;
    bool non_trivial = false;   // modified HP, EX4'
    bool potential = false;     // Borner, E1-E4
    bool actual = false;        // Borner, E1-E3 + E5
    bool parsimonious = false;  // Borner, E6 (flag on potential)
    std::optional<PartialSetting> witness_s;  // Borner: the S = s used (canonically smallest)
    std::vector<Context> support;  // contexts that triggered EX2 / EX1'(a) / E1-E2(a)
};

// Enumeration engine over one model, one epistemic state. Explanation sets
// are cached per (intervention, event) so the contrastive layer can ask for
// explanations in intervened models.
class ExplanationEngine {
public:
    ExplanationEngine(CauseEngine& causes, EpistemicState k);

    const EpistemicState& epistemic() const { return k_; }
    CauseEngine& cause_engine() { return causes_; }

    const std::vector<PartialSetting>& original_hp(const Intervention& iv, const EventPtr& ev);

    struct ModifiedResult {
        PartialSetting explanation;
        bool non_trivial = false;
    };
    const std::vector<ModifiedResult>& modified_hp(const Intervention& iv, const EventPtr& ev);

    struct BornerResult {
        PartialSetting explanation;
        bool potential = false, actual = false, parsimonious = false;
        PartialSetting witness_s;
    };
    // Every E1-E3 satisfier with its E4/E5/E6 flags; the potential and actual
    // explanations are the flagged subsets.
    const std::vector<BornerResult>& borner(const Intervention& iv, const EventPtr& ev);

    // Original-HP candidates that satisfy EX1-EX3 and occur somewhere in K;
    // full explanations additionally satisfy EX4 (the flag).
    struct OriginalResult {
        PartialSetting explanation;
        bool ex4 = false;
    };
    const std::vector<OriginalResult>& original_candidates(const Intervention& iv,
                                                           const EventPtr& ev);

    // Clause-level predicates, exposed for the contrastive layer.
    bool ex2_weak_everywhere(const Intervention& iv, const EventPtr& ev, const PartialSetting& x);
    bool ex1p(const Intervention& iv, const EventPtr& ev, const PartialSetting& x);
    // Borner E1-E2; when satisfiable returns the canonically smallest S = s.
    std::optional<PartialSetting> borner_e12(const Intervention& iv, const EventPtr& ev,
                                             const PartialSetting& x);

private:
    struct EvKey {
        PartialSetting iv;
        const Event* ev;
        auto operator<=>(const EvKey&) const = default;
    };

    CauseEngine& causes_;
    EpistemicState k_;
    std::map<EvKey, std::vector<OriginalResult>> original_candidates_;
    std::map<EvKey, std::vector<PartialSetting>> original_;
    std::map<EvKey, std::vector<ModifiedResult>> modified_;
    std::map<EvKey, std::vector<BornerResult>> borner_;
    std::map<std::pair<EvKey, PartialSetting>, bool> ex2_memo_, ex1p_memo_;
    std::map<std::pair<EvKey, PartialSetting>, std::optional<PartialSetting>> e12_memo_;
};

// --- spec-facing operations -------------------------------------------------

std::vector<PartialSetting> enumerate_original_hp(const CausalModel& m, const EpistemicState& k,
                                                  const EventPtr& event, const Limits& limits = {});

std::vector<ExplanationResult> enumerate_modified_hp(const CausalModel& m, const EpistemicState& k,
                                                     const EventPtr& event,
                                                     const Limits& limits = {});

std::vector<ExplanationResult> enumerate_borner(const CausalModel& m, const EpistemicState& k,
                                                const EventPtr& event, const Limits& limits = {});

}  // namespace causalex
