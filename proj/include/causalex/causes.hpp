#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "causalex/model.hpp"

namespace causalex {

struct QueryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Soft complexity caps. Enumeration APIs refuse larger instances unless
// enforcement is switched off (CLI --no-limits, CAUSALEX_NO_LIMITS=1).
struct Limits {
    int max_endogenous = 10;
    int max_epistemic = 1024;
    bool enforce = true;

    void check_model(const CausalModel& m) const;
    void check_epistemic(const EpistemicState& k) const;
};

enum class CauseKind { Actual, WeakActual, Sufficient };

struct CauseWitness {
    CauseKind kind = CauseKind::Actual;
    // actual / weak-actual: (M,u) |= [X<-flip, W<-contingency] ~event
    PartialSetting contingency;  // W at its actual-world values
    PartialSetting flip;         // x' over the cause's variables
    // sufficient: SC2 anchor and SC3 coverage
    int part_var = -1;           // conjunct that is part of an actual cause
    PartialSetting part_cause;   // an actual cause containing that conjunct
    std::size_t contexts_checked = 0;
};

// Cause decision engine with per-query memoisation. All checks run against
// (M_iv, u) so the contrastive layer can query intervened models without
// materialising them. Events are keyed by pointer identity: hold the
// EventPtrs for the lifetime of the engine.
class CauseEngine {
public:
    explicit CauseEngine(const CausalModel& m);

    const CausalModel& model() const { return model_; }
    const std::vector<Context>& all_contexts() const { return contexts_; }

    World world(const Intervention& iv, const Context& u);
    bool event_holds(const Intervention& iv, const Context& u, const EventPtr& ev);

    bool is_cause(const Intervention& iv, const Context& u, const PartialSetting& candidate,
                  const EventPtr& ev, CauseKind kind, CauseWitness* witness = nullptr);

    // Canonically ordered, AC1/SC1-satisfying causes of the given kind.
    const std::vector<PartialSetting>& causes(const Intervention& iv, const Context& u,
                                              const EventPtr& ev, CauseKind kind);

    // Union of the actual causes' variable masks (their values are the
    // actual-world values); conjunct (i, world value) is "part of" an actual
    // cause iff bit i is set.
    std::uint16_t parts_mask(const Intervention& iv, const Context& u, const EventPtr& ev);

    // SC3: (M_iv, u') |= [X<-x] ev for every context u'.
    bool sc3(const Intervention& iv, const PartialSetting& xset, const EventPtr& ev);

private:
    struct Key {
        PartialSetting iv;
        Context u;
        const Event* ev;
        auto operator<=>(const Key&) const = default;
    };
    struct Info {
        World world;
        bool event_holds = false;
        std::map<std::uint16_t, bool> weak;  // candidate mask (world values) -> AC1&AC2
        std::optional<std::uint16_t> parts;  // union of actual-cause masks
        std::map<CauseKind, std::vector<PartialSetting>> enumerated;
    };

    Info& info(const Intervention& iv, const Context& u, const EventPtr& ev);
    bool weak_mask(Info& in, const Intervention& iv, const Context& u, const EventPtr& ev,
                   std::uint16_t mask, CauseWitness* witness);
    bool actual_mask(Info& in, const Intervention& iv, const Context& u, const EventPtr& ev,
                     std::uint16_t mask, CauseWitness* witness);
    bool sufficient_mask(Info& in, const Intervention& iv, const Context& u, const EventPtr& ev,
                         std::uint16_t mask, CauseWitness* witness);
    std::uint16_t compute_parts(Info& in, const Intervention& iv, const Context& u,
                                const EventPtr& ev);

    const CausalModel& model_;
    std::vector<Context> contexts_;
    std::map<Key, Info> infos_;
    std::map<std::pair<PartialSetting, const Event*>, bool> sc3_;
};

// --- spec-facing operations ------------------------------------------------

struct CauseDecision {
    bool is_cause = false;
    std::optional<CauseWitness> witness;
};

CauseDecision is_cause(const CausalModel& m, const Context& u, const PartialSetting& candidate,
                       const EventPtr& event, CauseKind kind, const Limits& limits = {});

std::vector<PartialSetting> enumerate_causes(const CausalModel& m, const Context& u,
                                             const EventPtr& event, CauseKind kind,
                                             const Limits& limits = {});

bool is_part_of_cause(const CausalModel& m, const Context& u, int var, std::uint8_t val,
                      const EventPtr& event, CauseKind kind, const Limits& limits = {});

// All value assignments over every non-empty subset of the endogenous
// variables, in canonical order. Shared by the enumeration modules.
std::vector<PartialSetting> all_candidate_settings(const CausalModel& m);

// All settings over subsets of `mask`, including the empty one, canonical order.
std::vector<PartialSetting> settings_within(const CausalModel& m, std::uint16_t mask);

}  // namespace causalex
