#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "causalex/causes.hpp"
#include "causalex/explanations.hpp"
#include "causalex/model.hpp"

namespace causalex {

// Aligned pair <X = x, X = x'> over a shared variable set.
struct ContrastivePair {
    std::uint16_t mask = 0;
    std::array<std::uint8_t, kMaxVariables> x{};   // fact values
    std::array<std::uint8_t, kMaxVariables> xp{};  // foil values

    void set(int var, std::uint8_t fact, std::uint8_t foil);
    bool empty() const { return mask == 0; }
    int size() const;
    PartialSetting fact() const;
    PartialSetting foil() const;
    bool differs_everywhere() const;

    // restriction to a submask of this pair's variables
    ContrastivePair restrict(std::uint16_t submask) const;
    // strict component-wise extension: this adds variables, agrees on shared
    bool extends(const ContrastivePair& other) const;

    friend bool operator==(const ContrastivePair& a, const ContrastivePair& b) = default;
    friend auto operator<=>(const ContrastivePair& a, const ContrastivePair& b) = default;
};

bool canonical_less(const ContrastivePair& a, const ContrastivePair& b);

// Functor form usable where the overload set cannot be named directly.
struct CanonicalLess {
    bool operator()(const PartialSetting& a, const PartialSetting& b) const {
        return canonical_less(a, b);
    }
    bool operator()(const ContrastivePair& a, const ContrastivePair& b) const {
        return canonical_less(a, b);
    }
};

struct FactFoil {
    EventPtr fact;  // phi
    EventPtr foil;  // psi
};

struct ContrastiveCauseWitness {
    PartialSetting fact_cause;  // cause of phi in (M, u)
    Intervention w;             // the W <- w of CC3
    PartialSetting foil_cause;  // cause of psi in (M_{W<-w}, u)
};

// Witness for an enumerated contrastive explanation: the containing
// conjunctions on both sides and the foil-side intervention.
struct PairWitness {
    PartialSetting fact_container;
    Intervention w;
    PartialSetting foil_container;
};

enum class ModularBase {
    OriginalHp,
    ModifiedHp,
    ModifiedHpNonTrivial,
    BornerPotential,
    BornerActual,
    BornerParsimonious,
};

// Container family behind each contrastive definition (the non-contrastive
// definition the pair components are parts of).
enum class ContainerFamily { Original, Modified, Borner };

struct ContrastiveResult {
    ContrastivePair pair;
    bool non_trivial = false;   // CH4
    bool potential = false;     // CB1-CB4
    bool actual = false;        // CB1-CB3 + CB5
    bool parsimonious = false;  // CB6
    PairWitness witness;
};

// Engine over one (model, K, fact, foil) query.
class ContrastiveEngine {
public:
    ContrastiveEngine(CauseEngine& causes, EpistemicState k, FactFoil ff);

    const FactFoil& events() const { return ff_; }
    const EpistemicState& epistemic() const { return k_; }

    // Contrastive causes at (M, u), built per choice: the restriction of a
    // (cause of phi, W <- w, cause of psi in the intervened model) choice to
    // the shared variables with differing values. Maximality (CC5) holds per
    // choice: nothing shared is discarded.
    const std::vector<ContrastivePair>& contrastive_causes(const Context& u, CauseKind kind);
    bool is_contrastive_cause(const Context& u, const ContrastivePair& pair, CauseKind kind,
                              ContrastiveCauseWitness* witness = nullptr);

    // Theorems 1-3 precondition: no plausible context satisfies both events.
    bool incompatible() const;

    std::vector<ContrastivePair> miller();                     // CE1-CE4
    std::vector<ContrastiveResult> modified_hp_contrastive();  // CH1-CH4
    std::vector<ContrastiveResult> borner_contrastive();       // CB1-CB6
    std::vector<ContrastivePair> modular(ModularBase base);    // CE1'-CE4'

    // Container pools per family: All holds every clause-satisfying
    // conjunction; the rest restrict by the family's uncertainty flags
    // (EX4 / EX4' / E4), the Borner actual clause (E5), and Borner
    // parsimony (E6).
    enum class Pool { All, Flag, Actual, Pars };

    // The inner-clause satisfaction behind each direct definition: both pair
    // components are parts of containing conjunctions from the family pool,
    // the foil side in some intervened model. Exposed so property tests can
    // re-verify minimality/maximality by exhaustive subset checks.
    bool is_candidate(ContainerFamily family, const ContrastivePair& p, Pool pool = Pool::All);
    std::optional<PairWitness> candidate_witness(ContainerFamily family, const ContrastivePair& p);

private:
    struct CCInfo {
        bool cc2 = false;
        std::vector<ContrastivePair> pairs;
        std::map<ContrastivePair, ContrastiveCauseWitness> witnesses;
    };
    struct Family {
        // containers: fact side in M, foil side per non-empty intervention
        std::vector<PartialSetting> fact_all;
        std::vector<std::pair<Intervention, PartialSetting>> foil_all;
        std::vector<PartialSetting> fact_flag;
        std::vector<std::pair<Intervention, PartialSetting>> foil_flag;
        std::vector<PartialSetting> fact_actual;
        std::vector<std::pair<Intervention, PartialSetting>> foil_actual;
        std::vector<PartialSetting> fact_pars;
        std::vector<std::pair<Intervention, PartialSetting>> foil_pars;
    };

    CCInfo& cc_info(const Context& u, CauseKind kind);
    Family& family(ContainerFamily f);

    // All non-empty difference pairs obtainable from the given container
    // sets, each mapped to a witness, plus the antichain of maximal ones.
    struct CandidateSet {
        std::map<ContrastivePair, PairWitness> all;
        std::vector<ContrastivePair> tops;
    };
    CandidateSet& candidates(ContainerFamily f, Pool pool);

    bool occurs_with_fact_not_foil(const ContrastivePair& p);  // CH3/CB3

    CauseEngine& causes_;
    ExplanationEngine expl_;
    EpistemicState k_;
    FactFoil ff_;
    std::map<std::pair<Context, CauseKind>, CCInfo> cc_;
    std::map<ContainerFamily, Family> families_;
    std::map<std::pair<ContainerFamily, Pool>, CandidateSet> candidates_;
    std::vector<Intervention> interventions_;  // every non-empty W <- w
};

// --- spec-facing operations -------------------------------------------------

struct ContrastiveCauseDecision {
    bool is_cause = false;
    std::optional<ContrastiveCauseWitness> witness;
};

ContrastiveCauseDecision is_contrastive_cause(const CausalModel& m, const Context& u,
                                              const ContrastivePair& pair, const FactFoil& ff,
                                              CauseKind kind, const Limits& limits = {});

std::vector<ContrastivePair> enumerate_miller(const CausalModel& m, const EpistemicState& k,
                                              const FactFoil& ff, const Limits& limits = {});

std::vector<ContrastiveResult> enumerate_modified_hp_contrastive(const CausalModel& m,
                                                                 const EpistemicState& k,
                                                                 const FactFoil& ff,
                                                                 const Limits& limits = {});

std::vector<ContrastiveResult> enumerate_borner_contrastive(const CausalModel& m,
                                                            const EpistemicState& k,
                                                            const FactFoil& ff,
                                                            const Limits& limits = {});

std::vector<ContrastivePair> enumerate_modular(const CausalModel& m, const EpistemicState& k,
                                               const FactFoil& ff, ModularBase base,
                                               const Limits& limits = {});

bool check_incompatibility(const CausalModel& m, const EpistemicState& k, const FactFoil& ff);

}  // namespace causalex
