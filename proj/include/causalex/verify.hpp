#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalex/random_models.hpp"

namespace causalex {

enum class TrialVerdict { Equal, Counterexample, ConditionNotMet };

struct TrialRecord {
    std::uint64_t trial = 0;
    int run = 0;  // 0: foil = !fact, 1: independent foil
    std::string model_digest;
    bool incompatible = false;
    TrialVerdict verdict = TrialVerdict::Equal;
    std::string detail;
};

struct EquivalenceReport {
    int variant = 1;
    std::uint64_t seed = 0;
    std::size_t runs = 0, equal = 0, counterexamples = 0, condition_not_met = 0;
    std::vector<TrialRecord> records;  // every run, in trial order

    bool clean() const { return counterexamples == 0; }
};

// Brute-force check of Theorem `variant` (1: Miller vs modular original HP,
// 2: modified HP incl. non-trivial flags, 3: Borner incl. potential, actual
// and parsimonious flags) over `trials` random models. Every "equal" verdict
// is a genuine two-route comparison; counterexamples carry both sets.
EquivalenceReport verify_theorems(const RandomModelParams& params, std::size_t trials, int variant);

// One equality comparison on explicit inputs; empty string when equal.
std::string compare_direct_vs_modular(const CausalModel& m, const EpistemicState& k,
                                      const FactFoil& ff, int variant);

}  // namespace causalex
