#pragma once

#include <cstdint>
#include <random>

#include "causalex/dsl.hpp"
#include "causalex/model.hpp"

namespace causalex {

struct RandomModelParams {
    std::uint64_t seed = 0;
    int max_exogenous = 3;   // 1..3
    int max_endogenous = 4;  // 1..4
    int max_depth = 3;       // equation tree depth
};

struct RandomInstance {
    ModelDocument doc;  // model plus named fact/foil events
    EpistemicState k;
    EventPtr fact;
    EventPtr random_foil;  // independently drawn; may overlap the fact
};

// Deterministic per (params.seed, trial). Generated models are acyclic by
// construction (equations only reference exogenous variables and earlier
// endogenous variables) and always valid.
RandomInstance random_instance(const RandomModelParams& params, std::uint64_t trial);

}  // namespace causalex
