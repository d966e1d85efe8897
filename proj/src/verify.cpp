#include "causalex/verify.hpp"

#include <algorithm>
#include <sstream>

#include "causalex/contrastive.hpp"

namespace causalex {

namespace {

std::string render_pair_set(const CausalModel& m, const std::vector<ContrastivePair>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += render_pair(m, v[i]);
    }
    return s + "}";
}

std::string diff_sets(const CausalModel& m, const char* label,
                      std::vector<ContrastivePair> direct, std::vector<ContrastivePair> modular) {
    std::sort(direct.begin(), direct.end(), CanonicalLess{});
    std::sort(modular.begin(), modular.end(), CanonicalLess{});
    if (direct == modular) return "";
    std::ostringstream os;
    os << label << ": direct " << render_pair_set(m, direct) << " vs modular "
       << render_pair_set(m, modular);
    return os.str();
}

}  // namespace

std::string compare_direct_vs_modular(const CausalModel& m, const EpistemicState& k,
                                      const FactFoil& ff, int variant) {
    CauseEngine ce(m);
    ContrastiveEngine eng(ce, k, ff);
    switch (variant) {
        case 1:
            return diff_sets(m, "miller", eng.miller(), eng.modular(ModularBase::OriginalHp));
        case 2: {
            std::vector<ContrastivePair> all, non_trivial;
            for (const ContrastiveResult& r : eng.modified_hp_contrastive()) {
                all.push_back(r.pair);
                if (r.non_trivial) non_trivial.push_back(r.pair);
            }
            std::string d = diff_sets(m, "modified-hp", all, eng.modular(ModularBase::ModifiedHp));
            if (!d.empty()) return d;
            return diff_sets(m, "modified-hp non-trivial", non_trivial,
                             eng.modular(ModularBase::ModifiedHpNonTrivial));
        }
        case 3: {
            std::vector<ContrastivePair> pot, act, pars;
            for (const ContrastiveResult& r : eng.borner_contrastive()) {
                if (r.potential) pot.push_back(r.pair);
                if (r.actual) act.push_back(r.pair);
                if (r.parsimonious) pars.push_back(r.pair);
            }
            std::string d =
                diff_sets(m, "borner potential", pot, eng.modular(ModularBase::BornerPotential));
            if (!d.empty()) return d;
            d = diff_sets(m, "borner actual", act, eng.modular(ModularBase::BornerActual));
            if (!d.empty()) return d;
            return diff_sets(m, "borner parsimonious", pars,
                             eng.modular(ModularBase::BornerParsimonious));
        }
        default: throw QueryError("theorem variant must be 1, 2 or 3");
    }
}

EquivalenceReport verify_theorems(const RandomModelParams& params, std::size_t trials,
                                  int variant) {
    if (trials < 1) throw QueryError("at least one trial required");
    EquivalenceReport report;
    report.variant = variant;
    report.seed = params.seed;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomInstance inst = random_instance(params, t);
        const CausalModel& m = inst.doc.model;
        std::string digest = model_digest(inst.doc);
        for (int run = 0; run < 2; ++run) {
            FactFoil ff;
            ff.fact = inst.fact;
            ff.foil = run == 0 ? Event::negate(inst.fact) : inst.random_foil;
            TrialRecord rec;
            rec.trial = t;
            rec.run = run;
            rec.model_digest = digest;
            rec.incompatible = check_incompatibility(m, inst.k, ff);
            ++report.runs;
            if (!rec.incompatible) {
                rec.verdict = TrialVerdict::ConditionNotMet;
                ++report.condition_not_met;
            } else {
                std::string d = compare_direct_vs_modular(m, inst.k, ff, variant);
                if (d.empty()) {
                    rec.verdict = TrialVerdict::Equal;
                    ++report.equal;
                } else {
                    rec.verdict = TrialVerdict::Counterexample;
                    rec.detail = d;
                    ++report.counterexamples;
                }
            }
            report.records.push_back(std::move(rec));
        }
    }
    return report;
}

}  // namespace causalex
