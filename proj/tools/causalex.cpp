// causalex: finite structural-equation models with exhaustive enumeration of
// causes, explanations, and contrastive explanations.
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "causalex/contrastive.hpp"
#include "causalex/dsl.hpp"
#include "causalex/verify.hpp"

using nlohmann::ordered_json;
using namespace causalex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // counterexample or golden mismatch
constexpr int kExitInput = 2;    // parse/validation error

struct Options {
    std::string format = "text";
    bool no_limits = false;

    Limits limits() const {
        Limits l;
        if (no_limits || std::getenv("CAUSALEX_NO_LIMITS")) l.enforce = false;
        return l;
    }
    bool structured() const { return format == "structured"; }
};

ModelDocument load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QueryError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ParseResult res = parse_model(ss.str());
    if (!res.ok()) {
        for (const Diagnostic& d : res.diagnostics)
            std::cerr << path << ":" << format_diagnostic(d) << "\n";
        std::exit(kExitInput);
    }
    return std::move(*res.doc);
}

EventPtr load_event(const ModelDocument& doc, const std::string& text) {
    auto it = doc.events.find(text);
    if (it != doc.events.end()) return it->second;
    EventParse ep = parse_event(text, doc.model);
    if (!ep.ok()) {
        for (const Diagnostic& d : ep.diagnostics)
            std::cerr << "event '" << text << "': " << format_diagnostic(d) << "\n";
        std::exit(kExitInput);
    }
    return ep.event;
}

Context load_context(const ModelDocument& doc, const std::string& text) {
    std::string err;
    auto c = parse_context(text, doc.model, &err);
    if (!c) {
        std::cerr << "context '" << text << "': " << err << "\n";
        std::exit(kExitInput);
    }
    return *c;
}

ordered_json setting_json(const CausalModel& m, const PartialSetting& s) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < m.var_count(); ++i) {
        if (!s.has(i)) continue;
        ordered_json one;
        one["var"] = m.var(i).name;
        one["value"] = value_to_string(m.var(i).domain[s.at(i)]);
        arr.push_back(one);
    }
    return arr;
}

ordered_json pair_json(const CausalModel& m, const ContrastivePair& p) {
    ordered_json o;
    o["fact"] = setting_json(m, p.fact());
    o["foil"] = setting_json(m, p.foil());
    o["text"] = render_pair(m, p);
    return o;
}

ordered_json context_json(const CausalModel& m, const Context& u) {
    return setting_json(m, u);
}

ordered_json result_header(const ModelDocument& doc, const std::string& command) {
    ordered_json o;
    o["version"] = 1;
    o["command"] = command;
    o["model_digest"] = model_digest(doc);
    return o;
}

void emit(const ordered_json& o) { std::cout << o.dump(2) << "\n"; }

CauseKind parse_kind(const std::string& s) {
    if (s == "actual") return CauseKind::Actual;
    if (s == "weak") return CauseKind::WeakActual;
    if (s == "sufficient") return CauseKind::Sufficient;
    throw QueryError("unknown cause kind '" + s + "'");
}

ModularBase parse_base(const std::string& s) {
    if (s == "original-hp") return ModularBase::OriginalHp;
    if (s == "modified-hp") return ModularBase::ModifiedHp;
    if (s == "modified-hp-nontrivial") return ModularBase::ModifiedHpNonTrivial;
    if (s == "borner-potential") return ModularBase::BornerPotential;
    if (s == "borner-actual") return ModularBase::BornerActual;
    if (s == "borner-parsimonious") return ModularBase::BornerParsimonious;
    throw QueryError("unknown modular base '" + s + "'");
}

// ---------------------------------------------------------------------------
// golden corpus
// ---------------------------------------------------------------------------

std::vector<PartialSetting> settings_from_json(const CausalModel& m, const ordered_json& arr) {
    std::vector<PartialSetting> out;
    for (const auto& item : arr) {
        PartialSetting s{};
        for (const auto& one : item) {
            int vi = m.var_index(one.at("var").get<std::string>());
            if (vi < 0) throw QueryError("unknown variable in expected file");
            std::string val = one.at("value").get<std::string>();
            bool found = false;
            for (std::size_t d = 0; d < m.var(vi).domain.size(); ++d)
                if (value_to_string(m.var(vi).domain[d]) == val) {
                    s.set(vi, static_cast<std::uint8_t>(d));
                    found = true;
                }
            if (!found) throw QueryError("bad value in expected file");
        }
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), CanonicalLess{});
    return out;
}

std::vector<ContrastivePair> pairs_from_json(const CausalModel& m, const ordered_json& arr) {
    std::vector<ContrastivePair> out;
    for (const auto& item : arr) {
        auto fact = settings_from_json(m, ordered_json::array({item.at("fact")}));
        auto foil = settings_from_json(m, ordered_json::array({item.at("foil")}));
        ContrastivePair p{};
        for (std::uint16_t mm = fact[0].mask; mm;) {
            int i = std::countr_zero(mm);
            mm &= std::uint16_t(mm - 1);
            p.set(i, fact[0].at(i), foil[0].at(i));
        }
        out.push_back(p);
    }
    std::sort(out.begin(), out.end(), CanonicalLess{});
    return out;
}

template <typename T, typename Less>
bool same_set(std::vector<T> a, std::vector<T> b, Less less) {
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    return a == b;
}

int run_golden(const std::string& dir, const Options& opt) {
    namespace fs = std::filesystem;
    int failures = 0, fixtures = 0;
    std::vector<fs::path> expected_files;
    for (const auto& entry : fs::directory_iterator(fs::path(dir) / "expected"))
        if (entry.path().extension() == ".json") expected_files.push_back(entry.path());
    std::sort(expected_files.begin(), expected_files.end());
    if (expected_files.empty()) {
        std::cerr << "no fixtures found under " << dir << "\n";
        return kExitInput;
    }
    for (const fs::path& exp_path : expected_files) {
        std::ifstream in(exp_path);
        ordered_json exp = ordered_json::parse(in);
        std::string model_file = exp.at("model").get<std::string>();
        ModelDocument doc = load_model((fs::path(dir) / model_file).string());
        const CausalModel& m = doc.model;
        EpistemicState k = parse_epistemic_arg(doc, exp.at("epistemic").get<std::string>());
        bool ok = true;
        std::string what;

        for (const auto& check : exp.at("checks")) {
            std::string def = check.at("definition").get<std::string>();
            if (def == "original-hp") {
                EventPtr ev = load_event(doc, check.at("event").get<std::string>());
                auto got = enumerate_original_hp(m, k, ev, opt.limits());
                auto want = settings_from_json(m, check.at("explanations"));
                if (!same_set(got, want, CanonicalLess{})) {
                    ok = false;
                    what = def;
                }
            } else if (def == "modified-hp") {
                EventPtr ev = load_event(doc, check.at("event").get<std::string>());
                auto got = enumerate_modified_hp(m, k, ev, opt.limits());
                std::vector<PartialSetting> all, non_trivial;
                for (const auto& r : got) {
                    all.push_back(r.explanation);
                    if (r.non_trivial) non_trivial.push_back(r.explanation);
                }
                if (!same_set(all, settings_from_json(m, check.at("explanations")),
                              CanonicalLess{}) ||
                    !same_set(non_trivial, settings_from_json(m, check.at("non_trivial")),
                              CanonicalLess{})) {
                    ok = false;
                    what = def;
                }
            } else if (def == "borner") {
                EventPtr ev = load_event(doc, check.at("event").get<std::string>());
                auto got = enumerate_borner(m, k, ev, opt.limits());
                std::vector<PartialSetting> pot, act, pars;
                for (const auto& r : got) {
                    if (r.potential) pot.push_back(r.explanation);
                    if (r.actual) act.push_back(r.explanation);
                    if (r.parsimonious) pars.push_back(r.explanation);
                }
                if (!same_set(pot, settings_from_json(m, check.at("potential")), CanonicalLess{}) ||
                    !same_set(act, settings_from_json(m, check.at("actual")), CanonicalLess{}) ||
                    !same_set(pars, settings_from_json(m, check.at("parsimonious")),
                              CanonicalLess{})) {
                    ok = false;
                    what = def;
                }
            } else if (def == "miller" || def == "modified-hp-contrastive" ||
                       def == "borner-contrastive") {
                FactFoil ff{load_event(doc, check.at("fact").get<std::string>()),
                            load_event(doc, check.at("foil").get<std::string>())};
                auto less = [](const ContrastivePair& a, const ContrastivePair& b) {
                    return canonical_less(a, b);
                };
                if (def == "miller") {
                    auto got = enumerate_miller(m, k, ff, opt.limits());
                    if (!same_set(got, pairs_from_json(m, check.at("pairs")), less)) {
                        ok = false;
                        what = def;
                    }
                } else if (def == "modified-hp-contrastive") {
                    auto got = enumerate_modified_hp_contrastive(m, k, ff, opt.limits());
                    std::vector<ContrastivePair> all, nt;
                    for (const auto& r : got) {
                        all.push_back(r.pair);
                        if (r.non_trivial) nt.push_back(r.pair);
                    }
                    if (!same_set(all, pairs_from_json(m, check.at("pairs")), less) ||
                        !same_set(nt, pairs_from_json(m, check.at("non_trivial")), less)) {
                        ok = false;
                        what = def;
                    }
                } else {
                    auto got = enumerate_borner_contrastive(m, k, ff, opt.limits());
                    std::vector<ContrastivePair> pot, act, pars;
                    for (const auto& r : got) {
                        if (r.potential) pot.push_back(r.pair);
                        if (r.actual) act.push_back(r.pair);
                        if (r.parsimonious) pars.push_back(r.pair);
                    }
                    if (!same_set(pot, pairs_from_json(m, check.at("potential")), less) ||
                        !same_set(act, pairs_from_json(m, check.at("actual")), less) ||
                        !same_set(pars, pairs_from_json(m, check.at("parsimonious")), less)) {
                        ok = false;
                        what = def;
                    }
                }
            } else {
                throw QueryError("unknown check definition '" + def + "'");
            }
        }
        ++fixtures;
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << " " << exp_path.filename().string();
        if (!ok) std::cout << " (" << what << ")";
        std::cout << "\n";
    }
    std::cout << fixtures - failures << "/" << fixtures << " fixtures passed\n";
    return failures ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite structural-equation models: causes, explanations, contrastive explanations"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format: text|structured")
        ->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--no-limits", opt.no_limits, "disable the soft complexity caps");

    std::string model_file, context_str, event_str, kind_str = "actual";
    std::string epistemic_str = "all", definition, fact_str, foil_str, corpus_dir;
    std::uint64_t seed = 42;
    std::size_t trials = 200;
    int variant = 1;

    auto* validate = app.add_subcommand("validate", "validate a model file");
    validate->add_option("model", model_file)->required();

    auto* solve_cmd = app.add_subcommand("solve", "solve a model at a context");
    solve_cmd->add_option("model", model_file)->required();
    solve_cmd->add_option("--context", context_str, "e.g. (U_L=1, U_MD=0)")->required();

    auto* causes_cmd = app.add_subcommand("causes", "enumerate causes of an event");
    causes_cmd->add_option("model", model_file)->required();
    causes_cmd->add_option("--kind", kind_str, "actual|weak|sufficient");
    causes_cmd->add_option("--context", context_str)->required();
    causes_cmd->add_option("--event", event_str)->required();

    auto* explain_cmd = app.add_subcommand("explain", "enumerate non-contrastive explanations");
    explain_cmd->add_option("model", model_file)->required();
    explain_cmd->add_option("--definition", definition, "original-hp|modified-hp|borner")
        ->required();
    explain_cmd->add_option("--epistemic", epistemic_str, "name, 'all', or a constraint");
    explain_cmd->add_option("--event", event_str)->required();

    auto* contrast_cmd = app.add_subcommand("contrast", "enumerate contrastive explanations");
    contrast_cmd->add_option("model", model_file)->required();
    contrast_cmd
        ->add_option("--definition", definition, "miller|modified-hp|borner|modular:<base>")
        ->required();
    contrast_cmd->add_option("--epistemic", epistemic_str);
    contrast_cmd->add_option("--fact", fact_str)->required();
    contrast_cmd->add_option("--foil", foil_str)->required();

    auto* verify_cmd = app.add_subcommand("verify-theorems", "compare direct vs modular sets");
    verify_cmd->add_option("--variant", variant, "1|2|3")->check(CLI::Range(1, 3));
    verify_cmd->add_option("--trials", trials);
    verify_cmd->add_option("--seed", seed);

    auto* golden_cmd = app.add_subcommand("golden", "run the golden fixture corpus");
    golden_cmd->add_option("corpus", corpus_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            std::ifstream in(model_file);
            if (!in) throw QueryError("cannot open '" + model_file + "'");
            std::stringstream ss;
            ss << in.rdbuf();
            ParseResult res = parse_model(ss.str());
            if (!res.ok()) {
                for (const Diagnostic& d : res.diagnostics)
                    std::cerr << model_file << ":" << format_diagnostic(d) << "\n";
                return kExitInput;
            }
            if (opt.structured()) {
                ordered_json o = result_header(*res.doc, "validate");
                o["ok"] = true;
                emit(o);
            } else {
                std::cout << "ok\n";
            }
            return kExitOk;
        }

        if (solve_cmd->parsed()) {
            ModelDocument doc = load_model(model_file);
            Context u = load_context(doc, context_str);
            World w = solve(doc.model, u);
            if (opt.structured()) {
                ordered_json o = result_header(doc, "solve");
                ordered_json vars = ordered_json::array();
                for (int i = 0; i < doc.model.var_count(); ++i) {
                    ordered_json one;
                    one["var"] = doc.model.var(i).name;
                    one["value"] =
                        value_to_string(doc.model.var(i).domain[w.idx[static_cast<std::size_t>(i)]]);
                    vars.push_back(one);
                }
                o["world"] = vars;
                emit(o);
            } else {
                std::cout << render_world(doc.model, w) << "\n";
            }
            return kExitOk;
        }

        if (causes_cmd->parsed()) {
            ModelDocument doc = load_model(model_file);
            Context u = load_context(doc, context_str);
            EventPtr ev = load_event(doc, event_str);
            auto out = enumerate_causes(doc.model, u, ev, parse_kind(kind_str), opt.limits());
            if (opt.structured()) {
                ordered_json o = result_header(doc, "causes");
                o["kind"] = kind_str;
                o["context"] = context_json(doc.model, u);
                ordered_json arr = ordered_json::array();
                for (const auto& s : out) arr.push_back(setting_json(doc.model, s));
                o["causes"] = arr;
                emit(o);
            } else {
                for (const auto& s : out) std::cout << render_setting(doc.model, s) << "\n";
            }
            return kExitOk;
        }

        if (explain_cmd->parsed()) {
            ModelDocument doc = load_model(model_file);
            EpistemicState k = parse_epistemic_arg(doc, epistemic_str);
            EventPtr ev = load_event(doc, event_str);
            const CausalModel& m = doc.model;
            ordered_json o = result_header(doc, "explain");
            o["definition"] = definition;
            if (definition == "original-hp") {
                auto out = enumerate_original_hp(m, k, ev, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& s : out) arr.push_back(setting_json(m, s));
                    o["explanations"] = arr;
                    emit(o);
                } else {
                    for (const auto& s : out) std::cout << render_setting(m, s) << "\n";
                }
            } else if (definition == "modified-hp") {
                auto out = enumerate_modified_hp(m, k, ev, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& r : out) {
                        ordered_json one;
                        one["explanation"] = setting_json(m, r.explanation);
                        one["text"] = render_setting(m, r.explanation);
                        one["non_trivial"] = r.non_trivial;
                        arr.push_back(one);
                    }
                    o["explanations"] = arr;
                    emit(o);
                } else {
                    for (const auto& r : out)
                        std::cout << render_setting(m, r.explanation)
                                  << (r.non_trivial ? "  [non-trivial]" : "") << "\n";
                }
            } else if (definition == "borner") {
                auto out = enumerate_borner(m, k, ev, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& r : out) {
                        ordered_json one;
                        one["explanation"] = setting_json(m, r.explanation);
                        one["text"] = render_setting(m, r.explanation);
                        one["potential"] = r.potential;
                        one["actual"] = r.actual;
                        one["parsimonious"] = r.parsimonious;
                        if (r.witness_s)
                            one["witness_s"] = setting_json(m, *r.witness_s);
                        arr.push_back(one);
                    }
                    o["explanations"] = arr;
                    emit(o);
                } else {
                    for (const auto& r : out) {
                        std::cout << render_setting(m, r.explanation);
                        if (r.potential) std::cout << "  [potential" << (r.parsimonious ? ", parsimonious]" : "]");
                        if (r.actual) std::cout << "  [actual]";
                        std::cout << "\n";
                    }
                }
            } else {
                throw QueryError("unknown definition '" + definition + "'");
            }
            return kExitOk;
        }

        if (contrast_cmd->parsed()) {
            ModelDocument doc = load_model(model_file);
            EpistemicState k = parse_epistemic_arg(doc, epistemic_str);
            FactFoil ff{load_event(doc, fact_str), load_event(doc, foil_str)};
            const CausalModel& m = doc.model;
            ordered_json o = result_header(doc, "contrast");
            o["definition"] = definition;
            if (definition == "miller") {
                auto out = enumerate_miller(m, k, ff, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& p : out) arr.push_back(pair_json(m, p));
                    o["pairs"] = arr;
                    emit(o);
                } else {
                    for (const auto& p : out) std::cout << render_pair(m, p) << "\n";
                }
            } else if (definition == "modified-hp") {
                auto out = enumerate_modified_hp_contrastive(m, k, ff, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& r : out) {
                        ordered_json one = pair_json(m, r.pair);
                        one["non_trivial"] = r.non_trivial;
                        arr.push_back(one);
                    }
                    o["pairs"] = arr;
                    emit(o);
                } else {
                    for (const auto& r : out)
                        std::cout << render_pair(m, r.pair)
                                  << (r.non_trivial ? "  [non-trivial]" : "") << "\n";
                }
            } else if (definition == "borner") {
                auto out = enumerate_borner_contrastive(m, k, ff, opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& r : out) {
                        ordered_json one = pair_json(m, r.pair);
                        one["potential"] = r.potential;
                        one["actual"] = r.actual;
                        one["parsimonious"] = r.parsimonious;
                        arr.push_back(one);
                    }
                    o["pairs"] = arr;
                    emit(o);
                } else {
                    for (const auto& r : out) {
                        std::cout << render_pair(m, r.pair);
                        if (r.potential)
                            std::cout << "  [potential" << (r.parsimonious ? ", parsimonious]" : "]");
                        if (r.actual) std::cout << "  [actual]";
                        std::cout << "\n";
                    }
                }
            } else if (definition.rfind("modular:", 0) == 0) {
                auto out = enumerate_modular(m, k, ff, parse_base(definition.substr(8)),
                                             opt.limits());
                if (opt.structured()) {
                    ordered_json arr = ordered_json::array();
                    for (const auto& p : out) arr.push_back(pair_json(m, p));
                    o["pairs"] = arr;
                    emit(o);
                } else {
                    for (const auto& p : out) std::cout << render_pair(m, p) << "\n";
                }
            } else {
                throw QueryError("unknown definition '" + definition + "'");
            }
            return kExitOk;
        }

        if (verify_cmd->parsed()) {
            RandomModelParams params;
            params.seed = seed;
            EquivalenceReport rep = verify_theorems(params, trials, variant);
            if (opt.structured()) {
                ordered_json o;
                o["version"] = 1;
                o["command"] = "verify-theorems";
                o["variant"] = rep.variant;
                o["seed"] = rep.seed;
                o["runs"] = rep.runs;
                o["equal"] = rep.equal;
                o["condition_not_met"] = rep.condition_not_met;
                o["counterexamples"] = rep.counterexamples;
                ordered_json arr = ordered_json::array();
                for (const auto& r : rep.records) {
                    if (r.verdict != TrialVerdict::Counterexample) continue;
                    ordered_json one;
                    one["trial"] = r.trial;
                    one["run"] = r.run;
                    one["model_digest"] = r.model_digest;
                    one["detail"] = r.detail;
                    arr.push_back(one);
                }
                o["counterexample_records"] = arr;
                emit(o);
            } else {
                std::cout << "variant " << rep.variant << ", seed " << rep.seed << ": " << rep.runs
                          << " runs, " << rep.equal << " equal, " << rep.condition_not_met
                          << " condition-not-met, " << rep.counterexamples << " counterexamples\n";
                for (const auto& r : rep.records)
                    if (r.verdict == TrialVerdict::Counterexample)
                        std::cout << "  trial " << r.trial << " run " << r.run << ": " << r.detail
                                  << "\n";
            }
            return rep.clean() ? kExitOk : kExitFailure;
        }

        if (golden_cmd->parsed()) return run_golden(corpus_dir, opt);
    } catch (const QueryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
