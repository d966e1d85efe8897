#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalex/contrastive.hpp"
#include "causalex/model.hpp"

namespace causalex {

struct Diagnostic {
    int line = 0;  // 1-based
    int col = 0;   // 1-based
    std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct EpistemicSpec {
    enum class Kind { All, Constraint, List };
    Kind kind = Kind::All;
    ExprPtr constraint;              // Kind::Constraint, over exogenous variables
    std::vector<Context> contexts;   // Kind::List
};

struct ModelDocument {
    int version = 1;
    CausalModel model;
    std::vector<std::string> epistemic_names;  // declaration order
    std::map<std::string, EpistemicSpec> epistemics;
    std::vector<std::string> event_names;
    std::map<std::string, EventPtr> events;
    std::map<std::string, std::pair<int, int>> decl_pos;  // name -> (line, col)
};

struct ParseResult {
    std::optional<ModelDocument> doc;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return doc.has_value() && diagnostics.empty(); }
};

// Parses the .scm-model text format. Model-level validation failures are
// reported as positioned diagnostics.
ParseResult parse_model(const std::string& text);

struct EventParse {
    EventPtr event;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return event != nullptr && diagnostics.empty(); }
};

// Parses a standalone event formula over a model's endogenous variables.
// Boolean sugar: `X` reads as X = 1 and `!X` as X = 0.
EventParse parse_event(const std::string& text, const CausalModel& m);

// Contexts of the model satisfying the named epistemic declaration.
EpistemicState resolve_epistemic(const ModelDocument& doc, const std::string& name);
EpistemicState epistemic_from_constraint(const CausalModel& m, const Expr& constraint);
// Parses either a named epistemic, "all", or an inline constraint formula.
EpistemicState parse_epistemic_arg(const ModelDocument& doc, const std::string& text);

// Canonical text form; parse(serialize(doc)) reproduces the document.
std::string serialize_model(const ModelDocument& doc);

// Rendering with the boolean abbreviation (X=1 as "X", X=0 as "¬X").
std::string render_setting(const CausalModel& m, const PartialSetting& s);
std::string render_pair(const CausalModel& m, const ContrastivePair& p);
std::string render_context(const CausalModel& m, const Context& u);
std::string render_world(const CausalModel& m, const World& w);
std::string render_event(const CausalModel& m, const Event& e);
std::string render_expr(const CausalModel& m, const Expr& e);

// Parses a context written as (U_A=0, U_B=1); all exogenous variables required.
std::optional<Context> parse_context(const std::string& text, const CausalModel& m,
                                     std::string* error = nullptr);

// Stable FNV-1a digest of the canonical serialization.
std::string model_digest(const ModelDocument& doc);

}  // namespace causalex
