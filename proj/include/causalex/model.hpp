#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace causalex {

// A domain value: an integer or a bare identifier.
using Value = std::variant<std::int64_t, std::string>;

std::string value_to_string(const Value& v);

// Hard cap on signature size; enumeration state is stored in fixed arrays.
inline constexpr std::size_t kMaxVariables = 16;

enum class VarKind { Exogenous, Endogenous };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Endogenous;
    std::vector<Value> domain;  // declaration order is domain order

    bool is_boolean() const;
};

// ---------------------------------------------------------------------------
// Expressions (right-hand sides of structural equations)
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op { Lit, Var, Eq, Ne, Not, And, Or, Ite, Min, Max };

    Op op = Op::Lit;
    Value lit;                  // Op::Lit
    int var = -1;               // Op::Var (index into the model's variables)
    std::vector<ExprPtr> kids;  // operands for the remaining ops

    static ExprPtr make_lit(Value v);
    static ExprPtr make_var(int index);
    static ExprPtr make(Op op, std::vector<ExprPtr> kids);
};

bool expr_equal(const Expr& a, const Expr& b);

// Thrown when evaluation hits a type error (non-boolean operand of a logical
// connective, min/max over identifiers). validate_model turns these into
// violations; queries on valid models never see them.
struct EvalError {
    std::string message;
};

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

// Total assignment: domain index per variable, indexed by variable position.
struct World {
    std::array<std::uint8_t, kMaxVariables> idx{};
};

// Conjunction of primitive events (at most one per variable), kept canonical
// by construction: bit i of mask set iff variable i is constrained, and
// val[i] == 0 wherever the bit is clear.
struct PartialSetting {
    std::uint16_t mask = 0;
    std::array<std::uint8_t, kMaxVariables> val{};

    void set(int var, std::uint8_t domain_index);
    void unset(int var);
    bool has(int var) const { return (mask >> var) & 1u; }
    std::uint8_t at(int var) const { return val[static_cast<std::size_t>(var)]; }
    int size() const;
    bool empty() const { return mask == 0; }

    // this is a sub-conjunction of other (same values on this->mask)
    bool subset_of(const PartialSetting& other) const;
    bool holds_in(const World& w) const;

    friend bool operator==(const PartialSetting& a, const PartialSetting& b) = default;
    friend auto operator<=>(const PartialSetting& a, const PartialSetting& b) = default;
};

// Canonical enumeration order: fewer conjuncts first, then lexicographic on
// the (variable index, domain index) sequence.
bool canonical_less(const PartialSetting& a, const PartialSetting& b);

using Context = PartialSetting;       // mask covers exactly the exogenous variables
using Intervention = PartialSetting;  // endogenous variables only

PartialSetting merge_override(const PartialSetting& base, const PartialSetting& over);

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

struct Event;
using EventPtr = std::shared_ptr<const Event>;

struct Event {
    enum class Op { Prim, Not, And, Or };

    Op op = Op::Prim;
    int var = -1;               // Op::Prim
    std::uint8_t val = 0;       // Op::Prim (domain index)
    std::vector<EventPtr> kids;

    static EventPtr prim(int var, std::uint8_t val);
    static EventPtr negate(EventPtr e);
    static EventPtr conj(std::vector<EventPtr> kids);
    static EventPtr disj(std::vector<EventPtr> kids);
};

bool eval_event(const Event& e, const World& w);
EventPtr setting_to_event(const PartialSetting& s);  // conjunction of primitives

// ---------------------------------------------------------------------------
// Causal model
// ---------------------------------------------------------------------------

struct Violation {
    std::string code;     // stable identifier, e.g. "cycle", "domain-closure"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

class CausalModel {
public:
    CausalModel();  // empty, invalid placeholder

    // Variables are sorted by name; equations are matched to endogenous
    // variables by name. Never throws: problems land in the report.
    static CausalModel make(std::vector<Variable> variables,
                            std::vector<std::pair<std::string, ExprPtr>> equations);

    const std::vector<Variable>& variables() const { return vars_; }
    int var_count() const { return static_cast<int>(vars_.size()); }
    int var_index(const std::string& name) const;  // -1 if absent
    const Variable& var(int i) const { return vars_[static_cast<std::size_t>(i)]; }

    std::uint16_t exo_mask() const { return exo_mask_; }
    std::uint16_t endo_mask() const { return endo_mask_; }
    const std::vector<int>& exo_indices() const { return exo_; }
    const std::vector<int>& endo_indices() const { return endo_; }

    // Equation for variable i (endogenous only), nullptr otherwise.
    const ExprPtr& equation(int i) const { return equations_[static_cast<std::size_t>(i)]; }

    // Endogenous variables in dependency order; empty when cyclic.
    const std::vector<int>& topo_order() const { return topo_; }

    const ValidationReport& validation() const { return report_; }
    bool valid() const { return report_.ok(); }

    friend bool operator==(const CausalModel& a, const CausalModel& b);

private:
    std::vector<Variable> vars_;
    std::vector<ExprPtr> equations_;  // indexed by variable, null for exogenous
    std::vector<int> exo_, endo_, topo_;
    std::uint16_t exo_mask_ = 0, endo_mask_ = 0;
    ValidationReport report_;
};

using EpistemicState = std::vector<Context>;  // sorted, deduplicated, non-empty

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

ValidationReport validate_model(const CausalModel& m);

Value eval_expr(const Expr& e, const CausalModel& m, const World& w);

// Unique solution of (M, u). Model must be valid.
World solve(const CausalModel& m, const Context& u);

// Solution of (M_iv, u) without materialising the intervened model.
World solve_with(const CausalModel& m, const Intervention& iv, const Context& u);

// Model surgery: replaces each intervened equation with a constant.
CausalModel intervene(const CausalModel& m, const Intervention& iv);

// (M, u) |= [iv] event
bool holds(const CausalModel& m, const Context& u, const Intervention& iv, const Event& event);

// All contexts in lexicographic order (variables sorted by name, domain
// values in declared order).
std::vector<Context> enumerate_contexts(const CausalModel& m);

EpistemicState make_epistemic(std::vector<Context> contexts);  // sorts + dedups

}  // namespace causalex
