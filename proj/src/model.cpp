#include "causalex/model.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace causalex {

std::string value_to_string(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
    return std::get<std::string>(v);
}

bool Variable::is_boolean() const {
    return domain.size() == 2 && domain[0] == Value{std::int64_t{0}} &&
           domain[1] == Value{std::int64_t{1}};
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

ExprPtr Expr::make_lit(Value v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Lit;
    e->lit = std::move(v);
    return e;
}

ExprPtr Expr::make_var(int index) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Var;
    e->var = index;
    return e;
}

ExprPtr Expr::make(Op op, std::vector<ExprPtr> kids) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->kids = std::move(kids);
    return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.op != b.op || a.var != b.var || a.lit != b.lit || a.kids.size() != b.kids.size())
        return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
    return true;
}

namespace {

std::int64_t as_bool(const Value& v, const char* what) {
    if (const auto* i = std::get_if<std::int64_t>(&v); i && (*i == 0 || *i == 1)) return *i;
    throw EvalError{std::string(what) + " expects a 0/1 operand, got " + value_to_string(v)};
}

std::int64_t as_int(const Value& v, const char* what) {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw EvalError{std::string(what) + " expects integer operands, got " + value_to_string(v)};
}

}  // namespace

Value eval_expr(const Expr& e, const CausalModel& m, const World& w) {
    using Op = Expr::Op;
    switch (e.op) {
        case Op::Lit: return e.lit;
        case Op::Var: {
            const Variable& v = m.var(e.var);
            return v.domain[w.idx[static_cast<std::size_t>(e.var)]];
        }
        case Op::Eq:
            return Value{std::int64_t(eval_expr(*e.kids[0], m, w) == eval_expr(*e.kids[1], m, w))};
        case Op::Ne:
            return Value{std::int64_t(eval_expr(*e.kids[0], m, w) != eval_expr(*e.kids[1], m, w))};
        case Op::Not: return Value{std::int64_t(1 - as_bool(eval_expr(*e.kids[0], m, w), "'!'"))};
        case Op::And: {
            std::int64_t r = 1;
            for (const auto& k : e.kids) r &= as_bool(eval_expr(*k, m, w), "'&'");
            return Value{r};
        }
        case Op::Or: {
            std::int64_t r = 0;
            for (const auto& k : e.kids) r |= as_bool(eval_expr(*k, m, w), "'|'");
            return Value{r};
        }
        case Op::Ite:
            return as_bool(eval_expr(*e.kids[0], m, w), "ite condition")
                       ? eval_expr(*e.kids[1], m, w)
                       : eval_expr(*e.kids[2], m, w);
        case Op::Min:
            return Value{std::min(as_int(eval_expr(*e.kids[0], m, w), "min"),
                                  as_int(eval_expr(*e.kids[1], m, w), "min"))};
        case Op::Max:
            return Value{std::max(as_int(eval_expr(*e.kids[0], m, w), "max"),
                                  as_int(eval_expr(*e.kids[1], m, w), "max"))};
    }
    throw EvalError{"bad expression node"};
}

// ---------------------------------------------------------------------------
// PartialSetting
// ---------------------------------------------------------------------------

void PartialSetting::set(int var, std::uint8_t domain_index) {
    mask |= std::uint16_t(1u << var);
    val[static_cast<std::size_t>(var)] = domain_index;
}

void PartialSetting::unset(int var) {
    mask &= std::uint16_t(~(1u << var));
    val[static_cast<std::size_t>(var)] = 0;
}

int PartialSetting::size() const { return std::popcount(mask); }

bool PartialSetting::subset_of(const PartialSetting& other) const {
    if ((mask & other.mask) != mask) return false;
    for (std::uint16_t m = mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        if (val[static_cast<std::size_t>(i)] != other.val[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

bool PartialSetting::holds_in(const World& w) const {
    for (std::uint16_t m = mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        if (w.idx[static_cast<std::size_t>(i)] != val[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

bool canonical_less(const PartialSetting& a, const PartialSetting& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    // lexicographic over (variable index, domain index) pairs
    std::uint16_t ma = a.mask, mb = b.mask;
    while (ma && mb) {
        int ia = std::countr_zero(ma), ib = std::countr_zero(mb);
        if (ia != ib) return ia < ib;
        auto va = a.val[static_cast<std::size_t>(ia)], vb = b.val[static_cast<std::size_t>(ib)];
        if (va != vb) return va < vb;
        ma &= std::uint16_t(ma - 1);
        mb &= std::uint16_t(mb - 1);
    }
    return false;
}

PartialSetting merge_override(const PartialSetting& base, const PartialSetting& over) {
    PartialSetting r = base;
    for (std::uint16_t m = over.mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        r.set(i, over.val[static_cast<std::size_t>(i)]);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

EventPtr Event::prim(int var, std::uint8_t val) {
    auto e = std::make_shared<Event>();
    e->op = Op::Prim;
    e->var = var;
    e->val = val;
    return e;
}

EventPtr Event::negate(EventPtr inner) {
    auto e = std::make_shared<Event>();
    e->op = Op::Not;
    e->kids.push_back(std::move(inner));
    return e;
}

EventPtr Event::conj(std::vector<EventPtr> kids) {
    auto e = std::make_shared<Event>();
    e->op = Op::And;
    e->kids = std::move(kids);
    return e;
}

EventPtr Event::disj(std::vector<EventPtr> kids) {
    auto e = std::make_shared<Event>();
    e->op = Op::Or;
    e->kids = std::move(kids);
    return e;
}

bool eval_event(const Event& e, const World& w) {
    switch (e.op) {
        case Event::Op::Prim: return w.idx[static_cast<std::size_t>(e.var)] == e.val;
        case Event::Op::Not: return !eval_event(*e.kids[0], w);
        case Event::Op::And:
            for (const auto& k : e.kids)
                if (!eval_event(*k, w)) return false;
            return true;
        case Event::Op::Or:
            for (const auto& k : e.kids)
                if (eval_event(*k, w)) return true;
            return false;
    }
    return false;
}

EventPtr setting_to_event(const PartialSetting& s) {
    std::vector<EventPtr> prims;
    for (std::uint16_t m = s.mask; m;) {
        int i = std::countr_zero(m);
        m &= std::uint16_t(m - 1);
        prims.push_back(Event::prim(i, s.val[static_cast<std::size_t>(i)]));
    }
    return Event::conj(std::move(prims));
}

// ---------------------------------------------------------------------------
// CausalModel construction and validation
// ---------------------------------------------------------------------------

namespace {

void referenced_vars(const Expr& e, std::uint16_t& out) {
    if (e.op == Expr::Op::Var && e.var >= 0) out |= std::uint16_t(1u << e.var);
    for (const auto& k : e.kids) referenced_vars(*k, out);
}

}  // namespace

CausalModel::CausalModel() {
    report_.violations.push_back({"empty-model", "model has not been constructed"});
}

CausalModel CausalModel::make(std::vector<Variable> variables,
                              std::vector<std::pair<std::string, ExprPtr>> equations) {
    CausalModel m;
    m.report_.violations.clear();
    auto& rep = m.report_;

    std::sort(variables.begin(), variables.end(),
              [](const Variable& a, const Variable& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < variables.size(); ++i)
        if (variables[i].name == variables[i - 1].name)
            rep.violations.push_back({"duplicate-name", "duplicate variable '" + variables[i].name + "'"});
    if (variables.size() > kMaxVariables) {
        rep.violations.push_back({"too-many-variables",
                                  "at most " + std::to_string(kMaxVariables) + " variables supported"});
        return m;
    }
    m.vars_ = std::move(variables);
    m.equations_.assign(m.vars_.size(), nullptr);

    int n_exo = 0, n_endo = 0;
    for (int i = 0; i < m.var_count(); ++i) {
        const Variable& v = m.vars_[static_cast<std::size_t>(i)];
        if (v.domain.empty())
            rep.violations.push_back({"empty-domain", "variable '" + v.name + "' has an empty domain"});
        std::set<Value> uniq(v.domain.begin(), v.domain.end());
        if (uniq.size() != v.domain.size())
            rep.violations.push_back({"duplicate-value", "variable '" + v.name + "' repeats a domain value"});
        if (v.kind == VarKind::Exogenous) {
            m.exo_.push_back(i);
            m.exo_mask_ |= std::uint16_t(1u << i);
            ++n_exo;
        } else {
            m.endo_.push_back(i);
            m.endo_mask_ |= std::uint16_t(1u << i);
            ++n_endo;
        }
    }
    if (n_exo == 0) rep.violations.push_back({"no-exogenous", "signature needs at least one exogenous variable"});
    if (n_endo == 0) rep.violations.push_back({"no-endogenous", "signature needs at least one endogenous variable"});

    for (auto& [name, expr] : equations) {
        int i = m.var_index(name);
        if (i < 0) {
            rep.violations.push_back({"unknown-variable", "equation for unknown variable '" + name + "'"});
            continue;
        }
        if (m.vars_[static_cast<std::size_t>(i)].kind == VarKind::Exogenous) {
            rep.violations.push_back({"equation-for-exogenous", "'" + name + "' is exogenous"});
            continue;
        }
        if (m.equations_[static_cast<std::size_t>(i)])
            rep.violations.push_back({"duplicate-equation", "two equations for '" + name + "'"});
        m.equations_[static_cast<std::size_t>(i)] = std::move(expr);
    }
    for (int i : m.endo_)
        if (!m.equations_[static_cast<std::size_t>(i)])
            rep.violations.push_back(
                {"missing-equation", "no equation for endogenous '" + m.vars_[static_cast<std::size_t>(i)].name + "'"});
    if (!rep.ok()) return m;

    // Reference checks and self-reference.
    std::vector<std::uint16_t> deps(m.vars_.size(), 0);
    for (int i : m.endo_) {
        std::uint16_t refs = 0;
        referenced_vars(*m.equations_[static_cast<std::size_t>(i)], refs);
        for (std::uint16_t r = refs; r;) {
            int j = std::countr_zero(r);
            r &= std::uint16_t(r - 1);
            if (j >= m.var_count())
                rep.violations.push_back({"unknown-variable", "equation references an out-of-range variable"});
        }
        if ((refs >> i) & 1u)
            rep.violations.push_back(
                {"self-reference", "equation for '" + m.vars_[static_cast<std::size_t>(i)].name + "' references itself"});
        deps[static_cast<std::size_t>(i)] = refs & m.endo_mask_;
    }
    if (!rep.ok()) return m;

    // Topological order over endogenous variables (Kahn).
    std::vector<int> order;
    std::uint16_t placed = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (int i : m.endo_) {
            if ((placed >> i) & 1u) continue;
            if ((deps[static_cast<std::size_t>(i)] & ~placed) == 0) {
                order.push_back(i);
                placed |= std::uint16_t(1u << i);
                progress = true;
            }
        }
    }
    if (order.size() != m.endo_.size()) {
        std::string names;
        for (int i : m.endo_)
            if (!((placed >> i) & 1u)) names += (names.empty() ? "" : ", ") + m.vars_[static_cast<std::size_t>(i)].name;
        rep.violations.push_back({"cycle", "cyclic dependency {" + names + "}"});
        return m;
    }
    m.topo_ = std::move(order);

    // Domain closure by exhaustive evaluation over the referenced variables.
    for (int i : m.endo_) {
        const Variable& target = m.vars_[static_cast<std::size_t>(i)];
        std::uint16_t all_refs = 0;
        referenced_vars(*m.equations_[static_cast<std::size_t>(i)], all_refs);
        std::vector<int> refs;
        for (std::uint16_t r = all_refs; r;) {
            int j = std::countr_zero(r);
            r &= std::uint16_t(r - 1);
            refs.push_back(j);
        }
        World w{};
        std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
            if (k == refs.size()) {
                try {
                    Value out = eval_expr(*m.equations_[static_cast<std::size_t>(i)], m, w);
                    const auto& dom = target.domain;
                    if (std::find(dom.begin(), dom.end(), out) == dom.end()) {
                        rep.violations.push_back({"domain-closure",
                                                  "equation for '" + target.name + "' produced " +
                                                      value_to_string(out) + " outside its domain"});
                        return false;
                    }
                } catch (const EvalError& err) {
                    rep.violations.push_back({"eval-error", "equation for '" + target.name + "': " + err.message});
                    return false;
                }
                return true;
            }
            int j = refs[k];
            for (std::size_t d = 0; d < m.vars_[static_cast<std::size_t>(j)].domain.size(); ++d) {
                w.idx[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(d);
                if (!rec(k + 1)) return false;  // first failure per equation is enough
            }
            return true;
        };
        rec(0);
    }
    return m;
}

int CausalModel::var_index(const std::string& name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name,
                               [](const Variable& v, const std::string& n) { return v.name < n; });
    if (it != vars_.end() && it->name == name) return static_cast<int>(it - vars_.begin());
    return -1;
}

bool operator==(const CausalModel& a, const CausalModel& b) {
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i) {
        const auto& va = a.vars_[i];
        const auto& vb = b.vars_[i];
        if (va.name != vb.name || va.kind != vb.kind || va.domain != vb.domain) return false;
        const auto& ea = a.equations_[i];
        const auto& eb = b.equations_[i];
        if (!ea != !eb) return false;
        if (ea && !expr_equal(*ea, *eb)) return false;
    }
    return true;
}

ValidationReport validate_model(const CausalModel& m) { return m.validation(); }

// ---------------------------------------------------------------------------
// Solving and interventions
// ---------------------------------------------------------------------------

World solve(const CausalModel& m, const Context& u) { return solve_with(m, PartialSetting{}, u); }

World solve_with(const CausalModel& m, const Intervention& iv, const Context& u) {
    assert(m.valid());
    World w{};
    for (int i : m.exo_indices()) w.idx[static_cast<std::size_t>(i)] = u.at(i);
    for (int i : m.topo_order()) {
        auto& slot = w.idx[static_cast<std::size_t>(i)];
        if (iv.has(i)) {
            slot = iv.at(i);
            continue;
        }
        Value out = eval_expr(*m.equation(i), m, w);
        const auto& dom = m.var(i).domain;
        auto it = std::find(dom.begin(), dom.end(), out);
        assert(it != dom.end());
        slot = static_cast<std::uint8_t>(it - dom.begin());
    }
    return w;
}

CausalModel intervene(const CausalModel& m, const Intervention& iv) {
    assert(m.valid());
    assert((iv.mask & ~m.endo_mask()) == 0 && "interventions target endogenous variables");
    std::vector<std::pair<std::string, ExprPtr>> eqs;
    for (int i : m.endo_indices()) {
        const std::string& name = m.var(i).name;
        if (iv.has(i)) {
            eqs.emplace_back(name, Expr::make_lit(m.var(i).domain[iv.at(i)]));
        } else {
            eqs.emplace_back(name, m.equation(i));
        }
    }
    return CausalModel::make(m.variables(), std::move(eqs));
}

bool holds(const CausalModel& m, const Context& u, const Intervention& iv, const Event& event) {
    return eval_event(event, solve_with(m, iv, u));
}

std::vector<Context> enumerate_contexts(const CausalModel& m) {
    const auto& exo = m.exo_indices();
    std::vector<Context> out;
    Context c{};
    for (int i : exo) c.set(i, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == exo.size()) {
            out.push_back(c);
            return;
        }
        int i = exo[k];
        for (std::size_t d = 0; d < m.var(i).domain.size(); ++d) {
            c.set(i, static_cast<std::uint8_t>(d));
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

EpistemicState make_epistemic(std::vector<Context> contexts) {
    std::sort(contexts.begin(), contexts.end());
    contexts.erase(std::unique(contexts.begin(), contexts.end()), contexts.end());
    return contexts;
}

}  // namespace causalex
