#include "causalex/dsl.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "causalex/causes.hpp"

namespace causalex {

std::string format_diagnostic(const Diagnostic& d) {
    return std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Token {
    enum class Kind { Ident, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    std::int64_t number = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++pos_;
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                ++col_;
            } else {
                break;
            }
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
                ++col_;
            }
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_;
            if (c == '-') {
                ++pos_;
                ++col_;
            }
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++col_;
            }
            tok_.kind = Token::Kind::Int;
            tok_.text = src_.substr(start, pos_ - start);
            tok_.number = std::stoll(tok_.text);
            return;
        }
        // multi-char punctuation: !=
        if (c == '!' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
            tok_.kind = Token::Kind::Punct;
            tok_.text = "!=";
            pos_ += 2;
            col_ += 2;
            return;
        }
        tok_.kind = Token::Kind::Punct;
        tok_.text = std::string(1, c);
        ++pos_;
        ++col_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

struct ParseError {
    Diagnostic diag;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError{Diagnostic{t.line, t.col, msg}};
}

// ---------------------------------------------------------------------------
// Expression parser (shared by equations, events, epistemic constraints).
// Identifiers that do not name a variable are value literals.
// ---------------------------------------------------------------------------

class ExprParser {
public:
    ExprParser(Lexer& lx, const std::vector<Variable>* vars) : lx_(lx), vars_(vars) {}

    ExprPtr parse() { return parse_or(); }

private:
    int var_index(const std::string& name) const {
        if (!vars_) return -1;
        for (std::size_t i = 0; i < vars_->size(); ++i)
            if ((*vars_)[i].name == name) return static_cast<int>(i);
        return -1;
    }

    bool punct(const char* p) {
        if (lx_.peek().kind == Token::Kind::Punct && lx_.peek().text == p) {
            lx_.next();
            return true;
        }
        return false;
    }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (punct("|")) {
            ExprPtr rhs = parse_and();
            e = Expr::make(Expr::Op::Or, {e, rhs});
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (punct("&")) {
            ExprPtr rhs = parse_cmp();
            e = Expr::make(Expr::Op::And, {e, rhs});
        }
        return e;
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_unary();
        if (lx_.peek().kind == Token::Kind::Punct &&
            (lx_.peek().text == "=" || lx_.peek().text == "!=")) {
            bool ne = lx_.next().text == "!=";
            ExprPtr rhs = parse_unary();
            e = Expr::make(ne ? Expr::Op::Ne : Expr::Op::Eq, {e, rhs});
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (punct("!")) return Expr::make(Expr::Op::Not, {parse_unary()});
        return parse_atom();
    }

    ExprPtr parse_call(Expr::Op op, std::size_t arity, const Token& at) {
        if (!punct("(")) fail(at, "expected '(' after function name");
        std::vector<ExprPtr> args;
        for (std::size_t i = 0; i < arity; ++i) {
            if (i > 0 && !punct(",")) fail(lx_.peek(), "expected ','");
            args.push_back(parse_or());
        }
        if (!punct(")")) fail(lx_.peek(), "expected ')'");
        return Expr::make(op, std::move(args));
    }

    ExprPtr parse_atom() {
        Token t = lx_.peek();
        if (punct("(")) {
            ExprPtr e = parse_or();
            if (!punct(")")) fail(lx_.peek(), "expected ')'");
            return e;
        }
        if (t.kind == Token::Kind::Int) {
            lx_.next();
            return Expr::make_lit(Value{t.number});
        }
        if (t.kind == Token::Kind::Ident) {
            lx_.next();
            if (t.text == "ite") return parse_call(Expr::Op::Ite, 3, t);
            if (t.text == "min") return parse_call(Expr::Op::Min, 2, t);
            if (t.text == "max") return parse_call(Expr::Op::Max, 2, t);
            int vi = var_index(t.text);
            if (vi >= 0) return Expr::make_var(vi);
            return Expr::make_lit(Value{t.text});
        }
        fail(t, "expected an expression");
    }

    Lexer& lx_;
    const std::vector<Variable>* vars_;
};

// Equation expressions are parsed before the model exists; variables are
// resolved against the declaration list and re-indexed after name sorting.
ExprPtr remap_vars(const ExprPtr& e, const std::vector<int>& to_sorted) {
    if (e->op == Expr::Op::Var) return Expr::make_var(to_sorted[static_cast<std::size_t>(e->var)]);
    if (e->kids.empty()) return e;
    std::vector<ExprPtr> kids;
    for (const auto& k : e->kids) kids.push_back(remap_vars(k, to_sorted));
    auto out = std::make_shared<Expr>(*e);
    out->kids = std::move(kids);
    return out;
}

std::optional<std::uint8_t> domain_index(const Variable& v, const Value& val) {
    for (std::size_t d = 0; d < v.domain.size(); ++d)
        if (v.domain[d] == val) return static_cast<std::uint8_t>(d);
    return std::nullopt;
}

// Lowers an expression into an event formula over primitive events.
EventPtr lower_event(const ExprPtr& e, const CausalModel& m, const Token& at) {
    using Op = Expr::Op;
    switch (e->op) {
        case Op::Var: {
            const Variable& v = m.var(e->var);
            if (v.kind == VarKind::Exogenous)
                fail(at, "exogenous variable '" + v.name + "' in event");
            if (!v.is_boolean())
                fail(at, "bare reference to non-boolean variable '" + v.name + "' in event");
            return Event::prim(e->var, 1);
        }
        case Op::Not: return Event::negate(lower_event(e->kids[0], m, at));
        case Op::And:
            return Event::conj({lower_event(e->kids[0], m, at), lower_event(e->kids[1], m, at)});
        case Op::Or:
            return Event::disj({lower_event(e->kids[0], m, at), lower_event(e->kids[1], m, at)});
        case Op::Eq:
        case Op::Ne: {
            const ExprPtr& lhs = e->kids[0];
            const ExprPtr& rhs = e->kids[1];
            if (lhs->op != Op::Var || rhs->op != Op::Lit)
                fail(at, "event comparisons take the form <variable> = <value>");
            const Variable& v = m.var(lhs->var);
            if (v.kind == VarKind::Exogenous)
                fail(at, "exogenous variable '" + v.name + "' in event");
            auto d = domain_index(v, rhs->lit);
            if (!d)
                fail(at, "value " + value_to_string(rhs->lit) + " is not in the domain of '" +
                             v.name + "'");
            EventPtr prim = Event::prim(lhs->var, *d);
            return e->op == Op::Ne ? Event::negate(prim) : prim;
        }
        default: fail(at, "operator not allowed in an event formula");
    }
}

void check_constraint_vars(const ExprPtr& e, const CausalModel& m, const Token& at) {
    if (e->op == Expr::Op::Var && m.var(e->var).kind != VarKind::Exogenous)
        fail(at, "endogenous variable '" + m.var(e->var).name + "' in epistemic constraint");
    for (const auto& k : e->kids) check_constraint_vars(k, m, at);
}

}  // namespace

namespace {

// First pass: collect the variable declarations so expressions anywhere in
// the document may reference variables declared later.
std::vector<Variable> scan_declarations(const std::string& text) {
    std::vector<Variable> decls;
    Lexer lx(text);
    while (lx.peek().kind != Token::Kind::End) {
        Token t = lx.next();
        if (t.kind != Token::Kind::Ident || (t.text != "exogenous" && t.text != "endogenous"))
            continue;
        Token name = lx.peek();
        if (name.kind != Token::Kind::Ident) continue;
        lx.next();
        if (!(lx.peek().kind == Token::Kind::Punct && lx.peek().text == ":")) continue;
        lx.next();
        Variable v;
        v.name = name.text;
        v.kind = t.text == "exogenous" ? VarKind::Exogenous : VarKind::Endogenous;
        if (lx.peek().kind == Token::Kind::Ident && lx.peek().text == "bool") {
            lx.next();
            v.domain = {Value{std::int64_t{0}}, Value{std::int64_t{1}}};
        } else if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == "{") {
            lx.next();
            while (lx.peek().kind != Token::Kind::End) {
                Token val = lx.next();
                if (val.kind == Token::Kind::Int)
                    v.domain.push_back(Value{val.number});
                else if (val.kind == Token::Kind::Ident)
                    v.domain.push_back(Value{val.text});
                else
                    break;
                if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",") {
                    lx.next();
                    continue;
                }
                break;
            }
            if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == "}") lx.next();
        } else {
            continue;
        }
        decls.push_back(std::move(v));
    }
    return decls;
}

}  // namespace

// ---------------------------------------------------------------------------
// Document parser
// ---------------------------------------------------------------------------

ParseResult parse_model(const std::string& text) {
    ParseResult res;
    Lexer lx(text);
    std::vector<Variable> all_decls = scan_declarations(text);
    std::vector<Variable> decls;
    struct PendingEq {
        std::string name;
        ExprPtr expr;
        Token at;
    };
    struct PendingEpi {
        std::string name;
        Token at;
        EpistemicSpec::Kind kind;
        ExprPtr constraint;
        std::vector<std::vector<std::pair<std::string, Value>>> contexts;
    };
    struct PendingEvent {
        std::string name;
        ExprPtr expr;
        Token at;
    };
    std::vector<PendingEq> eqs;
    std::vector<PendingEpi> epis;
    std::vector<PendingEvent> events;
    ModelDocument doc;

    auto expect_ident = [&](const char* what) {
        Token t = lx.next();
        if (t.kind != Token::Kind::Ident) fail(t, std::string("expected ") + what);
        return t;
    };
    auto expect_punct = [&](const char* p) {
        Token t = lx.next();
        if (t.kind != Token::Kind::Punct || t.text != p)
            fail(t, std::string("expected '") + p + "'");
        return t;
    };
    auto parse_value = [&]() -> Value {
        Token t = lx.next();
        if (t.kind == Token::Kind::Int) return Value{t.number};
        if (t.kind == Token::Kind::Ident) return Value{t.text};
        fail(t, "expected a domain value");
    };
    auto parse_domain = [&]() -> std::vector<Value> {
        Token t = lx.peek();
        if (t.kind == Token::Kind::Ident && t.text == "bool") {
            lx.next();
            return {Value{std::int64_t{0}}, Value{std::int64_t{1}}};
        }
        expect_punct("{");
        std::vector<Value> dom;
        dom.push_back(parse_value());
        while (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",") {
            lx.next();
            dom.push_back(parse_value());
        }
        expect_punct("}");
        return dom;
    };

    try {
        while (lx.peek().kind != Token::Kind::End) {
            Token kw = expect_ident("a declaration keyword");
            if (kw.text == "version") {
                Token v = lx.next();
                if (v.kind != Token::Kind::Int) fail(v, "expected a version number");
                doc.version = static_cast<int>(v.number);
                if (doc.version != 1) fail(v, "unsupported version " + std::to_string(doc.version));
            } else if (kw.text == "exogenous" || kw.text == "endogenous") {
                Token name = expect_ident("a variable name");
                expect_punct(":");
                Variable var;
                var.name = name.text;
                var.kind = kw.text == "exogenous" ? VarKind::Exogenous : VarKind::Endogenous;
                var.domain = parse_domain();
                doc.decl_pos[var.name] = {name.line, name.col};
                decls.push_back(var);
                if (var.kind == VarKind::Endogenous) {
                    expect_punct("=");
                    ExprParser ep(lx, &all_decls);
                    eqs.push_back({var.name, ep.parse(), name});
                }
            } else if (kw.text == "epistemic") {
                Token name = expect_ident("an epistemic state name");
                expect_punct(":");
                PendingEpi pe;
                pe.name = name.text;
                pe.at = name;
                doc.decl_pos[pe.name] = {name.line, name.col};
                if (lx.peek().kind == Token::Kind::Ident && lx.peek().text == "all") {
                    lx.next();
                    pe.kind = EpistemicSpec::Kind::All;
                } else if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == "{") {
                    lx.next();
                    pe.kind = EpistemicSpec::Kind::List;
                    while (true) {
                        expect_punct("(");
                        std::vector<std::pair<std::string, Value>> ctx;
                        while (true) {
                            Token vn = expect_ident("a variable name");
                            expect_punct("=");
                            ctx.emplace_back(vn.text, parse_value());
                            if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",") {
                                lx.next();
                                continue;
                            }
                            break;
                        }
                        expect_punct(")");
                        pe.contexts.push_back(std::move(ctx));
                        if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",") {
                            lx.next();
                            continue;
                        }
                        break;
                    }
                    expect_punct("}");
                } else {
                    pe.kind = EpistemicSpec::Kind::Constraint;
                    ExprParser ep(lx, &all_decls);
                    pe.constraint = ep.parse();
                }
                epis.push_back(std::move(pe));
            } else if (kw.text == "event") {
                Token name = expect_ident("an event name");
                expect_punct(":");
                ExprParser ep(lx, &all_decls);
                events.push_back({name.text, ep.parse(), name});
                doc.decl_pos[events.back().name] = {name.line, name.col};
            } else {
                fail(kw, "unknown declaration '" + kw.text + "'");
            }
        }

        // Build the model: re-index declaration-order variable references to
        // name-sorted indices.
        std::vector<std::string> sorted_names;
        for (const Variable& v : all_decls) sorted_names.push_back(v.name);
        std::sort(sorted_names.begin(), sorted_names.end());
        std::vector<int> to_sorted(all_decls.size(), 0);
        for (std::size_t i = 0; i < all_decls.size(); ++i) {
            auto it = std::find(sorted_names.begin(), sorted_names.end(), all_decls[i].name);
            to_sorted[i] = static_cast<int>(it - sorted_names.begin());
        }
        std::vector<std::pair<std::string, ExprPtr>> model_eqs;
        for (const PendingEq& e : eqs) model_eqs.emplace_back(e.name, remap_vars(e.expr, to_sorted));
        doc.model = CausalModel::make(decls, std::move(model_eqs));

        if (!doc.model.valid()) {
            for (const Violation& v : doc.model.validation().violations) {
                Diagnostic d;
                d.message = v.message;
                if (v.code == "cycle") {
                    // one positioned diagnostic per cycle member
                    bool emitted = false;
                    for (const auto& [name, pos] : doc.decl_pos) {
                        if (v.message.find("{" + name) != std::string::npos ||
                            v.message.find(" " + name) != std::string::npos ||
                            v.message.find(", " + name) != std::string::npos) {
                            res.diagnostics.push_back({pos.first, pos.second, v.message});
                            emitted = true;
                        }
                    }
                    if (emitted) continue;
                }
                // attach the declaration position when the message names a variable
                for (const auto& [name, pos] : doc.decl_pos) {
                    if (v.message.find("'" + name + "'") != std::string::npos) {
                        d.line = pos.first;
                        d.col = pos.second;
                        break;
                    }
                }
                if (d.line == 0) d.line = d.col = 1;
                res.diagnostics.push_back(d);
            }
            return res;
        }

        // Epistemic declarations.
        for (PendingEpi& pe : epis) {
            EpistemicSpec spec;
            spec.kind = pe.kind;
            if (pe.kind == EpistemicSpec::Kind::Constraint) {
                spec.constraint = remap_vars(pe.constraint, to_sorted);
                check_constraint_vars(spec.constraint, doc.model, pe.at);
            } else if (pe.kind == EpistemicSpec::Kind::List) {
                for (const auto& ctx : pe.contexts) {
                    Context c{};
                    for (const auto& [vname, value] : ctx) {
                        int vi = doc.model.var_index(vname);
                        if (vi < 0) fail(pe.at, "unknown variable '" + vname + "' in context");
                        if (doc.model.var(vi).kind != VarKind::Exogenous)
                            fail(pe.at, "context assigns endogenous variable '" + vname + "'");
                        auto d = domain_index(doc.model.var(vi), value);
                        if (!d)
                            fail(pe.at, "value " + value_to_string(value) +
                                            " is not in the domain of '" + vname + "'");
                        c.set(vi, *d);
                    }
                    if (c.mask != doc.model.exo_mask())
                        fail(pe.at, "context must assign every exogenous variable");
                    spec.contexts.push_back(c);
                }
            }
            doc.epistemic_names.push_back(pe.name);
            doc.epistemics[pe.name] = std::move(spec);
        }

        // Events.
        for (PendingEvent& ev : events) {
            ExprPtr remapped = remap_vars(ev.expr, to_sorted);
            doc.event_names.push_back(ev.name);
            doc.events[ev.name] = lower_event(remapped, doc.model, ev.at);
        }
    } catch (const ParseError& pe) {
        res.diagnostics.push_back(pe.diag);
        return res;
    }

    res.doc = std::move(doc);
    return res;
}

EventParse parse_event(const std::string& text, const CausalModel& m) {
    EventParse out;
    try {
        Lexer lx(text);
        ExprParser ep(lx, &m.variables());
        ExprPtr e = ep.parse();
        if (lx.peek().kind != Token::Kind::End) fail(lx.peek(), "trailing input after event");
        Token at;
        out.event = lower_event(e, m, at);
    } catch (const ParseError& pe) {
        out.diagnostics.push_back(pe.diag);
    }
    return out;
}

EpistemicState epistemic_from_constraint(const CausalModel& m, const Expr& constraint) {
    EpistemicState k;
    for (const Context& u : enumerate_contexts(m)) {
        World w{};
        for (int i : m.exo_indices()) w.idx[static_cast<std::size_t>(i)] = u.at(i);
        Value v = eval_expr(constraint, m, w);
        const auto* b = std::get_if<std::int64_t>(&v);
        if (!b || (*b != 0 && *b != 1)) throw QueryError("epistemic constraint is not boolean");
        if (*b == 1) k.push_back(u);
    }
    if (k.empty()) throw QueryError("epistemic constraint selects no context");
    return make_epistemic(std::move(k));
}

EpistemicState resolve_epistemic(const ModelDocument& doc, const std::string& name) {
    auto it = doc.epistemics.find(name);
    if (it == doc.epistemics.end()) throw QueryError("unknown epistemic state '" + name + "'");
    const EpistemicSpec& spec = it->second;
    switch (spec.kind) {
        case EpistemicSpec::Kind::All: return make_epistemic(enumerate_contexts(doc.model));
        case EpistemicSpec::Kind::Constraint:
            return epistemic_from_constraint(doc.model, *spec.constraint);
        case EpistemicSpec::Kind::List: {
            if (spec.contexts.empty()) throw QueryError("epistemic state '" + name + "' is empty");
            return make_epistemic(spec.contexts);
        }
    }
    throw QueryError("bad epistemic spec");
}

EpistemicState parse_epistemic_arg(const ModelDocument& doc, const std::string& text) {
    if (text == "all") return make_epistemic(enumerate_contexts(doc.model));
    if (doc.epistemics.count(text)) return resolve_epistemic(doc, text);
    Lexer lx(text);
    ExprParser ep(lx, &doc.model.variables());
    try {
        ExprPtr e = ep.parse();
        if (lx.peek().kind != Token::Kind::End)
            throw QueryError("trailing input in epistemic constraint");
        return epistemic_from_constraint(doc.model, *e);
    } catch (const ParseError& pe) {
        throw QueryError("bad epistemic argument: " + format_diagnostic(pe.diag));
    }
}

std::optional<Context> parse_context(const std::string& text, const CausalModel& m,
                                     std::string* error) {
    try {
        Lexer lx(text);
        Context c{};
        bool parens = lx.peek().kind == Token::Kind::Punct && lx.peek().text == "(";
        if (parens) lx.next();
        while (true) {
            Token vn = lx.next();
            if (vn.kind != Token::Kind::Ident) fail(vn, "expected a variable name");
            Token eq = lx.next();
            if (eq.kind != Token::Kind::Punct || eq.text != "=") fail(eq, "expected '='");
            Token val = lx.next();
            Value v;
            if (val.kind == Token::Kind::Int)
                v = Value{val.number};
            else if (val.kind == Token::Kind::Ident)
                v = Value{val.text};
            else
                fail(val, "expected a value");
            int vi = m.var_index(vn.text);
            if (vi < 0) fail(vn, "unknown variable '" + vn.text + "'");
            if (m.var(vi).kind != VarKind::Exogenous)
                fail(vn, "'" + vn.text + "' is not exogenous");
            bool found = false;
            for (std::size_t d = 0; d < m.var(vi).domain.size(); ++d)
                if (m.var(vi).domain[d] == v) {
                    c.set(vi, static_cast<std::uint8_t>(d));
                    found = true;
                }
            if (!found) fail(val, "value not in domain of '" + vn.text + "'");
            if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",") {
                lx.next();
                continue;
            }
            break;
        }
        if (parens) {
            Token t = lx.next();
            if (t.kind != Token::Kind::Punct || t.text != ")") fail(t, "expected ')'");
        }
        if (c.mask != m.exo_mask()) {
            if (error) *error = "context must assign every exogenous variable";
            return std::nullopt;
        }
        return c;
    } catch (const ParseError& pe) {
        if (error) *error = format_diagnostic(pe.diag);
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Serialization and rendering
// ---------------------------------------------------------------------------

namespace {

int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Or: return 1;
        case Expr::Op::And: return 2;
        case Expr::Op::Eq:
        case Expr::Op::Ne: return 3;
        case Expr::Op::Not: return 4;
        default: return 5;
    }
}

std::string expr_text(const CausalModel& m, const Expr& e, int parent_prec) {
    using Op = Expr::Op;
    int prec = precedence(e.op);
    std::string s;
    switch (e.op) {
        case Op::Lit: s = value_to_string(e.lit); break;
        case Op::Var: s = m.var(e.var).name; break;
        case Op::Eq:
            s = expr_text(m, *e.kids[0], prec) + " = " + expr_text(m, *e.kids[1], prec + 1);
            break;
        case Op::Ne:
            s = expr_text(m, *e.kids[0], prec) + " != " + expr_text(m, *e.kids[1], prec + 1);
            break;
        case Op::Not: s = "!" + expr_text(m, *e.kids[0], prec); break;
        case Op::And:
            s = expr_text(m, *e.kids[0], prec) + " & " + expr_text(m, *e.kids[1], prec + 1);
            break;
        case Op::Or:
            s = expr_text(m, *e.kids[0], prec) + " | " + expr_text(m, *e.kids[1], prec + 1);
            break;
        case Op::Ite:
            s = "ite(" + expr_text(m, *e.kids[0], 0) + ", " + expr_text(m, *e.kids[1], 0) + ", " +
                expr_text(m, *e.kids[2], 0) + ")";
            return s;
        case Op::Min:
        case Op::Max:
            s = std::string(e.op == Op::Min ? "min" : "max") + "(" + expr_text(m, *e.kids[0], 0) +
                ", " + expr_text(m, *e.kids[1], 0) + ")";
            return s;
    }
    if (prec < parent_prec && e.op != Op::Lit && e.op != Op::Var) s = "(" + s + ")";
    return s;
}

std::string domain_text(const Variable& v) {
    if (v.is_boolean()) return "bool";
    std::string s = "{";
    for (std::size_t d = 0; d < v.domain.size(); ++d) {
        if (d) s += ", ";
        s += value_to_string(v.domain[d]);
    }
    return s + "}";
}

std::string event_text(const CausalModel& m, const Event& e, int parent_prec) {
    int prec = 5;
    std::string s;
    switch (e.op) {
        case Event::Op::Prim: {
            const Variable& v = m.var(e.var);
            if (v.is_boolean()) return e.val == 1 ? v.name : "!" + v.name;
            return v.name + " = " + value_to_string(v.domain[e.val]);
        }
        case Event::Op::Not: {
            const Event& inner = *e.kids[0];
            if (inner.op == Event::Op::Prim && m.var(inner.var).is_boolean())
                return inner.val == 1 ? "!" + m.var(inner.var).name : m.var(inner.var).name;
            return "!(" + event_text(m, inner, 0) + ")";
        }
        case Event::Op::And: {
            prec = 2;
            for (std::size_t i = 0; i < e.kids.size(); ++i) {
                if (i) s += " & ";
                s += event_text(m, *e.kids[i], prec + (i ? 1 : 0));
            }
            break;
        }
        case Event::Op::Or: {
            prec = 1;
            for (std::size_t i = 0; i < e.kids.size(); ++i) {
                if (i) s += " | ";
                s += event_text(m, *e.kids[i], prec + (i ? 1 : 0));
            }
            break;
        }
    }
    if (prec < parent_prec) s = "(" + s + ")";
    return s;
}

}  // namespace

std::string render_expr(const CausalModel& m, const Expr& e) { return expr_text(m, e, 0); }
std::string render_event(const CausalModel& m, const Event& e) { return event_text(m, e, 0); }

std::string serialize_model(const ModelDocument& doc) {
    std::ostringstream os;
    os << "version " << doc.version << "\n";
    const CausalModel& m = doc.model;
    for (int i : m.exo_indices())
        os << "exogenous " << m.var(i).name << " : " << domain_text(m.var(i)) << "\n";
    for (int i : m.endo_indices())
        os << "endogenous " << m.var(i).name << " : " << domain_text(m.var(i)) << " = "
           << render_expr(m, *m.equation(i)) << "\n";
    for (const std::string& name : doc.epistemic_names) {
        const EpistemicSpec& spec = doc.epistemics.at(name);
        os << "epistemic " << name << " : ";
        switch (spec.kind) {
            case EpistemicSpec::Kind::All: os << "all"; break;
            case EpistemicSpec::Kind::Constraint: os << render_expr(m, *spec.constraint); break;
            case EpistemicSpec::Kind::List: {
                os << "{";
                for (std::size_t i = 0; i < spec.contexts.size(); ++i) {
                    if (i) os << ", ";
                    os << render_context(m, spec.contexts[i]);
                }
                os << "}";
                break;
            }
        }
        os << "\n";
    }
    for (const std::string& name : doc.event_names)
        os << "event " << name << " : " << render_event(m, *doc.events.at(name)) << "\n";
    return os.str();
}

std::string render_setting(const CausalModel& m, const PartialSetting& s) {
    if (s.empty()) return "⊤";
    std::string out;
    bool first = true;
    for (std::uint16_t mask = s.mask; mask;) {
        int i = std::countr_zero(mask);
        mask &= std::uint16_t(mask - 1);
        if (!first) out += " ∧ ";
        first = false;
        const Variable& v = m.var(i);
        if (v.is_boolean())
            out += s.at(i) == 1 ? v.name : "¬" + v.name;
        else
            out += v.name + "=" + value_to_string(v.domain[s.at(i)]);
    }
    return out;
}

std::string render_pair(const CausalModel& m, const ContrastivePair& p) {
    return "<" + render_setting(m, p.fact()) + ", " + render_setting(m, p.foil()) + ">";
}

std::string render_context(const CausalModel& m, const Context& u) {
    std::string out = "(";
    bool first = true;
    for (int i : m.exo_indices()) {
        if (!first) out += ", ";
        first = false;
        out += m.var(i).name + "=" + value_to_string(m.var(i).domain[u.at(i)]);
    }
    return out + ")";
}

std::string render_world(const CausalModel& m, const World& w) {
    std::string out = "(";
    for (int i = 0; i < m.var_count(); ++i) {
        if (i) out += ", ";
        out += m.var(i).name + "=" + value_to_string(m.var(i).domain[w.idx[static_cast<std::size_t>(i)]]);
    }
    return out + ")";
}

std::string model_digest(const ModelDocument& doc) {
    std::string text = serialize_model(doc);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace causalex
