#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "addiff/diagnostics.hpp"
#include "addiff/domain.hpp"

namespace addiff {

// Guard / assignment expression tree. Nodes are immutable and shared.
// A Name is resolved against the declarations at check/eval time: it is
// either a declared variable or an enum literal of some declared domain.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprOp {
    BoolLit,
    IntLit,
    Name,
    Not,
    And,
    Or,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
};

struct Expr {
    ExprOp op;
    bool bval = false;
    std::int64_t ival = 0;
    std::string name;
    ExprPtr a, b;

    static ExprPtr lit(bool v) {
        auto e = std::make_shared<Expr>();
        e->op = ExprOp::BoolLit;
        e->bval = v;
        return e;
    }
    static ExprPtr lit(std::int64_t v) {
        auto e = std::make_shared<Expr>();
        e->op = ExprOp::IntLit;
        e->ival = v;
        return e;
    }
    static ExprPtr var(std::string n) {
        auto e = std::make_shared<Expr>();
        e->op = ExprOp::Name;
        e->name = std::move(n);
        return e;
    }
    static ExprPtr unary(ExprOp op, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->a = std::move(a);
        return e;
    }
    static ExprPtr binary(ExprOp op, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }
};

// Static type of an expression. Enum types are compared structurally by
// their literal list.
struct ExprType {
    enum class Kind { Bool, Int, Enum, Bad };
    Kind kind = Kind::Bad;
    std::vector<std::string> literals;  // Enum only

    static ExprType boolean() { return {Kind::Bool, {}}; }
    static ExprType integer() { return {Kind::Int, {}}; }
    static ExprType enumeration(std::vector<std::string> lits) {
        return {Kind::Enum, std::move(lits)};
    }
    static ExprType bad() { return {}; }

    bool operator==(const ExprType& o) const {
        return kind == o.kind && literals == o.literals;
    }
};

namespace detail {

inline const VarDecl* find_decl(const std::vector<VarDecl>& decls, const std::string& n) {
    for (const auto& d : decls)
        if (d.name == n) return &d;
    return nullptr;
}

// Resolves a bare name used as an enum literal. Returns the declaring domains
// (there may be several when enumerations share literal names).
inline std::vector<const Domain*> literal_domains(const std::vector<VarDecl>& decls,
                                                 const std::string& n) {
    std::vector<const Domain*> out;
    for (const auto& d : decls) {
        if (d.domain.kind != Domain::Kind::Enum) continue;
        for (const auto& lit : d.domain.literals) {
            if (lit == n) {
                bool dup = false;
                for (auto* seen : out)
                    if (*seen == d.domain) dup = true;
                if (!dup) out.push_back(&d.domain);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

struct TypeCheckResult {
    ExprType type;
    Diagnostics diags;
    bool ok() const { return diags.ok(); }
};

inline ExprType type_check_rec(const Expr& e, const std::vector<VarDecl>& decls,
                               Diagnostics& diags) {
    using K = ExprType::Kind;
    switch (e.op) {
        case ExprOp::BoolLit: return ExprType::boolean();
        case ExprOp::IntLit: return ExprType::integer();
        case ExprOp::Name: {
            if (const VarDecl* d = detail::find_decl(decls, e.name)) {
                switch (d->domain.kind) {
                    case Domain::Kind::Bool: return ExprType::boolean();
                    case Domain::Kind::Int: return ExprType::integer();
                    case Domain::Kind::Enum:
                        return ExprType::enumeration(d->domain.literals);
                }
            }
            auto doms = detail::literal_domains(decls, e.name);
            if (doms.size() == 1) return ExprType::enumeration(doms[0]->literals);
            if (doms.size() > 1) {
                diags.add("ambiguous-literal", e.name,
                          "literal belongs to more than one declared enumeration");
                return ExprType::bad();
            }
            diags.add("undeclared-name", e.name,
                      "name is neither a declared variable nor an enum literal");
            return ExprType::bad();
        }
        case ExprOp::Not: {
            ExprType t = type_check_rec(*e.a, decls, diags);
            if (t.kind != K::Bool && t.kind != K::Bad)
                diags.add("type-mismatch", "!", "operand of ! must be bool");
            return ExprType::boolean();
        }
        case ExprOp::And:
        case ExprOp::Or: {
            ExprType ta = type_check_rec(*e.a, decls, diags);
            ExprType tb = type_check_rec(*e.b, decls, diags);
            const char* opname = e.op == ExprOp::And ? "&" : "|";
            if ((ta.kind != K::Bool && ta.kind != K::Bad) ||
                (tb.kind != K::Bool && tb.kind != K::Bad))
                diags.add("type-mismatch", opname, "operands must be bool");
            return ExprType::boolean();
        }
        case ExprOp::Add:
        case ExprOp::Sub: {
            ExprType ta = type_check_rec(*e.a, decls, diags);
            ExprType tb = type_check_rec(*e.b, decls, diags);
            const char* opname = e.op == ExprOp::Add ? "+" : "-";
            if ((ta.kind != K::Int && ta.kind != K::Bad) ||
                (tb.kind != K::Int && tb.kind != K::Bad))
                diags.add("type-mismatch", opname, "arithmetic needs bounded-int operands");
            return ExprType::integer();
        }
        case ExprOp::Eq:
        case ExprOp::Ne: {
            ExprType ta = type_check_rec(*e.a, decls, diags);
            ExprType tb = type_check_rec(*e.b, decls, diags);
            if (ta.kind != K::Bad && tb.kind != K::Bad && !(ta == tb))
                diags.add("type-mismatch", e.op == ExprOp::Eq ? "=" : "!=",
                          "comparison operands have different types");
            return ExprType::boolean();
        }
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Gt:
        case ExprOp::Ge: {
            ExprType ta = type_check_rec(*e.a, decls, diags);
            ExprType tb = type_check_rec(*e.b, decls, diags);
            if ((ta.kind != K::Int && ta.kind != K::Bad) ||
                (tb.kind != K::Int && tb.kind != K::Bad))
                diags.add("type-mismatch", "<", "ordering compares bounded ints only");
            return ExprType::boolean();
        }
    }
    return ExprType::bad();
}

inline TypeCheckResult type_check(const ExprPtr& e, const std::vector<VarDecl>& decls) {
    TypeCheckResult r;
    if (!e) {
        r.type = ExprType::boolean();  // absent guard means `true`
        return r;
    }
    r.type = type_check_rec(*e, decls, r.diags);
    return r;
}

// Environment: one value slot per declaration, in declaration order.
using Env = std::vector<std::int64_t>;

inline std::size_t decl_index(const std::vector<VarDecl>& decls, const std::string& n) {
    for (std::size_t i = 0; i < decls.size(); ++i)
        if (decls[i].name == n) return i;
    throw Error("no declaration named '" + n + "'");
}

// Evaluates a type-checked expression. Arithmetic is ordinary int64
// arithmetic; intermediate results are not clamped to any domain.
inline Value eval(const Expr& e, const std::vector<VarDecl>& decls, const Env& env) {
    switch (e.op) {
        case ExprOp::BoolLit: return Value::of_bool(e.bval);
        case ExprOp::IntLit: return Value::of_int(e.ival);
        case ExprOp::Name: {
            for (std::size_t i = 0; i < decls.size(); ++i) {
                if (decls[i].name == e.name)
                    return Value{decls[i].domain.kind, env[i]};
            }
            auto doms = detail::literal_domains(decls, e.name);
            if (doms.size() == 1) {
                const auto& lits = doms[0]->literals;
                for (std::size_t i = 0; i < lits.size(); ++i)
                    if (lits[i] == e.name) return Value::of_enum(std::int64_t(i));
            }
            throw SemanticsError("unresolvable name in expression: " + e.name);
        }
        case ExprOp::Not: return Value::of_bool(!eval(*e.a, decls, env).as_bool());
        case ExprOp::And:
            return Value::of_bool(eval(*e.a, decls, env).as_bool() &&
                                  eval(*e.b, decls, env).as_bool());
        case ExprOp::Or:
            return Value::of_bool(eval(*e.a, decls, env).as_bool() ||
                                  eval(*e.b, decls, env).as_bool());
        case ExprOp::Add:
            return Value::of_int(eval(*e.a, decls, env).num + eval(*e.b, decls, env).num);
        case ExprOp::Sub:
            return Value::of_int(eval(*e.a, decls, env).num - eval(*e.b, decls, env).num);
        case ExprOp::Eq:
            return Value::of_bool(eval(*e.a, decls, env).num == eval(*e.b, decls, env).num);
        case ExprOp::Ne:
            return Value::of_bool(eval(*e.a, decls, env).num != eval(*e.b, decls, env).num);
        case ExprOp::Lt:
            return Value::of_bool(eval(*e.a, decls, env).num < eval(*e.b, decls, env).num);
        case ExprOp::Le:
            return Value::of_bool(eval(*e.a, decls, env).num <= eval(*e.b, decls, env).num);
        case ExprOp::Gt:
            return Value::of_bool(eval(*e.a, decls, env).num > eval(*e.b, decls, env).num);
        case ExprOp::Ge:
            return Value::of_bool(eval(*e.a, decls, env).num >= eval(*e.b, decls, env).num);
    }
    throw SemanticsError("bad expression node");
}

inline void free_vars_rec(const Expr& e, const std::vector<VarDecl>& decls,
                          std::set<std::string>& out) {
    switch (e.op) {
        case ExprOp::Name:
            if (detail::find_decl(decls, e.name)) out.insert(e.name);
            return;
        case ExprOp::BoolLit:
        case ExprOp::IntLit: return;
        default:
            if (e.a) free_vars_rec(*e.a, decls, out);
            if (e.b) free_vars_rec(*e.b, decls, out);
    }
}

// Declared variables the expression reads (enum literals excluded).
inline std::set<std::string> free_vars(const ExprPtr& e, const std::vector<VarDecl>& decls) {
    std::set<std::string> out;
    if (e) free_vars_rec(*e, decls, out);
    return out;
}

namespace detail {

inline int precedence(ExprOp op) {
    switch (op) {
        case ExprOp::Or: return 1;
        case ExprOp::And: return 2;
        case ExprOp::Eq:
        case ExprOp::Ne:
        case ExprOp::Lt:
        case ExprOp::Le:
        case ExprOp::Gt:
        case ExprOp::Ge: return 3;
        case ExprOp::Add:
        case ExprOp::Sub: return 4;
        case ExprOp::Not: return 5;
        default: return 6;
    }
}

inline const char* op_token(ExprOp op) {
    switch (op) {
        case ExprOp::Or: return "|";
        case ExprOp::And: return "&";
        case ExprOp::Eq: return "=";
        case ExprOp::Ne: return "!=";
        case ExprOp::Lt: return "<";
        case ExprOp::Le: return "<=";
        case ExprOp::Gt: return ">";
        case ExprOp::Ge: return ">=";
        case ExprOp::Add: return "+";
        case ExprOp::Sub: return "-";
        default: return "?";
    }
}

inline void print_expr_rec(const Expr& e, int parent_prec, std::string& out) {
    int prec = precedence(e.op);
    switch (e.op) {
        case ExprOp::BoolLit: out += e.bval ? "true" : "false"; return;
        case ExprOp::IntLit: out += std::to_string(e.ival); return;
        case ExprOp::Name: out += e.name; return;
        case ExprOp::Not:
            out += '!';
            print_expr_rec(*e.a, prec, out);
            return;
        default: {
            bool parens = prec < parent_prec;
            if (parens) out += '(';
            print_expr_rec(*e.a, prec, out);
            out += ' ';
            out += op_token(e.op);
            out += ' ';
            // comparisons are non-associative, +/-/&/| left-associate
            print_expr_rec(*e.b, prec + 1, out);
            if (parens) out += ')';
        }
    }
}

}  // namespace detail

inline std::string expr_to_string(const ExprPtr& e) {
    if (!e) return "true";
    std::string out;
    detail::print_expr_rec(*e, 0, out);
    return out;
}

}  // namespace addiff
