#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "addiff/ad.hpp"

namespace addiff {

struct ParseResult {
    std::optional<ActivityDiagram> ad;
    std::vector<ParseError> errors;
    bool ok() const { return ad.has_value() && errors.empty(); }
};

namespace detail {

enum class Tok {
    End,
    Ident,
    Int,
    String,
    KwActivity,
    KwInput,
    KwLocal,
    KwBool,
    KwEnum,
    KwInitial,
    KwFinal,
    KwAction,
    KwDecision,
    KwMerge,
    KwFork,
    KwJoin,
    KwTrue,
    KwFalse,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Arrow,
    DotDot,
    Assign,   // =
    NotEq,    // !=
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    Amp,
    Pipe,
    Plus,
    Minus,
    Error,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t ival = 0;
    SourceSpan span;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.span.line = t.span.end_line = line_;
        t.span.col = t.span.end_col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id += advance();
            t.text = id;
            t.kind = keyword(id);
            finish(t);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                num += advance();
            t.kind = Tok::Int;
            t.text = num;
            t.ival = std::stoll(num);
            finish(t);
            return t;
        }
        if (c == '"') {
            advance();
            std::string s;
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') s += advance();
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                t.kind = Tok::Error;
                t.text = "unterminated string literal";
                finish(t);
                return t;
            }
            advance();  // closing quote
            t.kind = Tok::String;
            t.text = s;
            finish(t);
            return t;
        }
        advance();
        switch (c) {
            case '{': t.kind = Tok::LBrace; break;
            case '}': t.kind = Tok::RBrace; break;
            case '[': t.kind = Tok::LBracket; break;
            case ']': t.kind = Tok::RBracket; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case ';': t.kind = Tok::Semi; break;
            case ':': t.kind = Tok::Colon; break;
            case ',': t.kind = Tok::Comma; break;
            case '&': t.kind = Tok::Amp; break;
            case '|': t.kind = Tok::Pipe; break;
            case '+': t.kind = Tok::Plus; break;
            case '=': t.kind = Tok::Assign; break;
            case '-':
                if (peek() == '>') {
                    advance();
                    t.kind = Tok::Arrow;
                } else {
                    t.kind = Tok::Minus;
                }
                break;
            case '.':
                if (peek() == '.') {
                    advance();
                    t.kind = Tok::DotDot;
                } else {
                    t.kind = Tok::Error;
                    t.text = "stray '.'";
                }
                break;
            case '!':
                if (peek() == '=') {
                    advance();
                    t.kind = Tok::NotEq;
                } else {
                    t.kind = Tok::Bang;
                }
                break;
            case '<':
                if (peek() == '=') {
                    advance();
                    t.kind = Tok::Le;
                } else {
                    t.kind = Tok::Lt;
                }
                break;
            case '>':
                if (peek() == '=') {
                    advance();
                    t.kind = Tok::Ge;
                } else {
                    t.kind = Tok::Gt;
                }
                break;
            default:
                t.kind = Tok::Error;
                t.text = std::string("unexpected character '") + c + "'";
        }
        finish(t);
        return t;
    }

  private:
    static Tok keyword(const std::string& id) {
        if (id == "activity") return Tok::KwActivity;
        if (id == "input") return Tok::KwInput;
        if (id == "local") return Tok::KwLocal;
        if (id == "bool") return Tok::KwBool;
        if (id == "enum") return Tok::KwEnum;
        if (id == "initial") return Tok::KwInitial;
        if (id == "final") return Tok::KwFinal;
        if (id == "action") return Tok::KwAction;
        if (id == "decision") return Tok::KwDecision;
        if (id == "merge") return Tok::KwMerge;
        if (id == "fork") return Tok::KwFork;
        if (id == "join") return Tok::KwJoin;
        if (id == "true") return Tok::KwTrue;
        if (id == "false") return Tok::KwFalse;
        return Tok::Ident;
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    void finish(Token& t) {
        t.span.end_line = line_;
        t.span.end_col = col_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) { bump(); }

    ParseResult run() {
        ParseResult res;
        ActivityDiagram ad;
        parse_activity(ad);
        res.errors = errors_;
        if (errors_.empty()) res.ad = std::move(ad);
        return res;
    }

  private:
    void parse_activity(ActivityDiagram& ad) {
        expect(Tok::KwActivity, "expected 'activity'");
        ad.name = expect_ident("expected activity name");
        expect(Tok::LBrace, "expected '{'");
        while (cur_.kind == Tok::KwInput || cur_.kind == Tok::KwLocal) parse_decl(ad);
        while (is_node_kw(cur_.kind)) parse_node(ad);
        while (cur_.kind == Tok::Ident) parse_edge(ad);
        if (cur_.kind != Tok::RBrace) {
            error("expected declaration, node, edge, or '}'");
            return;
        }
        bump();
        if (cur_.kind != Tok::End) error("trailing input after activity body");
    }

    void parse_decl(ActivityDiagram& ad) {
        VarKind k = cur_.kind == Tok::KwInput ? VarKind::Input : VarKind::Local;
        bump();
        VarDecl d;
        d.kind = k;
        d.name = expect_ident("expected variable name");
        expect(Tok::Colon, "expected ':'");
        d.domain = parse_type();
        expect_semi();
        (k == VarKind::Input ? ad.input_vars : ad.local_vars).push_back(std::move(d));
    }

    Domain parse_type() {
        if (cur_.kind == Tok::KwBool) {
            bump();
            return Domain::make_bool();
        }
        if (cur_.kind == Tok::KwEnum) {
            bump();
            expect(Tok::LBrace, "expected '{' after 'enum'");
            std::vector<std::string> lits;
            lits.push_back(expect_ident("expected enum literal"));
            while (cur_.kind == Tok::Comma) {
                bump();
                lits.push_back(expect_ident("expected enum literal"));
            }
            expect(Tok::RBrace, "expected '}' after enum literals");
            return Domain::make_enum(std::move(lits));
        }
        std::int64_t lo = parse_int_bound();
        expect(Tok::DotDot, "expected '..' in integer range");
        std::int64_t hi = parse_int_bound();
        return Domain::make_int(lo, hi);
    }

    std::int64_t parse_int_bound() {
        bool neg = false;
        if (cur_.kind == Tok::Minus) {
            neg = true;
            bump();
        }
        if (cur_.kind != Tok::Int) {
            error("expected integer bound");
            return 0;
        }
        std::int64_t v = cur_.ival;
        bump();
        return neg ? -v : v;
    }

    void parse_node(ActivityDiagram& ad) {
        Node n;
        switch (cur_.kind) {
            case Tok::KwInitial: n.kind = NodeKind::Initial; break;
            case Tok::KwFinal: n.kind = NodeKind::Final; break;
            case Tok::KwAction: n.kind = NodeKind::Action; break;
            case Tok::KwDecision: n.kind = NodeKind::Decision; break;
            case Tok::KwMerge: n.kind = NodeKind::Merge; break;
            case Tok::KwFork: n.kind = NodeKind::Fork; break;
            case Tok::KwJoin: n.kind = NodeKind::Join; break;
            default: return;
        }
        bump();
        n.id = expect_ident("expected node id");
        if (n.kind == NodeKind::Action) {
            if (cur_.kind != Tok::String) {
                error("expected quoted action label");
                sync();
                return;
            }
            n.action = cur_.text;
            bump();
            if (cur_.kind == Tok::LBrace) {
                bump();
                while (cur_.kind == Tok::Ident) {
                    Assignment a;
                    a.var = cur_.text;
                    bump();
                    expect(Tok::Assign, "expected '=' in assignment");
                    a.value = parse_expr();
                    expect_semi();
                    n.assignments.push_back(std::move(a));
                }
                expect(Tok::RBrace, "expected '}' after assignments");
            }
        }
        expect_semi();
        ad.nodes.push_back(std::move(n));
    }

    void parse_edge(ActivityDiagram& ad) {
        Transition t;
        t.src = cur_.text;
        bump();
        expect(Tok::Arrow, "expected '->'");
        t.trg = expect_ident("expected target node id");
        if (cur_.kind == Tok::LBracket) {
            bump();
            t.guard = parse_expr();
            expect(Tok::RBracket, "expected ']' after guard");
        }
        expect_semi();
        ad.transitions.push_back(std::move(t));
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (cur_.kind == Tok::Pipe) {
            bump();
            e = Expr::binary(ExprOp::Or, e, parse_and());
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_cmp();
        while (cur_.kind == Tok::Amp) {
            bump();
            e = Expr::binary(ExprOp::And, e, parse_cmp());
        }
        return e;
    }

    ExprPtr parse_cmp() {
        ExprPtr e = parse_add();
        ExprOp op;
        switch (cur_.kind) {
            case Tok::Assign: op = ExprOp::Eq; break;
            case Tok::NotEq: op = ExprOp::Ne; break;
            case Tok::Lt: op = ExprOp::Lt; break;
            case Tok::Le: op = ExprOp::Le; break;
            case Tok::Gt: op = ExprOp::Gt; break;
            case Tok::Ge: op = ExprOp::Ge; break;
            default: return e;
        }
        bump();
        return Expr::binary(op, e, parse_add());
    }

    ExprPtr parse_add() {
        ExprPtr e = parse_unary();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            ExprOp op = cur_.kind == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
            bump();
            e = Expr::binary(op, e, parse_unary());
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (cur_.kind == Tok::Bang) {
            bump();
            return Expr::unary(ExprOp::Not, parse_unary());
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        switch (cur_.kind) {
            case Tok::KwTrue: bump(); return Expr::lit(true);
            case Tok::KwFalse: bump(); return Expr::lit(false);
            case Tok::Int: {
                std::int64_t v = cur_.ival;
                bump();
                return Expr::lit(v);
            }
            case Tok::Minus: {
                bump();
                if (cur_.kind != Tok::Int) {
                    error("expected integer after unary '-'");
                    return Expr::lit(std::int64_t(0));
                }
                std::int64_t v = cur_.ival;
                bump();
                return Expr::lit(-v);
            }
            case Tok::Ident: {
                std::string n = cur_.text;
                bump();
                return Expr::var(std::move(n));
            }
            case Tok::LParen: {
                bump();
                ExprPtr e = parse_or();
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            default:
                error("expected expression");
                bump_unless_sync();
                return Expr::lit(false);
        }
    }

    static bool is_node_kw(Tok k) {
        return k == Tok::KwInitial || k == Tok::KwFinal || k == Tok::KwAction ||
               k == Tok::KwDecision || k == Tok::KwMerge || k == Tok::KwFork ||
               k == Tok::KwJoin;
    }

    void bump() {
        cur_ = lex_.next();
        if (cur_.kind == Tok::Error) {
            errors_.push_back({cur_.span, cur_.text});
            cur_.kind = Tok::End;  // lexical errors are fatal for the rest
        }
    }

    void bump_unless_sync() {
        if (cur_.kind != Tok::Semi && cur_.kind != Tok::RBrace && cur_.kind != Tok::End) bump();
    }

    void expect(Tok k, const char* msg) {
        if (cur_.kind == k) {
            bump();
            return;
        }
        error(msg);
        sync();
    }

    // After an error, resynchronize at the next statement boundary.
    void sync() {
        while (cur_.kind != Tok::Semi && cur_.kind != Tok::RBrace && cur_.kind != Tok::End)
            bump();
        if (cur_.kind == Tok::Semi) bump();
    }

    void expect_semi() { expect(Tok::Semi, "expected ';'"); }

    std::string expect_ident(const char* msg) {
        if (cur_.kind == Tok::Ident) {
            std::string s = cur_.text;
            bump();
            return s;
        }
        error(msg);
        sync();
        return "<error>";
    }

    void error(const std::string& msg) {
        if (errors_.size() < 50) errors_.push_back({cur_.span, msg});
    }

    Lexer lex_;
    Token cur_;
    std::vector<ParseError> errors_;
};

}  // namespace detail

// Parses the activity-diagram text format. Never throws on bad input; all
// problems are reported as ParseError values with 1-based source spans.
inline ParseResult parse(const std::string& text) { return detail::Parser(text).run(); }

inline ParseResult parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult r;
        r.errors.push_back({{1, 1, 1, 1}, "cannot open file: " + path});
        return r;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace addiff
