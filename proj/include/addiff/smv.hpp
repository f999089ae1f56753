#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "addiff/semantics.hpp"

namespace addiff {

namespace detail {

inline std::string smv_sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "x" + out;
    return out;
}

// expression printer for SMV TRANS clauses; local variables are wrapped in
// next(..) when `post` is set since guards see the post-assignment values
inline void expr_to_smv_rec(const Expr& e, const std::vector<VarDecl>& decls, bool post,
                            std::string& out) {
    switch (e.op) {
        case ExprOp::BoolLit: out += e.bval ? "TRUE" : "FALSE"; return;
        case ExprOp::IntLit: out += std::to_string(e.ival); return;
        case ExprOp::Name: {
            const VarDecl* d = find_decl(decls, e.name);
            if (d && d->kind == VarKind::Local && post)
                out += "next(" + e.name + ")";
            else
                out += e.name;  // input, or enum literal
            return;
        }
        case ExprOp::Not:
            out += "!";
            out += "(";
            expr_to_smv_rec(*e.a, decls, post, out);
            out += ")";
            return;
        default: {
            const char* op = "?";
            switch (e.op) {
                case ExprOp::And: op = " & "; break;
                case ExprOp::Or: op = " | "; break;
                case ExprOp::Eq: op = " = "; break;
                case ExprOp::Ne: op = " != "; break;
                case ExprOp::Lt: op = " < "; break;
                case ExprOp::Le: op = " <= "; break;
                case ExprOp::Gt: op = " > "; break;
                case ExprOp::Ge: op = " >= "; break;
                case ExprOp::Add: op = " + "; break;
                case ExprOp::Sub: op = " - "; break;
                default: break;
            }
            out += "(";
            expr_to_smv_rec(*e.a, decls, post, out);
            out += op;
            expr_to_smv_rec(*e.b, decls, post, out);
            out += ")";
        }
    }
}

inline std::string expr_to_smv(const ExprPtr& e, const std::vector<VarDecl>& decls,
                               bool post) {
    if (!e) return "TRUE";
    std::string out;
    expr_to_smv_rec(*e, decls, post, out);
    return out;
}

inline std::string smv_domain(const Domain& d) {
    switch (d.kind) {
        case Domain::Kind::Bool: return "boolean";
        case Domain::Kind::Int:
            return std::to_string(d.lo) + ".." + std::to_string(d.hi);
        case Domain::Kind::Enum: {
            std::string s = "{";
            for (std::size_t i = 0; i < d.literals.size(); ++i) {
                if (i) s += ", ";
                s += d.literals[i];
            }
            return s + "}";
        }
    }
    return "boolean";
}

}  // namespace detail

// Renders a validated diagram as one SMV module with the same step relation
// as Machine::successors: a boolean token per transition, enumerated `ac` and
// `acnode` state variables, inputs frozen. Enum literals are emitted verbatim,
// so literals shared between two enum types would need renaming first.
inline std::string emit_smv(const ActivityDiagram& ad) {
    const AdIndex idx = AdIndex::build(ad);
    const std::vector<VarDecl> decls = ad.all_vars();

    // value names for ac: the two run markers plus one symbol per label
    std::map<std::string, std::string> label_sym;
    {
        std::map<std::string, int> used{{"bot_init", 1}, {"bot_fin", 1}};
        for (const std::string& l : action_alphabet(ad)) {
            std::string s = "l_" + detail::smv_sanitize(l);
            while (used.count(s)) s += "_";
            used[s] = 1;
            label_sym[l] = s;
        }
    }
    auto node_sym = [&](int i) { return "n_" + detail::smv_sanitize(ad.nodes[std::size_t(i)].id); };
    auto tok = [&](int j) { return "t" + std::to_string(j); };

    std::ostringstream out;
    out << "-- generated from activity " << ad.name << "\n";
    out << "MODULE main\n";
    if (!ad.input_vars.empty()) {
        out << "  FROZENVAR\n";
        for (const VarDecl& d : ad.input_vars)
            out << "    " << d.name << " : " << detail::smv_domain(d.domain) << ";\n";
    }
    out << "  VAR\n";
    out << "    ac : {bot_init, bot_fin";
    for (const auto& [l, s] : label_sym) out << ", " << s;
    out << "};\n";
    out << "    acnode : {";
    for (std::size_t i = 0; i < ad.nodes.size(); ++i) out << (i ? ", " : "") << node_sym(int(i));
    out << "};\n";
    for (const VarDecl& d : ad.local_vars)
        out << "    " << d.name << " : " << detail::smv_domain(d.domain) << ";\n";
    for (std::size_t j = 0; j < ad.transitions.size(); ++j)
        out << "    " << tok(int(j)) << " : boolean; -- " << transition_name(ad.transitions[j])
            << "\n";

    int e0 = idx.out[std::size_t(idx.initial)][0];
    out << "  ASSIGN\n";
    out << "    init(ac) := bot_init;\n";
    out << "    init(acnode) := " << node_sym(idx.initial) << ";\n";
    for (const VarDecl& d : ad.local_vars)
        out << "    init(" << d.name
            << ") := " << value_to_string(d.domain, domain_min(d.domain)) << ";\n";
    for (std::size_t j = 0; j < ad.transitions.size(); ++j)
        out << "    init(" << tok(int(j)) << ") := " << (int(j) == e0 ? "TRUE" : "FALSE")
            << ";\n";

    // a step disjunct fully pins every next() value
    auto locals_clause = [&](const Node* fired) {
        std::string s;
        for (const VarDecl& d : ad.local_vars) {
            const Assignment* asg = nullptr;
            if (fired)
                for (const Assignment& a : fired->assignments)
                    if (a.var == d.name) asg = &a;
            s += " & next(" + d.name + ") = ";
            s += asg ? detail::expr_to_smv(asg->value, decls, false) : d.name;
        }
        return s;
    };

    std::vector<std::string> steps;
    for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
        const Node& n = ad.nodes[i];
        if (n.kind != NodeKind::Action) continue;
        int o = idx.out[i][0];
        for (int e : idx.in[i]) {
            // base marking after consuming e and emitting onto o, before the
            // fresh token crosses its (at most one) control node
            // -1: keep the pre value, 0/1: pin to false/true
            std::vector<int> base(ad.transitions.size(), -1);
            base[std::size_t(e)] = 0;
            auto finish = [&](std::vector<int> post) {
                std::string s;
                for (std::size_t j = 0; j < ad.transitions.size(); ++j) {
                    s += " & ";
                    if (post[j] < 0)
                        s += "next(" + tok(int(j)) + ") = " + tok(int(j));
                    else if (post[j])
                        s += "next(" + tok(int(j)) + ")";
                    else
                        s += "!next(" + tok(int(j)) + ")";
                }
                return s;
            };
            std::string head = tok(e) + " & next(ac) = " + label_sym[n.action] +
                               " & next(acnode) = " + node_sym(int(i)) + locals_clause(&n);
            int tgt = idx.node(ad.transitions[std::size_t(o)].trg);
            const Node& p = ad.nodes[std::size_t(tgt)];
            std::string mark;
            switch (p.kind) {
                case NodeKind::Action:
                case NodeKind::Final: {
                    std::vector<int> post = base;
                    post[std::size_t(o)] = 1;
                    mark = finish(post);
                    break;
                }
                case NodeKind::Merge: {
                    std::vector<int> post = base;
                    post[std::size_t(idx.out[std::size_t(tgt)][0])] = 1;
                    mark = finish(post);
                    break;
                }
                case NodeKind::Fork: {
                    std::vector<int> post = base;
                    for (int b : idx.out[std::size_t(tgt)]) post[std::size_t(b)] = 1;
                    mark = finish(post);
                    break;
                }
                case NodeKind::Decision: {
                    std::string alts;
                    for (int b : idx.out[std::size_t(tgt)]) {
                        std::vector<int> post = base;
                        post[std::size_t(b)] = 1;
                        std::string g = detail::expr_to_smv(
                            ad.transitions[std::size_t(b)].guard, decls, true);
                        if (!alts.empty()) alts += " | ";
                        alts += "(" + g + finish(post) + ")";
                    }
                    mark = " & (" + alts + ")";
                    break;
                }
                case NodeKind::Join: {
                    std::string ready;
                    for (int e2 : idx.in[std::size_t(tgt)]) {
                        if (e2 == o) continue;
                        ready += ready.empty() ? "" : " & ";
                        ready += tok(e2);
                    }
                    if (ready.empty()) ready = "TRUE";
                    std::vector<int> fired = base;
                    for (int e2 : idx.in[std::size_t(tgt)]) fired[std::size_t(e2)] = 0;
                    fired[std::size_t(idx.out[std::size_t(tgt)][0])] = 1;
                    std::vector<int> wait = base;
                    wait[std::size_t(o)] = 1;
                    mark = " & ((" + ready + finish(fired) + ") | (!(" + ready + ")" +
                           finish(wait) + "))";
                    break;
                }
                default: break;
            }
            steps.push_back("(" + head + mark + ")");
        }
    }
    for (int f : idx.finals) {
        for (int e : idx.in[std::size_t(f)]) {
            std::string s = tok(e) + " & next(ac) = bot_fin & next(acnode) = " + node_sym(f) +
                            locals_clause(nullptr);
            for (std::size_t j = 0; j < ad.transitions.size(); ++j)
                s += " & !next(" + tok(int(j)) + ")";
            steps.push_back("(" + s + ")");
        }
    }

    out << "  TRANS\n";
    if (steps.empty()) {
        out << "    FALSE;\n";
    } else {
        for (std::size_t i = 0; i < steps.size(); ++i)
            out << "    " << (i ? "| " : "  ") << steps[i] << "\n";
        out << "    ;\n";
    }
    return out.str();
}

}  // namespace addiff
