#pragma once

#include <string>
#include <vector>

#include "addiff/ad.hpp"
#include "addiff/expr.hpp"
#include "addiff/validate.hpp"

namespace addiff {

// Scalability family: a concurrent section of `width` branches, each a chain
// of `len` uniquely named actions, framed by one action on either side.
// Node count is width*len + 6.
inline ActivityDiagram gen_forking(int width, int len) {
    if (width < 1 || len < 1) throw Error("gen_forking: width and len must be >= 1");
    ActivityDiagram ad;
    ad.name = "forking_w" + std::to_string(width) + "_l" + std::to_string(len);
    auto node = [&](NodeKind k, std::string id, std::string action = "") {
        Node n;
        n.kind = k;
        n.id = std::move(id);
        n.action = std::move(action);
        ad.nodes.push_back(std::move(n));
    };
    auto edge = [&](std::string a, std::string b) {
        Transition t;
        t.src = std::move(a);
        t.trg = std::move(b);
        ad.transitions.push_back(std::move(t));
    };
    node(NodeKind::Initial, "start");
    node(NodeKind::Action, "n0", "a0");
    node(NodeKind::Fork, "split");
    edge("start", "n0");
    edge("n0", "split");
    for (int w = 0; w < width; ++w) {
        std::string prev = "split";
        for (int l = 0; l < len; ++l) {
            std::string id = "b" + std::to_string(w) + "_" + std::to_string(l);
            node(NodeKind::Action, id, "a" + std::to_string(w) + "_" + std::to_string(l));
            edge(prev, id);
            prev = id;
        }
        edge(prev, "sync");
    }
    node(NodeKind::Join, "sync");
    node(NodeKind::Action, "nend", "a_end");
    node(NodeKind::Final, "stop");
    edge("sync", "nend");
    edge("nend", "stop");
    return ad;
}

enum class LinearVariant { Input, Local };

// Scalability family: two chains of `len` actions around one decision over a
// variable with `domain` values; each branch holds 3 actions. Node count is
// 2*len + 10. The `Input` variant decides on an input (one run per value);
// the `Local` variant pins the variable to 0 in the first action, leaving a
// single run.
inline ActivityDiagram gen_linear(int len, int domain, LinearVariant variant) {
    if (len < 1) throw Error("gen_linear: len must be >= 1");
    if (domain < 2 || domain % 2 != 0) throw Error("gen_linear: domain must be even and >= 2");
    ActivityDiagram ad;
    ad.name = "linear_l" + std::to_string(len) + "_d" + std::to_string(domain);
    VarDecl d;
    d.name = "d";
    d.domain = Domain::make_int(0, domain - 1);
    d.kind = variant == LinearVariant::Input ? VarKind::Input : VarKind::Local;
    (variant == LinearVariant::Input ? ad.input_vars : ad.local_vars).push_back(d);

    auto node = [&](NodeKind k, std::string id, std::string action = "") {
        Node n;
        n.kind = k;
        n.id = std::move(id);
        n.action = std::move(action);
        ad.nodes.push_back(std::move(n));
    };
    auto edge = [&](std::string a, std::string b, ExprPtr g = nullptr) {
        Transition t;
        t.src = std::move(a);
        t.trg = std::move(b);
        t.guard = std::move(g);
        ad.transitions.push_back(std::move(t));
    };
    node(NodeKind::Initial, "start");
    std::string prev = "start";
    for (int i = 0; i < len; ++i) {
        std::string id = "pre" + std::to_string(i);
        node(NodeKind::Action, id, "p" + std::to_string(i));
        if (i == 0 && variant == LinearVariant::Local) {
            Assignment a;
            a.var = "d";
            a.value = Expr::lit(std::int64_t(0));
            ad.nodes.back().assignments.push_back(std::move(a));
        }
        edge(prev, id);
        prev = id;
    }
    node(NodeKind::Decision, "pick");
    edge(prev, "pick");
    ExprPtr low = Expr::binary(ExprOp::Lt, Expr::var("d"), Expr::lit(std::int64_t(domain / 2)));
    ExprPtr high = Expr::binary(ExprOp::Ge, Expr::var("d"), Expr::lit(std::int64_t(domain / 2)));
    const char* arm[2] = {"lo", "hi"};
    for (int b = 0; b < 2; ++b) {
        std::string p = "pick";
        for (int i = 0; i < 3; ++i) {
            std::string id = std::string(arm[b]) + std::to_string(i);
            node(NodeKind::Action, id, std::string(arm[b]) + "_act" + std::to_string(i));
            if (p == "pick")
                edge(p, id, b == 0 ? std::move(low) : std::move(high));
            else
                edge(p, id);
            p = id;
        }
        edge(p, "rejoin");
    }
    node(NodeKind::Merge, "rejoin");
    prev = "rejoin";
    for (int i = 0; i < len; ++i) {
        std::string id = "post" + std::to_string(i);
        node(NodeKind::Action, id, "q" + std::to_string(i));
        edge(prev, id);
        prev = id;
    }
    node(NodeKind::Final, "stop");
    edge(prev, "stop");
    return ad;
}

struct MutationSpec {
    enum class Kind { Rename, Delete, Move };
    Kind kind = Kind::Rename;
    std::string target;       // node id of an action
    std::string new_name;     // Rename
    std::string insert_after; // Move: node id gaining the relocated action
};

// Applies one edit and revalidates; Delete and Move splice single-entry,
// single-exit action nodes out of (and back into) an edge.
inline ActivityDiagram mutate(const ActivityDiagram& ad, const MutationSpec& spec) {
    ActivityDiagram out = ad;
    auto find_node = [&](const std::string& id) -> std::size_t {
        for (std::size_t i = 0; i < out.nodes.size(); ++i)
            if (out.nodes[i].id == id) return i;
        throw Error("mutation target not found: " + id);
    };
    auto splice_out = [&](const std::string& id) {
        std::size_t n = find_node(id);
        if (out.nodes[n].kind != NodeKind::Action)
            throw Error("mutation target is not an action: " + id);
        int in = -1, outn = 0, oe = -1;
        for (std::size_t e = 0; e < out.transitions.size(); ++e) {
            if (out.transitions[e].trg == id) {
                ++outn;
                in = int(e);
            }
            if (out.transitions[e].src == id) oe = int(e);
        }
        if (outn != 1 || in < 0 || oe < 0)
            throw Error("can only splice an action with one in and one out edge: " + id);
        out.transitions[std::size_t(in)].trg = out.transitions[std::size_t(oe)].trg;
        Node moved = out.nodes[n];
        out.nodes.erase(out.nodes.begin() + std::ptrdiff_t(n));
        out.transitions.erase(out.transitions.begin() + std::ptrdiff_t(oe));
        return moved;
    };
    switch (spec.kind) {
        case MutationSpec::Kind::Rename: {
            std::size_t n = find_node(spec.target);
            if (out.nodes[n].kind != NodeKind::Action)
                throw Error("mutation target is not an action: " + spec.target);
            out.nodes[n].action = spec.new_name;
            break;
        }
        case MutationSpec::Kind::Delete: {
            splice_out(spec.target);
            break;
        }
        case MutationSpec::Kind::Move: {
            Node moved = splice_out(spec.target);
            std::size_t after = find_node(spec.insert_after);
            int oe = -1;
            for (std::size_t e = 0; e < out.transitions.size(); ++e)
                if (out.transitions[e].src == out.nodes[after].id) {
                    if (oe >= 0) throw Error("move target must have one out edge");
                    oe = int(e);
                }
            if (oe < 0) throw Error("move target has no out edge");
            Transition t;
            t.src = moved.id;
            t.trg = out.transitions[std::size_t(oe)].trg;
            out.transitions[std::size_t(oe)].trg = moved.id;
            out.nodes.push_back(std::move(moved));
            out.transitions.push_back(std::move(t));
            break;
        }
    }
    Diagnostics diags = validate(out);
    if (!diags.ok())
        throw Error("mutation produced an invalid diagram: " + diags.to_string());
    return out;
}

}  // namespace addiff
