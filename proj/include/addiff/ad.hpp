#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "addiff/expr.hpp"

namespace addiff {

enum class NodeKind { Action, Initial, Final, Decision, Merge, Fork, Join };

inline bool is_pseudo(NodeKind k) { return k != NodeKind::Action; }
inline bool is_control_pseudo(NodeKind k) {
    return k == NodeKind::Decision || k == NodeKind::Merge || k == NodeKind::Fork ||
           k == NodeKind::Join;
}

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Action: return "action";
        case NodeKind::Initial: return "initial";
        case NodeKind::Final: return "final";
        case NodeKind::Decision: return "decision";
        case NodeKind::Merge: return "merge";
        case NodeKind::Fork: return "fork";
        case NodeKind::Join: return "join";
    }
    return "?";
}

struct Assignment {
    std::string var;
    ExprPtr value;
};

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Action;
    std::string action;                   // action nodes: display label
    std::vector<Assignment> assignments;  // action nodes only
};

struct Transition {
    std::string src;
    std::string trg;
    ExprPtr guard;  // null means `true`; only decision outputs carry guards
};

struct ActivityDiagram {
    std::string name;
    std::vector<VarDecl> input_vars;
    std::vector<VarDecl> local_vars;
    std::vector<Node> nodes;
    std::vector<Transition> transitions;

    // inputs then locals, the canonical variable order everywhere else
    std::vector<VarDecl> all_vars() const {
        std::vector<VarDecl> v = input_vars;
        v.insert(v.end(), local_vars.begin(), local_vars.end());
        return v;
    }
};

// Precomputed adjacency for one diagram. Indices are positions in the
// declaration vectors and stay stable for a given ActivityDiagram value.
struct AdIndex {
    std::map<std::string, int> node_by_id;
    std::vector<std::vector<int>> out;  // node -> transition indices
    std::vector<std::vector<int>> in;
    int initial = -1;
    std::vector<int> finals;

    static AdIndex build(const ActivityDiagram& ad) {
        AdIndex ix;
        ix.out.resize(ad.nodes.size());
        ix.in.resize(ad.nodes.size());
        for (int i = 0; i < int(ad.nodes.size()); ++i) {
            ix.node_by_id.emplace(ad.nodes[i].id, i);
            if (ad.nodes[i].kind == NodeKind::Initial && ix.initial < 0) ix.initial = i;
            if (ad.nodes[i].kind == NodeKind::Final) ix.finals.push_back(i);
        }
        for (int t = 0; t < int(ad.transitions.size()); ++t) {
            auto s = ix.node_by_id.find(ad.transitions[t].src);
            auto d = ix.node_by_id.find(ad.transitions[t].trg);
            if (s != ix.node_by_id.end()) ix.out[s->second].push_back(t);
            if (d != ix.node_by_id.end()) ix.in[d->second].push_back(t);
        }
        return ix;
    }

    int node(const std::string& id) const {
        auto it = node_by_id.find(id);
        return it == node_by_id.end() ? -1 : it->second;
    }
};

// Set of action labels occurring in the diagram.
inline std::set<std::string> action_alphabet(const ActivityDiagram& ad) {
    std::set<std::string> out;
    for (const auto& n : ad.nodes)
        if (n.kind == NodeKind::Action) out.insert(n.action);
    return out;
}

inline std::string transition_name(const Transition& t) { return t.src + "->" + t.trg; }

}  // namespace addiff
