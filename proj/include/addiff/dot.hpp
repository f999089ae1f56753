#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "addiff/semantics.hpp"

namespace addiff {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

// Graphviz rendering of a diagram. When `trace` is given, the action nodes it
// passes through are highlighted and prefixed with their 1-based step numbers
// in trace order (a node revisited by a loop lists every step number).
inline std::string export_dot(const ActivityDiagram& ad,
                              const std::vector<AdState>* trace = nullptr) {
    std::map<int, std::vector<int>> steps_of;  // node -> step numbers
    if (trace) {
        int step = 0;
        for (const AdState& s : *trace)
            if (s.tag == AdState::Tag::Act) steps_of[s.node].push_back(++step);
    }

    std::ostringstream out;
    out << "digraph \"" << detail::dot_escape(ad.name) << "\" {\n";
    out << "  rankdir=TB;\n";
    out << "  node [fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
        const Node& n = ad.nodes[i];
        out << "  \"" << detail::dot_escape(n.id) << "\" [";
        switch (n.kind) {
            case NodeKind::Initial:
                out << "shape=circle, style=filled, fillcolor=black, label=\"\", width=0.2";
                break;
            case NodeKind::Final:
                out << "shape=doublecircle, style=filled, fillcolor=black, label=\"\", "
                       "width=0.15";
                break;
            case NodeKind::Decision:
            case NodeKind::Merge:
                out << "shape=diamond, label=\"\"";
                break;
            case NodeKind::Fork:
            case NodeKind::Join:
                out << "shape=box, style=filled, fillcolor=black, label=\"\", height=0.08, "
                       "width=0.8";
                break;
            case NodeKind::Action: {
                std::string label = n.action;
                auto it = steps_of.find(int(i));
                if (it != steps_of.end()) {
                    std::string nums;
                    for (int k : it->second) {
                        if (!nums.empty()) nums += ",";
                        nums += std::to_string(k);
                    }
                    label = nums + ": " + label;
                }
                out << "shape=box, style=rounded, label=\"" << detail::dot_escape(label)
                    << "\"";
                if (it != steps_of.end()) out << ", color=red, penwidth=2";
                break;
            }
        }
        out << "];\n";
    }
    for (const Transition& t : ad.transitions) {
        out << "  \"" << detail::dot_escape(t.src) << "\" -> \"" << detail::dot_escape(t.trg)
            << "\"";
        if (t.guard)
            out << " [label=\"[" << detail::dot_escape(expr_to_string(t.guard)) << "]\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace addiff
