#pragma once

#include <sstream>
#include <string>

#include "addiff/ad.hpp"

namespace addiff {

namespace detail {

inline const char* node_keyword(NodeKind k) {
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

}  // namespace detail

// Emits the diagram in the same text format parse() accepts. Parsing the
// output yields a structurally identical diagram.
inline std::string serialize(const ActivityDiagram& ad) {
    std::ostringstream out;
    out << "activity " << ad.name << " {\n";
    for (const VarDecl& d : ad.input_vars)
        out << "  input " << d.name << " : " << domain_to_string(d.domain) << ";\n";
    for (const VarDecl& d : ad.local_vars)
        out << "  local " << d.name << " : " << domain_to_string(d.domain) << ";\n";
    if (!ad.input_vars.empty() || !ad.local_vars.empty()) out << "\n";
    for (const Node& n : ad.nodes) {
        out << "  " << detail::node_keyword(n.kind) << " " << n.id;
        if (n.kind == NodeKind::Action) {
            out << " \"" << n.action << "\"";
            if (!n.assignments.empty()) {
                out << " { ";
                for (const Assignment& a : n.assignments)
                    out << a.var << " = " << expr_to_string(a.value) << "; ";
                out << "}";
            }
        }
        out << ";\n";
    }
    if (!ad.nodes.empty()) out << "\n";
    for (const Transition& t : ad.transitions) {
        out << "  " << t.src << " -> " << t.trg;
        if (t.guard) out << " [" << expr_to_string(t.guard) << "]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace addiff
