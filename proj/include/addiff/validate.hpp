#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "addiff/ad.hpp"

namespace addiff {

namespace detail {

// Fork context of an edge: stack of (fork node index, branch index) pairs,
// innermost fork last.
using ForkCtx = std::vector<std::pair<int, int>>;

inline bool contexts_parallel(const ForkCtx& a, const ForkCtx& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size()) {
        if (a[k] == b[k]) {
            ++k;
            continue;
        }
        return a[k].first == b[k].first && a[k].second != b[k].second;
    }
    return false;
}

inline std::string ctx_to_string(const ForkCtx& c, const ActivityDiagram& ad) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ", ";
        s += ad.nodes[std::size_t(c[i].first)].id + "#" + std::to_string(c[i].second);
    }
    return s + "]";
}

}  // namespace detail

// Checks every structural rule a diagram must satisfy before it can be
// executed or compared. Diagnostics accumulate; deeper graph checks are
// skipped once the graph itself is ambiguous (duplicate ids, dangling edges).
inline Diagnostics validate(const ActivityDiagram& ad) {
    Diagnostics diags;

    // variable declarations
    {
        std::set<std::string> seen;
        for (const VarDecl& d : ad.all_vars()) {
            if (!seen.insert(d.name).second)
                diags.add("duplicate-variable", d.name, "variable declared more than once");
            if (d.domain.kind == Domain::Kind::Int && d.domain.lo > d.domain.hi)
                diags.add("empty-domain", d.name,
                          "integer range " + std::to_string(d.domain.lo) + ".." +
                              std::to_string(d.domain.hi) + " is empty");
            if (d.domain.kind == Domain::Kind::Enum) {
                if (d.domain.literals.empty())
                    diags.add("empty-domain", d.name, "enum type has no literals");
                std::set<std::string> lits;
                for (const std::string& l : d.domain.literals)
                    if (!lits.insert(l).second)
                        diags.add("duplicate-enum-literal", d.name,
                                  "enum literal '" + l + "' repeated");
            }
        }
    }

    // node ids and edge endpoints
    bool graph_ok = true;
    {
        std::set<std::string> ids;
        for (const Node& n : ad.nodes) {
            if (n.id.empty()) {
                diags.add("node-id", "<empty>", "node id must be non-empty");
                graph_ok = false;
            }
            if (!ids.insert(n.id).second) {
                diags.add("duplicate-node-id", n.id, "node id used more than once");
                graph_ok = false;
            }
            if (n.kind == NodeKind::Action && n.action.empty())
                diags.add("action-label", n.id, "action label must be non-empty");
            if (n.kind != NodeKind::Action && !n.assignments.empty())
                diags.add("assignments-placement", n.id,
                          "only action nodes may carry assignments");
        }
        for (const Transition& t : ad.transitions) {
            if (!ids.count(t.src)) {
                diags.add("unknown-endpoint", transition_name(t),
                          "source node '" + t.src + "' is not declared");
                graph_ok = false;
            }
            if (!ids.count(t.trg)) {
                diags.add("unknown-endpoint", transition_name(t),
                          "target node '" + t.trg + "' is not declared");
                graph_ok = false;
            }
        }
    }

    // expression typing is independent of graph shape
    {
        const std::vector<VarDecl> decls = ad.all_vars();
        for (const Transition& t : ad.transitions) {
            TypeCheckResult r = type_check(t.guard, decls);
            for (const Diagnostic& d : r.diags.items)
                diags.add("guard-type", transition_name(t), d.message);
            if (r.diags.ok() && r.type.kind != ExprType::Kind::Bool)
                diags.add("guard-type", transition_name(t), "guard must be boolean");
        }
        for (const Node& n : ad.nodes) {
            std::set<std::string> assigned;
            for (const Assignment& a : n.assignments) {
                if (!assigned.insert(a.var).second)
                    diags.add("duplicate-assignment", n.id,
                              "variable '" + a.var + "' assigned twice in one action");
                const VarDecl* target = detail::find_decl(decls, a.var);
                if (!target) {
                    diags.add("assign-target", n.id,
                              "assignment to undeclared variable '" + a.var + "'");
                    continue;
                }
                if (target->kind == VarKind::Input) {
                    diags.add("assign-target", n.id,
                              "input variable '" + a.var + "' cannot be assigned");
                    continue;
                }
                TypeCheckResult r = type_check(a.value, decls);
                for (const Diagnostic& d : r.diags.items)
                    diags.add("assign-type", n.id, d.message);
                if (!r.diags.ok()) continue;
                bool match = false;
                switch (target->domain.kind) {
                    case Domain::Kind::Bool: match = r.type.kind == ExprType::Kind::Bool; break;
                    case Domain::Kind::Int: match = r.type.kind == ExprType::Kind::Int; break;
                    case Domain::Kind::Enum:
                        match = r.type.kind == ExprType::Kind::Enum &&
                                r.type.literals == target->domain.literals;
                        break;
                }
                if (!match)
                    diags.add("assign-type", n.id,
                              "value assigned to '" + a.var + "' does not fit its type");
            }
        }
    }

    if (!graph_ok) return diags;

    const AdIndex idx = AdIndex::build(ad);

    // node population
    {
        int initials = 0, finals = 0;
        for (const Node& n : ad.nodes) {
            if (n.kind == NodeKind::Initial) ++initials;
            if (n.kind == NodeKind::Final) ++finals;
        }
        if (initials != 1)
            diags.add("initial-count", ad.name,
                      "expected exactly one initial node, found " + std::to_string(initials));
        if (finals < 1) diags.add("final-count", ad.name, "at least one final node required");
    }

    // degree constraints
    bool degrees_ok = true;
    auto degree_error = [&](const Node& n, const std::string& what) {
        diags.add("degree", n.id, what);
        degrees_ok = false;
    };
    for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
        const Node& n = ad.nodes[i];
        std::size_t in = idx.in[i].size(), out = idx.out[i].size();
        switch (n.kind) {
            case NodeKind::Initial:
                if (in != 0) degree_error(n, "initial node must have no incoming edges");
                if (out != 1) degree_error(n, "initial node must have exactly one outgoing edge");
                break;
            case NodeKind::Final:
                if (out != 0) degree_error(n, "final node must have no outgoing edges");
                if (in < 1) degree_error(n, "final node must have an incoming edge");
                break;
            case NodeKind::Action:
                if (in < 1) degree_error(n, "action node must have an incoming edge");
                if (out != 1) degree_error(n, "action node must have exactly one outgoing edge");
                break;
            case NodeKind::Decision:
                if (in < 1) degree_error(n, "decision node must have an incoming edge");
                if (out < 2) degree_error(n, "decision node must have at least two outgoing edges");
                break;
            case NodeKind::Merge:
                if (in < 2) degree_error(n, "merge node must have at least two incoming edges");
                if (out != 1) degree_error(n, "merge node must have exactly one outgoing edge");
                break;
            case NodeKind::Fork:
                if (in != 1) degree_error(n, "fork node must have exactly one incoming edge");
                if (out < 1) degree_error(n, "fork node must have an outgoing edge");
                break;
            case NodeKind::Join:
                if (in < 1) degree_error(n, "join node must have an incoming edge");
                if (out != 1) degree_error(n, "join node must have exactly one outgoing edge");
                break;
        }
    }

    // guards live only on edges leaving a decision
    for (const Transition& t : ad.transitions) {
        if (!t.guard) continue;
        int s = idx.node(t.src);
        if (s >= 0 && ad.nodes[std::size_t(s)].kind != NodeKind::Decision)
            diags.add("guard-placement", transition_name(t),
                      "guards are only allowed on edges leaving a decision node");
    }

    // two control nodes may never be adjacent
    bool adjacency_ok = true;
    for (const Transition& t : ad.transitions) {
        int s = idx.node(t.src), g = idx.node(t.trg);
        if (s < 0 || g < 0) continue;
        if (is_pseudo(ad.nodes[std::size_t(s)].kind) && is_pseudo(ad.nodes[std::size_t(g)].kind)) {
            diags.add("adjacent-pseudo", transition_name(t),
                      "control nodes must be separated by an action node");
            adjacency_ok = false;
        }
    }

    if (idx.initial < 0 || !degrees_ok) return diags;

    // reachability from the initial node
    std::vector<char> reachable(ad.nodes.size(), 0);
    {
        std::deque<int> work{idx.initial};
        reachable[std::size_t(idx.initial)] = 1;
        while (!work.empty()) {
            int u = work.front();
            work.pop_front();
            for (int e : idx.out[std::size_t(u)]) {
                int v = idx.node(ad.transitions[std::size_t(e)].trg);
                if (v >= 0 && !reachable[std::size_t(v)]) {
                    reachable[std::size_t(v)] = 1;
                    work.push_back(v);
                }
            }
        }
        for (std::size_t i = 0; i < ad.nodes.size(); ++i)
            if (!reachable[i])
                diags.add("unreachable", ad.nodes[i].id,
                          "node cannot be reached from the initial node");
    }

    // every local must get a value in the first action
    if (adjacency_ok && !ad.local_vars.empty()) {
        int e0 = idx.out[std::size_t(idx.initial)][0];
        int first = idx.node(ad.transitions[std::size_t(e0)].trg);
        if (first >= 0 && ad.nodes[std::size_t(first)].kind == NodeKind::Action) {
            std::set<std::string> assigned;
            for (const Assignment& a : ad.nodes[std::size_t(first)].assignments)
                assigned.insert(a.var);
            for (const VarDecl& d : ad.local_vars)
                if (!assigned.count(d.name))
                    diags.add("locals-initialized", d.name,
                              "local variable must be assigned in the first action node '" +
                                  ad.nodes[std::size_t(first)].id + "'");
        }
    }

    // fork context propagation: each reachable edge gets the stack of forks
    // whose regions it lies in. Well structured diagrams give every edge one
    // consistent context, joins collect all branches of one fork, and finals
    // sit outside every fork region.
    if (adjacency_ok) {
        std::vector<std::optional<detail::ForkCtx>> ectx(ad.transitions.size());
        bool ctx_ok = true;
        auto ctx_error = [&](const std::string& subject, const std::string& msg) {
            diags.add("fork-structure", subject, msg);
            ctx_ok = false;
        };
        std::deque<int> work;  // edges whose context was just set
        int e0 = idx.out[std::size_t(idx.initial)][0];
        ectx[std::size_t(e0)] = detail::ForkCtx{};
        work.push_back(e0);
        while (!work.empty() && ctx_ok) {
            int e = work.front();
            work.pop_front();
            const detail::ForkCtx cur = *ectx[std::size_t(e)];
            int v = idx.node(ad.transitions[std::size_t(e)].trg);
            if (v < 0) continue;
            const Node& n = ad.nodes[std::size_t(v)];
            const auto& outs = idx.out[std::size_t(v)];
            for (std::size_t b = 0; b < outs.size(); ++b) {
                detail::ForkCtx next = cur;
                if (n.kind == NodeKind::Fork) next.emplace_back(v, int(b));
                if (n.kind == NodeKind::Join) {
                    if (next.empty()) {
                        ctx_error(n.id, "join node outside any fork region");
                        break;
                    }
                    next.pop_back();
                }
                int o = outs[b];
                if (!ectx[std::size_t(o)]) {
                    ectx[std::size_t(o)] = std::move(next);
                    work.push_back(o);
                } else if (*ectx[std::size_t(o)] != next) {
                    ctx_error(transition_name(ad.transitions[std::size_t(o)]),
                              "edge lies in conflicting fork contexts " +
                                  detail::ctx_to_string(*ectx[std::size_t(o)], ad) + " and " +
                                  detail::ctx_to_string(next, ad));
                }
            }
        }
        if (ctx_ok) {
            for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
                if (!reachable[i]) continue;
                const Node& n = ad.nodes[i];
                std::vector<const detail::ForkCtx*> incs;
                for (int e : idx.in[i])
                    if (ectx[std::size_t(e)]) incs.push_back(&*ectx[std::size_t(e)]);
                if (incs.empty() && n.kind != NodeKind::Initial) continue;
                if (n.kind == NodeKind::Join) {
                    // all incoming edges must close the same fork, covering
                    // every branch exactly once
                    std::set<int> branches;
                    int fork = -1;
                    bool bad = false;
                    for (const detail::ForkCtx* c : incs) {
                        if (c->empty()) {
                            bad = true;
                            break;
                        }
                        auto [f, b] = c->back();
                        if (fork < 0) fork = f;
                        if (f != fork || !branches.insert(b).second) {
                            bad = true;
                            break;
                        }
                    }
                    if (!bad && fork >= 0)
                        bad = branches.size() != idx.out[std::size_t(fork)].size();
                    if (bad)
                        diags.add("fork-structure", n.id,
                                  "join must combine every branch of exactly one fork");
                } else if (n.kind == NodeKind::Final) {
                    for (const detail::ForkCtx* c : incs)
                        if (!c->empty())
                            diags.add("fork-structure", n.id,
                                      "flow reaches a final node inside fork region " +
                                          detail::ctx_to_string(*c, ad));
                } else {
                    for (const detail::ForkCtx* c : incs)
                        if (*c != *incs[0]) {
                            diags.add("fork-structure", n.id,
                                      "incoming edges lie in different fork contexts");
                            break;
                        }
                }
            }

            // the same action label on two parallel branches would make runs
            // ambiguous when matched by label
            std::map<std::string, std::vector<std::size_t>> by_label;
            for (std::size_t i = 0; i < ad.nodes.size(); ++i)
                if (reachable[i] && ad.nodes[i].kind == NodeKind::Action)
                    by_label[ad.nodes[i].action].push_back(i);
            for (const auto& [label, nodes] : by_label) {
                bool flagged = false;
                for (std::size_t a = 0; a < nodes.size() && !flagged; ++a) {
                    for (std::size_t b = a + 1; b < nodes.size() && !flagged; ++b) {
                        const auto& oa = idx.out[nodes[a]];
                        const auto& ob = idx.out[nodes[b]];
                        if (oa.empty() || ob.empty()) continue;
                        const auto& ca = ectx[std::size_t(oa[0])];
                        const auto& cb = ectx[std::size_t(ob[0])];
                        if (ca && cb && detail::contexts_parallel(*ca, *cb)) {
                            diags.add("action-name-conflict", label,
                                      "action label used on parallel branches of the same fork");
                            flagged = true;
                        }
                    }
                }
            }
        }
    }

    // decision guards must pick exactly one branch for every environment
    {
        const std::vector<VarDecl> decls = ad.all_vars();
        for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
            if (ad.nodes[i].kind != NodeKind::Decision) continue;
            const Node& n = ad.nodes[i];
            std::vector<ExprPtr> guards;
            bool typed = true;
            for (int e : idx.out[i]) {
                const ExprPtr& g = ad.transitions[std::size_t(e)].guard;
                if (!type_check(g, decls).diags.ok()) typed = false;
                guards.push_back(g);
            }
            if (!typed || guards.size() < 2) continue;
            std::set<std::string> free;
            for (const ExprPtr& g : guards) {
                auto fv = free_vars(g, decls);
                free.insert(fv.begin(), fv.end());
            }
            std::vector<int> fidx;
            std::uint64_t combos = 1;
            const std::uint64_t cap = 1u << 20;
            for (std::size_t d = 0; d < decls.size(); ++d) {
                if (!free.count(decls[d].name)) continue;
                fidx.push_back(int(d));
                combos *= std::uint64_t(decls[d].domain.cardinality());
                if (combos > cap) break;
            }
            if (combos > cap) continue;  // domain too large to enumerate
            Env env(decls.size());
            for (std::size_t d = 0; d < decls.size(); ++d)
                env[d] = domain_min(decls[d].domain).num;
            bool overlap_reported = false, gap_reported = false;
            for (std::uint64_t c = 0; c < combos; ++c) {
                std::uint64_t rest = c;
                for (int d : fidx) {
                    std::int64_t card = decls[std::size_t(d)].domain.cardinality();
                    env[std::size_t(d)] =
                        domain_value_at(decls[std::size_t(d)].domain, rest % std::uint64_t(card))
                            .num;
                    rest /= std::uint64_t(card);
                }
                int holds = 0;
                for (const ExprPtr& g : guards)
                    if (!g || eval(*g, decls, env).as_bool()) ++holds;
                auto witness = [&]() {
                    std::string w;
                    for (int d : fidx) {
                        if (!w.empty()) w += ", ";
                        const Domain& dom = decls[std::size_t(d)].domain;
                        w += decls[std::size_t(d)].name + "=" +
                             value_to_string(dom, Value{dom.kind, env[std::size_t(d)]});
                    }
                    return w.empty() ? std::string("<any>") : w;
                };
                if (holds == 0 && !gap_reported) {
                    diags.add("decision-guards", n.id,
                              "no outgoing guard holds for " + witness());
                    gap_reported = true;
                }
                if (holds > 1 && !overlap_reported) {
                    diags.add("decision-guards", n.id,
                              "multiple outgoing guards hold for " + witness());
                    overlap_reported = true;
                }
                if (gap_reported && overlap_reported) break;
            }
        }
    }

    return diags;
}

inline void validate_or_throw(const ActivityDiagram& ad) {
    Diagnostics d = validate(ad);
    if (!d.ok()) throw ValidationError(std::move(d));
}

}  // namespace addiff
