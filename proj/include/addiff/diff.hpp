#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "addiff/encode.hpp"
#include "addiff/semantics.hpp"

namespace addiff {

// Two runs are compared action by action: states correspond when they carry
// the same last action (or both are fresh / both terminated) and agree on
// every input variable the diagrams share by name.
class Correspondence {
  public:
    Correspondence(const Machine& m1, const Machine& m2) {
        for (std::size_t i = 0; i < m1.input_count(); ++i)
            for (std::size_t j = 0; j < m2.input_count(); ++j) {
                const VarDecl& a = m1.decls()[i];
                const VarDecl& b = m2.decls()[j];
                if (a.name != b.name) continue;
                if (a.domain != b.domain)
                    throw Error("shared input '" + a.name +
                                "' has different domains in the two diagrams");
                shared_.emplace_back(i, j);
            }
    }

    bool corresponding(const AdState& s1, const AdState& s2) const {
        if (s1.tag != s2.tag) return false;
        if (s1.tag == AdState::Tag::Act && s1.ac != s2.ac) return false;
        for (auto [i, j] : shared_)
            if (s1.env[i] != s2.env[j]) return false;
        return true;
    }

    const std::vector<std::pair<std::size_t, std::size_t>>& shared() const { return shared_; }

  private:
    std::vector<std::pair<std::size_t, std::size_t>> shared_;
};

// One step of a pair of runs; the second component is absent in the final
// state of a diff trace, where the second diagram can no longer follow.
struct CombinedState {
    AdState s1;
    std::optional<AdState> s2;
};

// Exploration unit of the pairwise search. Identity is the current state
// pair only; the predecessors are kept for trace reconstruction.
struct Pair {
    AdState pre1, cur1;
    std::optional<AdState> pre2, cur2;

    bool operator==(const Pair& o) const { return cur1 == o.cur1 && cur2 == o.cur2; }
    std::string key() const {
        std::string k1 = cur1.key();
        std::string k2 = cur2 ? cur2->key() : std::string();
        std::string out;
        std::uint64_t n = k1.size();
        for (int b = 0; b < 8; ++b) out.push_back(char((n >> (8 * b)) & 0xff));
        out += k1;
        out += k2;
        return out;
    }
};

// A shortest witness: a run prefix possible in the first diagram whose last
// step has no counterpart in the second.
struct DiffTrace {
    std::vector<CombinedState> states;
    std::vector<std::int64_t> inputs;  // first diagram's input values

    std::size_t length() const { return states.size(); }
};

enum class Algo { Concrete, Symbolic };

struct DiffOptions {
    bool decide_only = false;
    std::size_t max_traces = 0;  // 0 = all
    std::size_t state_budget = std::size_t(1) << 22;
    std::size_t node_budget = std::size_t(1) << 22;
    Algo algo = Algo::Symbolic;
};

struct DiffResult {
    bool difference = false;
    std::vector<DiffTrace> traces;  // shortest first
    double decide_ms = 0.0;         // time to the existence verdict
    double total_ms = 0.0;
    std::size_t explored_pairs = 0;  // concrete search
    std::size_t fixpoint_depth = 0;  // symbolic search
};

// All layers of the backward fixpoint, for inspection: layer 0 holds the
// non-corresponding pairs, layer i the pairs from which the first diagram
// can force a divergence within i steps.
struct FixpointMemory {
    std::vector<BddManager::Ref> mem;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline std::vector<std::int64_t> input_values(const Machine& m, const AdState& s) {
    return {s.env.begin(), s.env.begin() + std::ptrdiff_t(m.input_count())};
}

// canonical state order: node id, then environment, then marking
inline bool canonical_less(const Machine& m, const AdState& a, const AdState& b) {
    const std::string& ia = m.ad().nodes[std::size_t(a.node)].id;
    const std::string& ib = m.ad().nodes[std::size_t(b.node)].id;
    if (ia != ib) return ia < ib;
    if (a.env != b.env) return a.env < b.env;
    if (a.tokens != b.tokens) return a.tokens < b.tokens;
    if (a.tag != b.tag) return a.tag < b.tag;
    return a.ac < b.ac;
}

inline std::vector<AdState> sorted_successors(const Machine& m, const AdState& s) {
    std::vector<AdState> out = m.successors(s);
    std::sort(out.begin(), out.end(),
              [&](const AdState& a, const AdState& b) { return canonical_less(m, a, b); });
    return out;
}

inline std::vector<int> merged_bits(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace detail

// Breadth-first search over corresponding state pairs. A pair whose first
// component can step while no second-component step matches yields a diff
// trace; afterwards all queued pairs with the same input values are dropped,
// so each input assignment contributes at most one, shortest, witness.
inline DiffResult concrete_addiff(const Machine& m1, const Machine& m2,
                                  const DiffOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    Correspondence corr(m1, m2);
    DiffResult res;

    std::unordered_map<std::string, Pair> visited;
    std::deque<std::string> queue;
    std::set<std::vector<std::int64_t>> rejected;

    auto reconstruct = [&](const Pair& at, const AdState& last1) {
        std::vector<CombinedState> rev;
        rev.push_back({last1, std::nullopt});
        Pair cur = at;
        for (;;) {
            rev.push_back({cur.cur1, cur.cur2});
            if (cur.pre1 == cur.cur1 && cur.pre2 == cur.cur2) break;
            Pair parent;
            parent.cur1 = cur.pre1;
            parent.cur2 = cur.pre2;
            cur = visited.at(parent.key());
        }
        DiffTrace t;
        t.states.assign(rev.rbegin(), rev.rend());
        t.inputs = detail::input_values(m1, t.states.front().s1);
        return t;
    };

    auto emit = [&](DiffTrace t) {
        if (res.decide_ms == 0.0) res.decide_ms = detail::ms_since(t0);
        res.difference = true;
        if (!opts.decide_only) res.traces.push_back(std::move(t));
    };

    // seed with every matching pair of initial states
    std::vector<AdState> ini2 = m2.initial_states();
    for (AdState& s1 : m1.initial_states()) {
        bool found = false;
        for (const AdState& s2 : ini2) {
            if (!corr.corresponding(s1, s2)) continue;
            found = true;
            Pair p{s1, s1, s2, s2};
            std::string k = p.key();
            if (visited.emplace(k, p).second) queue.push_back(std::move(k));
        }
        if (!found) {
            rejected.insert(detail::input_values(m1, s1));
            DiffTrace t;
            t.states.push_back({s1, std::nullopt});
            t.inputs = detail::input_values(m1, s1);
            emit(std::move(t));
            if (opts.decide_only) {
                res.total_ms = detail::ms_since(t0);
                return res;
            }
        }
    }

    while (!queue.empty()) {
        if (opts.max_traces && res.traces.size() >= opts.max_traces) break;
        Pair pair = visited.at(queue.front());
        queue.pop_front();
        if (rejected.count(detail::input_values(m1, pair.cur1))) continue;

        std::vector<AdState> succ1 = detail::sorted_successors(m1, pair.cur1);
        std::vector<AdState> succ2 = detail::sorted_successors(m2, *pair.cur2);
        for (const AdState& s1 : succ1) {
            bool found = false;
            for (const AdState& s2 : succ2) {
                if (!corr.corresponding(s1, s2)) continue;
                found = true;
                Pair next{pair.cur1, s1, pair.cur2, s2};
                std::string k = next.key();
                if (visited.emplace(k, next).second) {
                    if (visited.size() > opts.state_budget)
                        throw BudgetError("pair state budget exhausted (" +
                                          std::to_string(opts.state_budget) + " pairs)");
                    queue.push_back(std::move(k));
                }
            }
            if (!found) {
                rejected.insert(detail::input_values(m1, pair.cur1));
                emit(opts.decide_only ? DiffTrace{} : reconstruct(pair, s1));
                if (opts.decide_only) {
                    res.explored_pairs = visited.size();
                    res.total_ms = detail::ms_since(t0);
                    return res;
                }
                break;
            }
        }
    }

    res.explored_pairs = visited.size();
    res.total_ms = detail::ms_since(t0);
    if (!res.difference) res.decide_ms = res.total_ms;
    return res;
}

// Backward fixpoint over the joint encoding. Layer i collects the pairs
// from which the first diagram forces a divergence within i steps; the
// verdict only needs the first layer that touches an initial pair, so the
// existence check stops right there.
inline DiffResult symbolic_addiff(const Machine& m1, const Machine& m2,
                                  const DiffOptions& opts = {},
                                  FixpointMemory* mem_out = nullptr) {
    using Ref = BddManager::Ref;
    auto t0 = std::chrono::steady_clock::now();
    DiffResult res;
    SymbolicContext ctx(m1, m2, opts.node_budget);
    BddManager& g = ctx.mgr();

    Ref z = g.apply_and(ctx.universe(), g.negate(ctx.corr()));
    std::vector<Ref> mem{z};
    Ref initials = ctx.initial_pairs();

    // first diagram's initial states that no initial pair covers at all
    Ref covered = g.exists(initials, ctx.ubits(1));
    Ref uncovered = g.apply_diff(ctx.initial_set(0), covered);
    bool decided = uncovered != 0;

    for (;;) {
        if (decided && opts.decide_only) break;
        Ref next = g.apply_or(mem.back(), ctx.pre_pairs(mem.back()));
        if (!decided && g.apply_and(next, initials) != 0) decided = true;
        if (next == mem.back()) break;
        mem.push_back(next);
    }
    res.fixpoint_depth = mem.size() - 1;
    res.difference = decided || g.apply_and(mem.back(), initials) != 0;
    res.decide_ms = detail::ms_since(t0);
    if (mem_out) mem_out->mem = mem;
    if (opts.decide_only || !res.difference) {
        res.total_ms = detail::ms_since(t0);
        return res;
    }

    const std::vector<int>& u1 = ctx.ubits(0);
    const std::vector<int>& u2 = ctx.ubits(1);
    const std::vector<int>& p1 = ctx.pbits(0);
    const std::vector<int>& p2 = ctx.pbits(1);
    Ref t1 = ctx.step_relation(0);
    Ref t2 = ctx.step_relation(1);

    // walk one witness forward through the layers; every move keeps the
    // remaining pair inside the next-lower layer, so the run ends exactly
    // when the second diagram runs out of matching steps
    auto walk = [&](AdState s1, AdState s2, std::size_t j) {
        DiffTrace t;
        t.inputs = detail::input_values(m1, s1);
        t.states.push_back({s1, s2});
        std::size_t i = j;
        for (;;) {
            if (i == 0) throw Error("diff walk overran the fixpoint layers");
            Ref c1 = ctx.state_cube(0, s1);
            Ref c2 = ctx.state_cube(1, s2);
            Ref moves1 = g.exists(g.apply_and(t1, c1), u1);  // over primed ad1 bits
            Ref steps2 = g.apply_and(t2, c2);
            Ref layer_p = ctx.swap_primed(mem[i - 1]);
            // ad1 moves that leave every ad2 answer inside the lower layer
            Ref escapes = g.exists(g.exists(g.apply_and(steps2, g.negate(layer_p)), p2), u2);
            Ref forcing = g.apply_and(moves1, g.negate(escapes));
            if (forcing == 0) throw Error("diff walk lost the forcing move");
            AdState n1 = ctx.decode_state(0, g.pick_one(forcing, p1), true);
            Ref n1c = ctx.state_cube(0, n1, true);
            Ref answers =
                g.exists(g.apply_and(g.apply_and(steps2, ctx.corr_primed()), n1c),
                         detail::merged_bits(u2, p1));
            if (answers == 0) {
                t.states.push_back({n1, std::nullopt});
                return t;
            }
            AdState n2 = ctx.decode_state(1, g.pick_one(answers, p2), true);
            t.states.push_back({n1, n2});
            s1 = std::move(n1);
            s2 = std::move(n2);
            --i;
        }
    };

    for (Ref f = uncovered; f != 0;) {  // inputs with no matching start at all
        std::vector<char> bits = g.pick_one(f, u1);
        AdState s1 = ctx.decode_state(0, bits);
        DiffTrace t;
        t.inputs = detail::input_values(m1, s1);
        t.states.push_back({s1, std::nullopt});
        res.traces.push_back(std::move(t));
        f = g.apply_diff(f, ctx.state_cube(0, s1));
    }

    Ref witnesses = g.apply_and(mem.back(), initials);
    Ref starts1 = g.exists(witnesses, u2);
    g.enumerate(starts1, u1, [&](const std::vector<char>& bits) {
        AdState s1 = ctx.decode_state(0, bits);
        Ref c1 = ctx.state_cube(0, s1);
        std::size_t j = 1;
        while (g.apply_and(g.apply_and(mem[j], initials), c1) == 0) ++j;
        Ref mates = g.exists(g.apply_and(g.apply_and(mem[j], initials), c1), u1);
        AdState s2 = ctx.decode_state(1, g.pick_one(mates, u2));
        res.traces.push_back(walk(std::move(s1), std::move(s2), j));
        return true;
    });

    std::stable_sort(res.traces.begin(), res.traces.end(),
                     [](const DiffTrace& a, const DiffTrace& b) {
                         return a.states.size() < b.states.size();
                     });
    if (opts.max_traces && res.traces.size() > opts.max_traces)
        res.traces.resize(opts.max_traces);
    res.total_ms = detail::ms_since(t0);
    return res;
}

inline DiffResult compute_diff(const Machine& m1, const Machine& m2,
                               const DiffOptions& opts = {}) {
    return opts.algo == Algo::Concrete ? concrete_addiff(m1, m2, opts)
                                       : symbolic_addiff(m1, m2, opts);
}

inline bool has_difference(const Machine& m1, const Machine& m2, DiffOptions opts = {}) {
    opts.decide_only = true;
    return compute_diff(m1, m2, opts).difference;
}

// Four-valued containment verdict between the trace sets of two diagrams.
enum class CompareVerdict { Equivalent, Less, Greater, Incomparable };

inline const char* verdict_symbol(CompareVerdict v) {
    switch (v) {
        case CompareVerdict::Equivalent: return "==";
        case CompareVerdict::Less: return "<";
        case CompareVerdict::Greater: return ">";
        case CompareVerdict::Incomparable: return "<>";
    }
    return "?";
}

inline const char* verdict_name(CompareVerdict v) {
    switch (v) {
        case CompareVerdict::Equivalent: return "equivalent";
        case CompareVerdict::Less: return "less";
        case CompareVerdict::Greater: return "greater";
        case CompareVerdict::Incomparable: return "incomparable";
    }
    return "?";
}

inline CompareVerdict compare_diagrams(const Machine& m1, const Machine& m2,
                                       DiffOptions opts = {}) {
    bool extra1 = has_difference(m1, m2, opts);  // runs only m1 admits
    bool extra2 = has_difference(m2, m1, opts);
    if (extra1 && extra2) return CompareVerdict::Incomparable;
    if (extra1) return CompareVerdict::Greater;
    if (extra2) return CompareVerdict::Less;
    return CompareVerdict::Equivalent;
}

struct HistoryStep {
    std::size_t from, to;  // version indices
    CompareVerdict verdict;
};

// Pairwise verdicts along a sequence of versions of one diagram.
inline std::vector<HistoryStep> analyze_history(const std::vector<Machine>& versions,
                                                const DiffOptions& opts = {}) {
    std::vector<HistoryStep> out;
    for (std::size_t i = 0; i + 1 < versions.size(); ++i)
        out.push_back({i, i + 1, compare_diagrams(versions[i], versions[i + 1], opts)});
    return out;
}

}  // namespace addiff
