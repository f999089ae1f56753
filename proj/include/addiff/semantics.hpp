#pragma once

#include <cstring>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "addiff/validate.hpp"

namespace addiff {

// One execution state: the action that fired last (tag Act), or the start
// marker before any action (Init), or the terminated marker (Fin). `env`
// holds a value per declaration, inputs first; `tokens` counts tokens per
// transition. Init states carry the token on the initial node's outgoing
// edge, Fin states an empty marking.
struct AdState {
    enum class Tag : std::uint8_t { Init, Act, Fin };

    Tag tag = Tag::Init;
    int node = -1;    // node that produced this state
    std::string ac;   // label of the last action, Act states only
    Env env;
    std::vector<std::uint8_t> tokens;

    bool operator==(const AdState& o) const {
        return tag == o.tag && node == o.node && ac == o.ac && env == o.env &&
               tokens == o.tokens;
    }
    bool operator!=(const AdState& o) const { return !(*this == o); }

    // compact byte key for hashing / visited sets
    std::string key() const {
        std::string k;
        k.reserve(8 + env.size() * 8 + tokens.size() + ac.size());
        k.push_back(char(tag));
        for (int sh = 0; sh < 32; sh += 8) k.push_back(char((node >> sh) & 0xff));
        for (std::int64_t v : env)
            for (int sh = 0; sh < 64; sh += 8) k.push_back(char((v >> sh) & 0xff));
        k.append(tokens.begin(), tokens.end());
        k += ac;
        return k;
    }
};

// Executable form of a validated diagram. Construction validates; all later
// operations assume the structural rules hold.
class Machine {
  public:
    explicit Machine(ActivityDiagram ad) : ad_(std::move(ad)) {
        validate_or_throw(ad_);
        idx_ = AdIndex::build(ad_);
        decls_ = ad_.all_vars();
        for (const Node& n : ad_.nodes) {
            std::vector<std::size_t> slots;
            for (const Assignment& a : n.assignments)
                slots.push_back(decl_index(decls_, a.var));
            assign_slots_.push_back(std::move(slots));
        }
    }

    const ActivityDiagram& ad() const { return ad_; }
    const AdIndex& index() const { return idx_; }
    const std::vector<VarDecl>& decls() const { return decls_; }
    std::size_t input_count() const { return ad_.input_vars.size(); }

    std::uint64_t input_env_count() const {
        std::uint64_t n = 1;
        for (const VarDecl& d : ad_.input_vars) n *= d.domain.cardinality();
        return n;
    }

    // k-th input assignment; the first declared input varies fastest. Locals
    // start at their domain minimum until the first action overwrites them.
    Env input_env_at(std::uint64_t k) const {
        Env env(decls_.size());
        std::size_t i = 0;
        for (; i < ad_.input_vars.size(); ++i) {
            const Domain& d = decls_[i].domain;
            env[i] = domain_value_at(d, k % d.cardinality()).num;
            k /= d.cardinality();
        }
        for (; i < decls_.size(); ++i) env[i] = domain_min(decls_[i].domain).num;
        return env;
    }

    AdState initial_state_for(Env env) const {
        AdState s;
        s.tag = AdState::Tag::Init;
        s.node = idx_.initial;
        s.env = std::move(env);
        s.tokens.assign(ad_.transitions.size(), 0);
        s.tokens[std::size_t(idx_.out[std::size_t(idx_.initial)][0])] = 1;
        return s;
    }

    // one Init state per input assignment, in input_env_at order
    std::vector<AdState> initial_states() const {
        std::vector<AdState> out;
        std::uint64_t n = input_env_count();
        out.reserve(std::size_t(n));
        for (std::uint64_t k = 0; k < n; ++k)
            out.push_back(initial_state_for(input_env_at(k)));
        return out;
    }

    static bool is_accepting(const AdState& s) { return s.tag == AdState::Tag::Fin; }

    // Moves tokens across decision, merge, fork and join nodes until every
    // token rests on an edge entering an action or final node, or waits at a
    // join whose sibling tokens have not arrived yet. `order` may reorder the
    // node scan; any order reaches the same resting marking.
    void stabilize(AdState& s, const std::vector<int>* order = nullptr) const {
        std::size_t budget =
            8 * (ad_.nodes.size() + ad_.transitions.size()) + 64;
        bool moved = true;
        while (moved) {
            moved = false;
            for (std::size_t oi = 0; oi < ad_.nodes.size(); ++oi) {
                int i = order ? (*order)[oi] : int(oi);
                const Node& n = ad_.nodes[std::size_t(i)];
                if (!is_control_pseudo(n.kind)) continue;
                const auto& ins = idx_.in[std::size_t(i)];
                const auto& outs = idx_.out[std::size_t(i)];
                switch (n.kind) {
                    case NodeKind::Decision: {
                        for (int e : ins) {
                            while (s.tokens[std::size_t(e)]) {
                                int taken = -1;
                                for (int o : outs) {
                                    const ExprPtr& g =
                                        ad_.transitions[std::size_t(o)].guard;
                                    if (!g || eval(*g, decls_, s.env).as_bool()) {
                                        taken = o;
                                        break;
                                    }
                                }
                                if (taken < 0)
                                    throw SemanticsError(
                                        "no guard of decision '" + n.id +
                                        "' holds in the current environment");
                                --s.tokens[std::size_t(e)];
                                ++s.tokens[std::size_t(taken)];
                                moved = true;
                                if (budget-- == 0)
                                    throw SemanticsError("token game does not settle");
                            }
                        }
                        break;
                    }
                    case NodeKind::Merge: {
                        for (int e : ins) {
                            while (s.tokens[std::size_t(e)]) {
                                --s.tokens[std::size_t(e)];
                                ++s.tokens[std::size_t(outs[0])];
                                moved = true;
                                if (budget-- == 0)
                                    throw SemanticsError("token game does not settle");
                            }
                        }
                        break;
                    }
                    case NodeKind::Fork: {
                        while (s.tokens[std::size_t(ins[0])]) {
                            --s.tokens[std::size_t(ins[0])];
                            for (int o : outs) ++s.tokens[std::size_t(o)];
                            moved = true;
                            if (budget-- == 0)
                                throw SemanticsError("token game does not settle");
                        }
                        break;
                    }
                    case NodeKind::Join: {
                        for (;;) {
                            bool all = true;
                            for (int e : ins)
                                if (!s.tokens[std::size_t(e)]) all = false;
                            if (!all) break;
                            for (int e : ins) --s.tokens[std::size_t(e)];
                            ++s.tokens[std::size_t(outs[0])];
                            moved = true;
                            if (budget-- == 0)
                                throw SemanticsError("token game does not settle");
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
    }

    // Successor states. Terminated states have none. A token resting on an
    // edge into a final node yields exactly the terminated state; otherwise
    // each action whose incoming edge holds a token may fire. Assignments all
    // read the pre-state environment; an assigned value outside the
    // variable's domain is an error, not a silent wrap.
    std::vector<AdState> successors(const AdState& s) const {
        std::vector<AdState> out;
        if (s.tag == AdState::Tag::Fin) return out;
        for (int f : idx_.finals) {
            for (int e : idx_.in[std::size_t(f)]) {
                if (!s.tokens[std::size_t(e)]) continue;
                AdState t;
                t.tag = AdState::Tag::Fin;
                t.node = f;
                t.env = s.env;
                t.tokens.assign(ad_.transitions.size(), 0);
                out.push_back(std::move(t));
                return out;
            }
        }
        for (std::size_t i = 0; i < ad_.nodes.size(); ++i) {
            const Node& n = ad_.nodes[i];
            if (n.kind != NodeKind::Action) continue;
            for (int e : idx_.in[i]) {
                if (!s.tokens[std::size_t(e)]) continue;
                AdState t = s;
                t.tag = AdState::Tag::Act;
                t.node = int(i);
                t.ac = n.action;
                for (std::size_t a = 0; a < n.assignments.size(); ++a) {
                    Value v = eval(*n.assignments[a].value, decls_, s.env);
                    std::size_t slot = assign_slots_[i][a];
                    if (!value_in_domain(decls_[slot].domain, v))
                        throw SemanticsError(
                            "action '" + n.id + "' assigns " +
                            std::to_string(v.num) + " to '" + decls_[slot].name +
                            "', outside its domain " +
                            domain_to_string(decls_[slot].domain));
                    t.env[slot] = v.num;
                }
                --t.tokens[std::size_t(e)];
                ++t.tokens[std::size_t(idx_.out[i][0])];
                stabilize(t);
                out.push_back(std::move(t));
            }
        }
        return out;
    }

  private:
    ActivityDiagram ad_;
    AdIndex idx_;
    std::vector<VarDecl> decls_;
    std::vector<std::vector<std::size_t>> assign_slots_;
};

// Breadth-first reachable-state set over all input assignments. Throws
// BudgetError when more than `budget` distinct states appear.
inline std::vector<AdState> reachable_states(const Machine& m,
                                             std::size_t budget = 1u << 22) {
    std::vector<AdState> out;
    std::unordered_set<std::string> seen;
    std::deque<AdState> work;
    for (AdState& s : m.initial_states()) {
        if (seen.insert(s.key()).second) {
            out.push_back(s);
            work.push_back(std::move(s));
        }
    }
    while (!work.empty()) {
        AdState s = std::move(work.front());
        work.pop_front();
        for (AdState& t : m.successors(s)) {
            if (!seen.insert(t.key()).second) continue;
            if (out.size() >= budget)
                throw BudgetError("state budget exhausted at " + std::to_string(budget) +
                                  " states");
            out.push_back(t);
            work.push_back(std::move(t));
        }
    }
    return out;
}

// Depth-first enumeration of complete runs (Init to Fin), for small models
// and tests. Runs longer than max_steps raise BudgetError, as do more than
// max_runs results.
inline std::vector<std::vector<AdState>> enumerate_runs(const Machine& m,
                                                        std::size_t max_steps = 256,
                                                        std::size_t max_runs = 1u << 20) {
    std::vector<std::vector<AdState>> runs;
    std::vector<AdState> path;
    auto rec = [&](auto&& self, const AdState& s) -> void {
        path.push_back(s);
        if (path.size() > max_steps + 1)
            throw BudgetError("run exceeds " + std::to_string(max_steps) + " steps");
        if (Machine::is_accepting(s)) {
            if (runs.size() >= max_runs)
                throw BudgetError("more than " + std::to_string(max_runs) + " runs");
            runs.push_back(path);
        } else {
            for (const AdState& t : m.successors(s)) self(self, t);
        }
        path.pop_back();
    };
    for (const AdState& s : m.initial_states()) rec(rec, s);
    return runs;
}

}  // namespace addiff
