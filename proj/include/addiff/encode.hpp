#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "addiff/bdd.hpp"
#include "addiff/semantics.hpp"

namespace addiff {

// Bit block of one state register. Bit 0 is the most significant, so the
// manager's lexicographic pick_one yields numerically smallest values.
struct BitReg {
    std::vector<int> u, p;
    int width() const { return int(u.size()); }
};

// Joint decision-diagram encoding of two diagrams. Layout pairs every
// unprimed bit with its primed twin and keeps blocks that get compared
// (the two `ac` registers, shared inputs) adjacent.
//
// `ac` ranges over a joint code space: 0 marks the not-yet-started run,
// 1 the terminated run, and 2+k the k-th label of the sorted united
// action alphabet, so label equality across the diagrams is bit equality.
class SymbolicContext {
  public:
    using Ref = BddManager::Ref;

    SymbolicContext(const Machine& m1, const Machine& m2,
                    std::size_t node_budget = std::size_t(1) << 22)
        : machines_{&m1, &m2} {
        std::set<std::string> labels = action_alphabet(m1.ad());
        for (const std::string& l : action_alphabet(m2.ad())) labels.insert(l);
        labels_.assign(labels.begin(), labels.end());
        build_layout();
        mgr_ = std::make_unique<BddManager>(total_bits_, node_budget);
        build_sets();
    }

    BddManager& mgr() { return *mgr_; }
    const Machine& machine(int side) const { return *machines_[std::size_t(side)]; }

    Ref step_relation(int side) const { return T_[std::size_t(side)]; }
    Ref corr() const { return corr_; }
    Ref corr_primed() const { return corr_primed_; }
    Ref initial_pairs() const { return initials_; }
    Ref initial_set(int side) const { return ini_[std::size_t(side)]; }
    Ref universe() const { return universe_; }

    const std::vector<int>& ubits(int side) const { return ubits_[std::size_t(side)]; }
    const std::vector<int>& pbits(int side) const { return pbits_[std::size_t(side)]; }
    const std::vector<int>& input_ubits(int side) const {
        return input_ubits_[std::size_t(side)];
    }

    Ref swap_primed(Ref f) { return mgr_->permute(f, swap_perm_); }

    int label_code(const std::string& l) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
        if (it == labels_.end() || *it != l) throw Error("unknown action label: " + l);
        return 2 + int(it - labels_.begin());
    }

    std::uint64_t ac_code(const AdState& s) const {
        switch (s.tag) {
            case AdState::Tag::Init: return 0;
            case AdState::Tag::Fin: return 1;
            case AdState::Tag::Act: return std::uint64_t(label_code(s.ac));
        }
        return 0;
    }

    // minterm of one concrete state over a side's unprimed or primed bits
    Ref state_cube(int side, const AdState& s, bool primed = false) {
        const Side& sd = side_[std::size_t(side)];
        std::vector<std::pair<int, bool>> lits;
        add_value(lits, sd.ac, ac_code(s), primed);
        add_value(lits, sd.acnode, std::uint64_t(s.node), primed);
        const auto& decls = machine(side).decls();
        for (std::size_t d = 0; d < decls.size(); ++d)
            add_value(lits, sd.var[d],
                      domain_index_of(decls[d].domain, Value{decls[d].domain.kind, s.env[d]}),
                      primed);
        for (std::size_t j = 0; j < sd.tok.size(); ++j) {
            if (s.tokens[j] > 1)
                throw SemanticsError("marking with stacked tokens cannot be encoded");
            add_value(lits, sd.tok[j], s.tokens[j], primed);
        }
        return mgr_->cube(std::move(lits));
    }

    // inverse of state_cube for a full assignment over one side's bits
    AdState decode_state(int side, const std::vector<char>& bits, bool primed = false) {
        const Side& sd = side_[std::size_t(side)];
        const std::vector<int>& order = primed ? pbits_[std::size_t(side)]
                                               : ubits_[std::size_t(side)];
        std::map<int, int> at;  // bit position -> value
        for (std::size_t i = 0; i < order.size(); ++i) at[order[i]] = bits[i];
        auto value = [&](const BitReg& r) {
            std::uint64_t v = 0;
            for (int b : primed ? r.p : r.u) v = (v << 1) | std::uint64_t(at.at(b));
            return v;
        };
        AdState s;
        std::uint64_t ac = value(sd.ac);
        if (ac == 0) {
            s.tag = AdState::Tag::Init;
        } else if (ac == 1) {
            s.tag = AdState::Tag::Fin;
        } else {
            s.tag = AdState::Tag::Act;
            s.ac = labels_[std::size_t(ac - 2)];
        }
        s.node = int(value(sd.acnode));
        const auto& decls = machine(side).decls();
        s.env.resize(decls.size());
        for (std::size_t d = 0; d < decls.size(); ++d)
            s.env[d] = domain_value_at(decls[d].domain, value(sd.var[d])).num;
        s.tokens.resize(sd.tok.size());
        for (std::size_t j = 0; j < sd.tok.size(); ++j)
            s.tokens[j] = std::uint8_t(value(sd.tok[j]));
        return s;
    }

    // input environment from an assignment over input_ubits(side)
    Env input_env_from(int side, const std::vector<char>& bits) const {
        const Side& sd = side_[std::size_t(side)];
        const Machine& m = machine(side);
        std::map<int, int> at;
        const std::vector<int>& order = input_ubits_[std::size_t(side)];
        for (std::size_t i = 0; i < order.size(); ++i) at[order[i]] = bits[i];
        Env env(m.decls().size());
        for (std::size_t d = 0; d < m.input_count(); ++d) {
            std::uint64_t v = 0;
            for (int b : sd.var[d].u) v = (v << 1) | std::uint64_t(at.at(b));
            env[d] = domain_value_at(m.decls()[d].domain, v).num;
        }
        for (std::size_t d = m.input_count(); d < m.decls().size(); ++d)
            env[d] = domain_min(m.decls()[d].domain).num;
        return env;
    }

    // successors of a set given over one side's unprimed bits
    Ref image(int side, Ref x) {
        Ref stepped = mgr_->exists(mgr_->apply_and(T_[std::size_t(side)], x),
                                   ubits_[std::size_t(side)]);
        return swap_primed(stepped);
    }

    // all states reachable from the side's initial set
    Ref reachable(int side) {
        Ref r = ini_[std::size_t(side)];
        for (;;) {
            Ref next = mgr_->apply_or(r, image(side, r));
            if (next == r) return r;
            r = next;
        }
    }

    double count_states(int side, Ref x) { return mgr_->sat_count(x, ubits(side)); }

    // pair pre-step: pairs with an ad1 move whose every ad2 answer lands in x
    Ref pre_pairs(Ref x) {
        Ref xp = swap_primed(x);
        Ref answers = mgr_->apply_or(mgr_->negate(T_[1]), xp);
        Ref forced = mgr_->forall(answers, pbits_[1]);
        return mgr_->exists(mgr_->apply_and(T_[0], forced), pbits_[0]);
    }

  private:
    struct Side {
        BitReg ac, acnode;
        std::vector<BitReg> var;  // aligned with Machine::decls()
        std::vector<BitReg> tok;  // aligned with transitions
    };

    static int bits_for(std::uint64_t n) {
        int w = 1;
        while ((n - 1) >> w) ++w;
        return w;
    }

    BitReg alloc(int w) {
        BitReg r;
        for (int b = 0; b < w; ++b) {
            r.u.push_back(total_bits_++);
            r.p.push_back(total_bits_++);
        }
        return r;
    }

    void build_layout() {
        const Machine& m1 = machine(0);
        const Machine& m2 = machine(1);
        int acw = bits_for(2 + std::uint64_t(labels_.size()));
        side_[0].ac = alloc(acw);
        side_[1].ac = alloc(acw);
        side_[0].acnode = alloc(bits_for(m1.ad().nodes.size()));
        side_[1].acnode = alloc(bits_for(m2.ad().nodes.size()));
        side_[0].var.resize(m1.decls().size());
        side_[1].var.resize(m2.decls().size());
        auto var_width = [](const VarDecl& d) { return bits_for(d.domain.cardinality()); };
        // shared inputs first, each pair of blocks adjacent
        for (std::size_t i = 0; i < m1.input_count(); ++i) {
            const VarDecl& d1 = m1.decls()[i];
            for (std::size_t j = 0; j < m2.input_count(); ++j) {
                const VarDecl& d2 = m2.decls()[j];
                if (d1.name != d2.name) continue;
                if (d1.domain != d2.domain)
                    throw Error("shared input '" + d1.name +
                                "' has different domains in the two diagrams");
                side_[0].var[i] = alloc(var_width(d1));
                side_[1].var[j] = alloc(var_width(d2));
            }
        }
        for (int s = 0; s < 2; ++s)
            for (std::size_t i = 0; i < machine(s).input_count(); ++i)
                if (side_[s].var[i].width() == 0)
                    side_[s].var[i] = alloc(var_width(machine(s).decls()[i]));
        for (int s = 0; s < 2; ++s)
            for (std::size_t i = machine(s).input_count(); i < machine(s).decls().size(); ++i)
                side_[s].var[i] = alloc(var_width(machine(s).decls()[i]));
        std::size_t tmax = std::max(m1.ad().transitions.size(), m2.ad().transitions.size());
        side_[0].tok.resize(m1.ad().transitions.size());
        side_[1].tok.resize(m2.ad().transitions.size());
        for (std::size_t j = 0; j < tmax; ++j)
            for (int s = 0; s < 2; ++s)
                if (j < side_[std::size_t(s)].tok.size()) side_[std::size_t(s)].tok[j] = alloc(1);

        swap_perm_.resize(std::size_t(total_bits_));
        auto note = [&](const BitReg& r) {
            for (int b = 0; b < r.width(); ++b) {
                swap_perm_[std::size_t(r.u[std::size_t(b)])] = r.p[std::size_t(b)];
                swap_perm_[std::size_t(r.p[std::size_t(b)])] = r.u[std::size_t(b)];
            }
        };
        for (int s = 0; s < 2; ++s) {
            Side& sd = side_[std::size_t(s)];
            note(sd.ac);
            note(sd.acnode);
            for (const BitReg& r : sd.var) note(r);
            for (const BitReg& r : sd.tok) note(r);
            auto collect = [&](std::vector<int>& dst, bool primed) {
                auto push = [&](const BitReg& r) {
                    for (int b : primed ? r.p : r.u) dst.push_back(b);
                };
                push(sd.ac);
                push(sd.acnode);
                for (const BitReg& r : sd.var) push(r);
                for (const BitReg& r : sd.tok) push(r);
                std::sort(dst.begin(), dst.end());
            };
            collect(ubits_[std::size_t(s)], false);
            collect(pbits_[std::size_t(s)], true);
            for (std::size_t d = 0; d < machine(s).input_count(); ++d)
                for (int b : sd.var[d].u) input_ubits_[std::size_t(s)].push_back(b);
            std::sort(input_ubits_[std::size_t(s)].begin(), input_ubits_[std::size_t(s)].end());
        }
    }

    static void add_value(std::vector<std::pair<int, bool>>& lits, const BitReg& r,
                          std::uint64_t v, bool primed) {
        int w = r.width();
        for (int b = 0; b < w; ++b)
            lits.emplace_back(primed ? r.p[std::size_t(b)] : r.u[std::size_t(b)],
                              ((v >> (w - 1 - b)) & 1) != 0);
    }

    Ref value_cube(const BitReg& r, std::uint64_t v, bool primed) {
        std::vector<std::pair<int, bool>> lits;
        add_value(lits, r, v, primed);
        return mgr_->cube(std::move(lits));
    }

    Ref preserve(const BitReg& r) {
        Ref f = 1;
        for (int b = 0; b < r.width(); ++b)
            f = mgr_->apply_and(
                f, mgr_->apply_eq(mgr_->var(r.u[std::size_t(b)]), mgr_->var(r.p[std::size_t(b)])));
        return f;
    }

    Ref regs_equal(const BitReg& a, const BitReg& b, bool primed) {
        if (a.width() != b.width()) throw Error("register width mismatch");
        Ref f = 1;
        for (int i = 0; i < a.width(); ++i) {
            const auto& ba = primed ? a.p : a.u;
            const auto& bb = primed ? b.p : b.u;
            f = mgr_->apply_and(f, mgr_->apply_eq(mgr_->var(ba[std::size_t(i)]),
                                                  mgr_->var(bb[std::size_t(i)])));
        }
        return f;
    }

    // token bookkeeping of one step: -1 keep, 0 clear, 1 set
    Ref marking_formula(int side, const std::vector<int>& pre_ones,
                        const std::vector<int>& post, Ref extra) {
        const Side& sd = side_[std::size_t(side)];
        Ref f = extra;
        for (int e : pre_ones) f = mgr_->apply_and(f, mgr_->var(sd.tok[std::size_t(e)].u[0]));
        for (std::size_t j = 0; j < sd.tok.size(); ++j) {
            switch (post[j]) {
                case -1: f = mgr_->apply_and(f, preserve(sd.tok[j])); break;
                case 0: f = mgr_->apply_and(f, mgr_->nvar(sd.tok[j].p[0])); break;
                default: f = mgr_->apply_and(f, mgr_->var(sd.tok[j].p[0])); break;
            }
        }
        return f;
    }

    void build_sets() {
        for (int s = 0; s < 2; ++s) T_[std::size_t(s)] = build_step_relation(s);

        // correspondence: equal ac codes and equal shared inputs
        const Machine& m1 = machine(0);
        const Machine& m2 = machine(1);
        corr_ = regs_equal(side_[0].ac, side_[1].ac, false);
        Ref corr_p = regs_equal(side_[0].ac, side_[1].ac, true);
        for (std::size_t i = 0; i < m1.input_count(); ++i)
            for (std::size_t j = 0; j < m2.input_count(); ++j)
                if (m1.decls()[i].name == m2.decls()[j].name) {
                    corr_ = mgr_->apply_and(corr_,
                                            regs_equal(side_[0].var[i], side_[1].var[j], false));
                    corr_p = mgr_->apply_and(
                        corr_p, regs_equal(side_[0].var[i], side_[1].var[j], true));
                }
        corr_primed_ = corr_p;

        for (int s = 0; s < 2; ++s) {
            const Machine& m = machine(s);
            const Side& sd = side_[std::size_t(s)];
            std::vector<std::pair<int, bool>> lits;
            add_value(lits, sd.ac, 0, false);
            add_value(lits, sd.acnode, std::uint64_t(m.index().initial), false);
            for (std::size_t d = m.input_count(); d < m.decls().size(); ++d)
                add_value(lits, sd.var[d],
                          domain_index_of(m.decls()[d].domain, domain_min(m.decls()[d].domain)),
                          false);
            int e0 = m.index().out[std::size_t(m.index().initial)][0];
            for (std::size_t j = 0; j < sd.tok.size(); ++j)
                add_value(lits, sd.tok[j], int(j) == e0 ? 1 : 0, false);
            ini_[std::size_t(s)] = mgr_->cube(std::move(lits));
        }
        initials_ = mgr_->apply_and(mgr_->apply_and(ini_[0], ini_[1]), corr_);

        universe_ = 1;
        for (int s = 0; s < 2; ++s) {
            const Machine& m = machine(s);
            const Side& sd = side_[std::size_t(s)];
            auto restrict_reg = [&](const BitReg& r, std::uint64_t count) {
                Ref any = 0;
                for (std::uint64_t v = 0; v < count; ++v)
                    any = mgr_->apply_or(any, value_cube(r, v, false));
                universe_ = mgr_->apply_and(universe_, any);
            };
            restrict_reg(sd.ac, 2 + std::uint64_t(labels_.size()));
            restrict_reg(sd.acnode, m.ad().nodes.size());
            for (std::size_t d = 0; d < m.decls().size(); ++d)
                restrict_reg(sd.var[d], m.decls()[d].domain.cardinality());
        }
    }

    Ref build_step_relation(int side) {
        const Machine& m = machine(side);
        const ActivityDiagram& ad = m.ad();
        const AdIndex& idx = m.index();
        const Side& sd = side_[std::size_t(side)];
        const std::vector<VarDecl>& decls = m.decls();
        const std::size_t ntrans = ad.transitions.size();
        Ref T = 0;

        Ref env_preserved = 1;
        for (const BitReg& r : sd.var) env_preserved = mgr_->apply_and(env_preserved, preserve(r));

        // run termination: a token entering a final node clears the marking
        for (int f : idx.finals) {
            for (int e : idx.in[std::size_t(f)]) {
                std::vector<int> post(ntrans, 0);
                Ref head = mgr_->apply_and(value_cube(sd.ac, 1, true),
                                           value_cube(sd.acnode, std::uint64_t(f), true));
                head = mgr_->apply_and(head, env_preserved);
                T = mgr_->apply_or(T, marking_formula(side, {e}, post, head));
            }
        }

        for (std::size_t i = 0; i < ad.nodes.size(); ++i) {
            const Node& n = ad.nodes[i];
            if (n.kind != NodeKind::Action) continue;
            int o = idx.out[i][0];
            int tgt = idx.node(ad.transitions[std::size_t(o)].trg);
            const Node& p = ad.nodes[std::size_t(tgt)];

            // declarations the step actually reads or writes
            std::set<std::size_t> rel;
            for (const Assignment& a : n.assignments) {
                rel.insert(decl_index(decls, a.var));
                for (const std::string& v : free_vars(a.value, decls))
                    rel.insert(decl_index(decls, v));
            }
            if (p.kind == NodeKind::Decision)
                for (int b : idx.out[std::size_t(tgt)])
                    for (const std::string& v :
                         free_vars(ad.transitions[std::size_t(b)].guard, decls))
                        rel.insert(decl_index(decls, v));
            std::vector<std::size_t> rvars(rel.begin(), rel.end());
            std::uint64_t combos = 1;
            for (std::size_t d : rvars) {
                combos *= decls[d].domain.cardinality();
                if (combos > (std::uint64_t(1) << 16))
                    throw BudgetError("variable domains too large for the symbolic encoding");
            }

            Ref env_rest = 1;  // untouched variables keep their values
            for (std::size_t d = 0; d < decls.size(); ++d)
                if (!rel.count(d)) env_rest = mgr_->apply_and(env_rest, preserve(sd.var[d]));

            Ref head_label =
                mgr_->apply_and(value_cube(sd.ac, std::uint64_t(label_code(n.action)), true),
                                value_cube(sd.acnode, std::uint64_t(i), true));

            for (std::uint64_t c = 0; c < combos; ++c) {
                // concrete pre-values of the relevant variables
                Env env(decls.size(), 0);
                std::uint64_t rest = c;
                for (std::size_t d : rvars) {
                    std::uint64_t card = decls[d].domain.cardinality();
                    env[d] = domain_value_at(decls[d].domain, rest % card).num;
                    rest /= card;
                }
                Env env2 = env;
                bool fits = true;
                for (const Assignment& a : n.assignments) {
                    Value v = eval(*a.value, decls, env);
                    std::size_t slot = decl_index(decls, a.var);
                    if (!value_in_domain(decls[slot].domain, v)) {
                        fits = false;
                        break;
                    }
                    env2[slot] = v.num;
                }
                if (!fits) continue;  // no such step exists

                Ref env_bits = env_rest;
                for (std::size_t d : rvars) {
                    std::uint64_t uv = domain_index_of(decls[d].domain,
                                                       Value{decls[d].domain.kind, env[d]});
                    std::uint64_t pv = domain_index_of(decls[d].domain,
                                                       Value{decls[d].domain.kind, env2[d]});
                    env_bits = mgr_->apply_and(env_bits, value_cube(sd.var[d], uv, false));
                    env_bits = mgr_->apply_and(env_bits, value_cube(sd.var[d], pv, true));
                }
                Ref head = mgr_->apply_and(head_label, env_bits);

                for (int e : idx.in[i]) {
                    std::vector<int> post(ntrans, -1);
                    post[std::size_t(e)] = 0;
                    switch (p.kind) {
                        case NodeKind::Action:
                        case NodeKind::Final: {
                            post[std::size_t(o)] = 1;
                            T = mgr_->apply_or(T, marking_formula(side, {e}, post, head));
                            break;
                        }
                        case NodeKind::Merge: {
                            post[std::size_t(idx.out[std::size_t(tgt)][0])] = 1;
                            T = mgr_->apply_or(T, marking_formula(side, {e}, post, head));
                            break;
                        }
                        case NodeKind::Fork: {
                            for (int b : idx.out[std::size_t(tgt)]) post[std::size_t(b)] = 1;
                            T = mgr_->apply_or(T, marking_formula(side, {e}, post, head));
                            break;
                        }
                        case NodeKind::Decision: {
                            // the post environment is concrete, so the branch is too
                            int taken = -1;
                            for (int b : idx.out[std::size_t(tgt)]) {
                                const ExprPtr& g = ad.transitions[std::size_t(b)].guard;
                                if (!g || eval(*g, decls, env2).as_bool()) {
                                    taken = b;
                                    break;
                                }
                            }
                            if (taken < 0) break;  // stuck decision, no step
                            post[std::size_t(taken)] = 1;
                            T = mgr_->apply_or(T, marking_formula(side, {e}, post, head));
                            break;
                        }
                        case NodeKind::Join: {
                            Ref ready = 1;
                            std::vector<int> sibs;
                            for (int e2 : idx.in[std::size_t(tgt)])
                                if (e2 != o) sibs.push_back(e2);
                            for (int e2 : sibs)
                                ready = mgr_->apply_and(ready,
                                                        mgr_->var(sd.tok[std::size_t(e2)].u[0]));
                            std::vector<int> fired = post;
                            for (int e2 : sibs) fired[std::size_t(e2)] = 0;
                            fired[std::size_t(idx.out[std::size_t(tgt)][0])] = 1;
                            Ref go = marking_formula(side, {e}, fired,
                                                     mgr_->apply_and(head, ready));
                            std::vector<int> wait = post;
                            wait[std::size_t(o)] = 1;
                            Ref stay = marking_formula(side, {e}, wait,
                                                       mgr_->apply_and(head, mgr_->negate(ready)));
                            T = mgr_->apply_or(T, mgr_->apply_or(go, stay));
                            break;
                        }
                        default: break;
                    }
                }
            }
        }
        return T;
    }

    const Machine* machines_[2];
    std::vector<std::string> labels_;  // sorted joint alphabet
    Side side_[2];
    int total_bits_ = 0;
    std::vector<int> swap_perm_;
    std::vector<int> ubits_[2], pbits_[2], input_ubits_[2];
    std::unique_ptr<BddManager> mgr_;
    Ref T_[2] = {0, 0};
    Ref corr_ = 0, corr_primed_ = 0, initials_ = 0, universe_ = 0;
    Ref ini_[2] = {0, 0};
};

}  // namespace addiff
