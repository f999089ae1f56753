#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "addiff/diagnostics.hpp"

namespace addiff {

// Reduced ordered binary decision diagrams over a fixed variable order.
// Nodes are never freed; a hard node budget turns runaway growth into a
// BudgetError instead of memory exhaustion. Refs 0 and 1 are the terminals.
class BddManager {
  public:
    using Ref = std::int32_t;

    explicit BddManager(int num_vars, std::size_t node_budget = std::size_t(1) << 22)
        : num_vars_(num_vars),
          // refs are packed into 23 bits of the unique-table key
          budget_(std::min(node_budget, (std::size_t(1) << 23) - 1)) {
        nodes_.push_back({kTerm, 0, 0});
        nodes_.push_back({kTerm, 1, 1});
    }

    int num_vars() const { return num_vars_; }
    std::size_t node_count() const { return nodes_.size(); }

    static constexpr Ref zero() { return 0; }
    static constexpr Ref one() { return 1; }
    static bool is_zero(Ref f) { return f == 0; }
    static bool is_one(Ref f) { return f == 1; }

    Ref var(int v) { return make(v, 0, 1); }
    Ref nvar(int v) { return make(v, 1, 0); }

    // conjunction of literals, cheapest route to a minterm
    Ref cube(std::vector<std::pair<int, bool>> lits) {
        std::sort(lits.begin(), lits.end());
        Ref r = 1;
        for (auto it = lits.rbegin(); it != lits.rend(); ++it)
            r = it->second ? make(it->first, 0, r) : make(it->first, r, 0);
        return r;
    }

    Ref apply_and(Ref a, Ref b) {
        if (a == 0 || b == 0) return 0;
        if (a == 1) return b;
        if (b == 1) return a;
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        std::uint64_t k = cache_key(OpAnd, a, b);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        int v = std::min(nodes_[std::size_t(a)].var, nodes_[std::size_t(b)].var);
        Ref r = make(v, apply_and(cofactor(a, v, false), cofactor(b, v, false)),
                     apply_and(cofactor(a, v, true), cofactor(b, v, true)));
        cache_.emplace(k, r);
        return r;
    }

    Ref apply_or(Ref a, Ref b) {
        if (a == 1 || b == 1) return 1;
        if (a == 0) return b;
        if (b == 0) return a;
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        std::uint64_t k = cache_key(OpOr, a, b);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        int v = std::min(nodes_[std::size_t(a)].var, nodes_[std::size_t(b)].var);
        Ref r = make(v, apply_or(cofactor(a, v, false), cofactor(b, v, false)),
                     apply_or(cofactor(a, v, true), cofactor(b, v, true)));
        cache_.emplace(k, r);
        return r;
    }

    Ref negate(Ref a) {
        if (a == 0) return 1;
        if (a == 1) return 0;
        std::uint64_t k = cache_key(OpNot, a, 0);
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        Ref r = make(nodes_[std::size_t(a)].var, negate(nodes_[std::size_t(a)].lo),
                     negate(nodes_[std::size_t(a)].hi));
        cache_.emplace(k, r);
        return r;
    }

    Ref apply_diff(Ref a, Ref b) { return apply_and(a, negate(b)); }

    Ref apply_xor(Ref a, Ref b) {
        return apply_or(apply_and(a, negate(b)), apply_and(negate(a), b));
    }

    Ref apply_eq(Ref a, Ref b) { return negate(apply_xor(a, b)); }

    Ref exists(Ref f, const std::vector<int>& vars) {
        return exists_rec(f, varset_id(vars));
    }

    Ref forall(Ref f, const std::vector<int>& vars) {
        return negate(exists(negate(f), vars));
    }

    // Variable substitution. The mapping must preserve the relative order of
    // the variables actually occurring in f (checked during rebuild).
    Ref permute(Ref f, const std::vector<int>& perm) {
        auto it = perm_ids_.find(perm);
        int id;
        if (it != perm_ids_.end()) {
            id = it->second;
        } else {
            id = int(perms_.size());
            perm_ids_.emplace(perm, id);
            perms_.push_back(perm);
        }
        return permute_rec(f, id);
    }

    // Satisfying assignments counted over `vars` (sorted, must cover the
    // support of f). Exact for counts below 2^53.
    double sat_count(Ref f, const std::vector<int>& vars) {
        std::unordered_map<Ref, double> memo;
        std::size_t top = f <= 1 ? vars.size() : pos_of(f, vars);
        return count_rec(f, vars, memo) * std::exp2(double(top));
    }

    // Lexicographically smallest satisfying assignment over `vars` (sorted,
    // covering the support). Treats earlier variables as more significant.
    std::vector<char> pick_one(Ref f, const std::vector<int>& vars) const {
        if (f == 0) throw Error("pick_one on the empty set");
        std::vector<char> bits(vars.size(), 0);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (f <= 1) continue;
            const BddNode& n = nodes_[std::size_t(f)];
            if (n.var > vars[i]) continue;  // free variable, keep 0
            if (n.var < vars[i])
                throw Error("pick_one: support not covered by variable list");
            if (n.lo != 0) {
                f = n.lo;
            } else {
                bits[i] = 1;
                f = n.hi;
            }
        }
        if (f == 0) throw Error("pick_one walked into the empty branch");
        return bits;
    }

    // Lexicographic enumeration; the callback returns false to stop early.
    void enumerate(Ref f, const std::vector<int>& vars,
                   const std::function<bool(const std::vector<char>&)>& cb) const {
        std::vector<char> bits(vars.size(), 0);
        enum_rec(f, vars, 0, bits, cb);
    }

  private:
    static constexpr int kTerm = std::numeric_limits<int>::max();
    enum Op : std::uint64_t { OpAnd = 1, OpOr, OpNot, OpExists, OpPermute };

    struct BddNode {
        int var;
        Ref lo, hi;
    };

    Ref make(int var, Ref lo, Ref hi) {
        if (lo == hi) return lo;
        std::uint64_t k =
            (std::uint64_t(var) << 46) | (std::uint64_t(lo) << 23) | std::uint64_t(hi);
        if (auto it = unique_.find(k); it != unique_.end()) return it->second;
        if (nodes_.size() >= budget_)
            throw BudgetError("decision diagram node budget exhausted (" +
                              std::to_string(budget_) + " nodes)");
        nodes_.push_back({var, lo, hi});
        Ref r = Ref(nodes_.size() - 1);
        unique_.emplace(k, r);
        return r;
    }

    Ref cofactor(Ref f, int v, bool side) const {
        const BddNode& n = nodes_[std::size_t(f)];
        if (f <= 1 || n.var != v) return f;
        return side ? n.hi : n.lo;
    }

    static std::uint64_t cache_key(Op op, Ref a, Ref b) {
        return (std::uint64_t(op) << 60) | (std::uint64_t(a) << 30) | std::uint64_t(b);
    }

    int varset_id(const std::vector<int>& vars) {
        auto it = set_ids_.find(vars);
        if (it != set_ids_.end()) return it->second;
        int id = int(sets_.size());
        set_ids_.emplace(vars, id);
        sets_.push_back(vars);
        return id;
    }

    Ref exists_rec(Ref f, int set_id) {
        if (f <= 1) return f;
        const std::vector<int>& set = sets_[std::size_t(set_id)];
        int v = nodes_[std::size_t(f)].var;
        if (set.empty() || set.back() < v) return f;
        std::uint64_t k = cache_key(OpExists, f, Ref(set_id));
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        Ref lo = exists_rec(nodes_[std::size_t(f)].lo, set_id);
        Ref hi = exists_rec(nodes_[std::size_t(f)].hi, set_id);
        Ref r = std::binary_search(set.begin(), set.end(), v) ? apply_or(lo, hi)
                                                              : make(v, lo, hi);
        cache_.emplace(k, r);
        return r;
    }

    Ref permute_rec(Ref f, int perm_id) {
        if (f <= 1) return f;
        std::uint64_t k = cache_key(OpPermute, f, Ref(perm_id));
        if (auto it = cache_.find(k); it != cache_.end()) return it->second;
        const std::vector<int>& perm = perms_[std::size_t(perm_id)];
        const BddNode n = nodes_[std::size_t(f)];
        int pv = std::size_t(n.var) < perm.size() ? perm[std::size_t(n.var)] : n.var;
        Ref lo = permute_rec(n.lo, perm_id);
        Ref hi = permute_rec(n.hi, perm_id);
        if ((lo > 1 && nodes_[std::size_t(lo)].var <= pv) ||
            (hi > 1 && nodes_[std::size_t(hi)].var <= pv))
            throw Error("permute: mapping does not preserve variable order on support");
        Ref r = make(pv, lo, hi);
        cache_.emplace(k, r);
        return r;
    }

    // position of a non-terminal node's variable within `vars`
    std::size_t pos_of(Ref f, const std::vector<int>& vars) const {
        int v = nodes_[std::size_t(f)].var;
        auto it = std::lower_bound(vars.begin(), vars.end(), v);
        if (it == vars.end() || *it != v)
            throw Error("sat_count: support not covered by variable list");
        return std::size_t(it - vars.begin());
    }

    // counts assignments of the variables strictly below f's level
    double count_rec(Ref f, const std::vector<int>& vars,
                     std::unordered_map<Ref, double>& memo) {
        if (f == 0) return 0.0;
        if (f == 1) return 1.0;
        if (auto it = memo.find(f); it != memo.end()) return it->second;
        const BddNode& n = nodes_[std::size_t(f)];
        std::size_t here = pos_of(f, vars);
        auto below = [&](Ref g) {
            std::size_t p = g <= 1 ? vars.size() : pos_of(g, vars);
            return std::exp2(double(p - here - 1));
        };
        double r = below(n.lo) * count_rec(n.lo, vars, memo) +
                   below(n.hi) * count_rec(n.hi, vars, memo);
        memo.emplace(f, r);
        return r;
    }

    bool enum_rec(Ref f, const std::vector<int>& vars, std::size_t i,
                  std::vector<char>& bits,
                  const std::function<bool(const std::vector<char>&)>& cb) const {
        if (f == 0) return true;
        if (i == vars.size()) {
            if (f != 1) throw Error("enumerate: support not covered by variable list");
            return cb(bits);
        }
        int v = vars[i];
        const BddNode& n = nodes_[std::size_t(f)];
        Ref lo = f, hi = f;
        if (f > 1 && n.var == v) {
            lo = n.lo;
            hi = n.hi;
        } else if (f > 1 && n.var < v) {
            throw Error("enumerate: support not covered by variable list");
        }
        bits[i] = 0;
        if (!enum_rec(lo, vars, i + 1, bits, cb)) return false;
        bits[i] = 1;
        bool cont = enum_rec(hi, vars, i + 1, bits, cb);
        bits[i] = 0;
        return cont;
    }

    int num_vars_;
    std::size_t budget_;
    std::vector<BddNode> nodes_;
    std::unordered_map<std::uint64_t, Ref> unique_;
    std::unordered_map<std::uint64_t, Ref> cache_;
    std::map<std::vector<int>, int> set_ids_;
    std::vector<std::vector<int>> sets_;
    std::map<std::vector<int>, int> perm_ids_;
    std::vector<std::vector<int>> perms_;
};

}  // namespace addiff
