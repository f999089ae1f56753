#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "addiff/diagnostics.hpp"

namespace addiff {

// Finite variable domain: bool, bounded int [lo,hi], or enumeration.
struct Domain {
    enum class Kind { Bool, Int, Enum };

    Kind kind = Kind::Bool;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<std::string> literals;

    static Domain make_bool() { return {}; }
    static Domain make_int(std::int64_t lo, std::int64_t hi) {
        Domain d;
        d.kind = Kind::Int;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
    static Domain make_enum(std::vector<std::string> lits) {
        Domain d;
        d.kind = Kind::Enum;
        d.literals = std::move(lits);
        return d;
    }

    std::uint64_t cardinality() const {
        switch (kind) {
            case Kind::Bool: return 2;
            case Kind::Int: return hi >= lo ? std::uint64_t(hi - lo + 1) : 0;
            case Kind::Enum: return literals.size();
        }
        return 0;
    }

    bool operator==(const Domain& o) const {
        return kind == o.kind && lo == o.lo && hi == o.hi && literals == o.literals;
    }
    bool operator!=(const Domain& o) const { return !(*this == o); }
};

// A runtime value. For Int `num` is the value itself, for Bool it is 0/1,
// for Enum it is the literal's index within the declaring domain.
struct Value {
    Domain::Kind kind = Domain::Kind::Bool;
    std::int64_t num = 0;

    static Value of_bool(bool b) { return {Domain::Kind::Bool, b ? 1 : 0}; }
    static Value of_int(std::int64_t v) { return {Domain::Kind::Int, v}; }
    static Value of_enum(std::int64_t index) { return {Domain::Kind::Enum, index}; }

    bool as_bool() const { return num != 0; }
    bool operator==(const Value& o) const { return kind == o.kind && num == o.num; }
    bool operator!=(const Value& o) const { return !(*this == o); }
};

inline bool value_in_domain(const Domain& d, const Value& v) {
    if (v.kind != d.kind) return false;
    switch (d.kind) {
        case Domain::Kind::Bool: return v.num == 0 || v.num == 1;
        case Domain::Kind::Int: return v.num >= d.lo && v.num <= d.hi;
        case Domain::Kind::Enum:
            return v.num >= 0 && std::uint64_t(v.num) < d.literals.size();
    }
    return false;
}

// Canonical least element, used to seed local variables before the first
// action node overwrites them.
inline Value domain_min(const Domain& d) {
    switch (d.kind) {
        case Domain::Kind::Bool: return Value::of_bool(false);
        case Domain::Kind::Int: return Value::of_int(d.lo);
        case Domain::Kind::Enum: return Value::of_enum(0);
    }
    return Value::of_bool(false);
}

// i-th element in canonical order, i < cardinality().
inline Value domain_value_at(const Domain& d, std::uint64_t i) {
    switch (d.kind) {
        case Domain::Kind::Bool: return Value::of_bool(i != 0);
        case Domain::Kind::Int: return Value::of_int(d.lo + std::int64_t(i));
        case Domain::Kind::Enum: return Value::of_enum(std::int64_t(i));
    }
    return Value::of_bool(false);
}

inline std::uint64_t domain_index_of(const Domain& d, const Value& v) {
    switch (d.kind) {
        case Domain::Kind::Bool: return std::uint64_t(v.num);
        case Domain::Kind::Int: return std::uint64_t(v.num - d.lo);
        case Domain::Kind::Enum: return std::uint64_t(v.num);
    }
    return 0;
}

inline std::string value_to_string(const Domain& d, const Value& v) {
    switch (d.kind) {
        case Domain::Kind::Bool: return v.num ? "true" : "false";
        case Domain::Kind::Int: return std::to_string(v.num);
        case Domain::Kind::Enum:
            if (v.num >= 0 && std::uint64_t(v.num) < d.literals.size())
                return d.literals[std::size_t(v.num)];
            return "<bad-enum:" + std::to_string(v.num) + ">";
    }
    return "?";
}

enum class VarKind { Input, Local };

struct VarDecl {
    std::string name;
    Domain domain;
    VarKind kind = VarKind::Input;
};

inline std::string domain_to_string(const Domain& d) {
    switch (d.kind) {
        case Domain::Kind::Bool: return "bool";
        case Domain::Kind::Int:
            return std::to_string(d.lo) + ".." + std::to_string(d.hi);
        case Domain::Kind::Enum: {
            std::string s = "enum {";
            for (std::size_t i = 0; i < d.literals.size(); ++i) {
                if (i) s += ", ";
                s += d.literals[i];
            }
            s += "}";
            return s;
        }
    }
    return "?";
}

}  // namespace addiff
