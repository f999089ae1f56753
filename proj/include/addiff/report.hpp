#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "addiff/diff.hpp"
#include "addiff/semantics.hpp"

#include "json.hpp"

namespace addiff {

// Serializable view of one side of a combined step.
struct ReportState {
    std::string node;
    std::optional<std::string> action;  // absent before the first / after the last action
    std::vector<std::pair<std::string, std::string>> vars;

    bool operator==(const ReportState& o) const {
        return node == o.node && action == o.action && vars == o.vars;
    }
};

struct ReportStep {
    std::size_t index = 0;
    ReportState ad1;
    std::optional<ReportState> ad2;

    bool operator==(const ReportStep& o) const {
        return index == o.index && ad1 == o.ad1 && ad2 == o.ad2;
    }
};

struct ReportWitness {
    std::size_t length = 0;
    std::vector<std::pair<std::string, std::string>> input;  // first diagram's inputs
    std::vector<ReportStep> steps;

    bool operator==(const ReportWitness& o) const {
        return length == o.length && input == o.input && steps == o.steps;
    }
};

// Machine-readable outcome of one diff invocation.
struct DiffReport {
    std::string direction;  // "<first> -> <second>"
    std::string algorithm;  // "concrete" | "symbolic"
    std::size_t witness_count = 0;
    std::vector<ReportWitness> witnesses;
    double decide_ms = 0.0;
    double total_ms = 0.0;

    bool operator==(const DiffReport& o) const {
        return direction == o.direction && algorithm == o.algorithm &&
               witness_count == o.witness_count && witnesses == o.witnesses &&
               decide_ms == o.decide_ms && total_ms == o.total_ms;
    }
};

namespace detail {

inline ReportState report_state(const Machine& m, const AdState& s) {
    ReportState out;
    out.node = m.ad().nodes[std::size_t(s.node)].id;
    if (s.tag == AdState::Tag::Act) out.action = s.ac;
    for (std::size_t d = 0; d < m.decls().size(); ++d)
        out.vars.emplace_back(m.decls()[d].name,
                              value_to_string(m.decls()[d].domain,
                                              Value{m.decls()[d].domain.kind, s.env[d]}));
    return out;
}

}  // namespace detail

inline DiffReport make_report(const Machine& m1, const Machine& m2, const DiffResult& res,
                              const std::string& name1, const std::string& name2, Algo algo) {
    DiffReport rep;
    rep.direction = name1 + " -> " + name2;
    rep.algorithm = algo == Algo::Concrete ? "concrete" : "symbolic";
    rep.decide_ms = res.decide_ms;
    rep.total_ms = res.total_ms;
    rep.witness_count = res.traces.size();
    for (const DiffTrace& t : res.traces) {
        ReportWitness w;
        w.length = t.states.size();
        for (std::size_t d = 0; d < m1.input_count(); ++d)
            w.input.emplace_back(m1.decls()[d].name,
                                 value_to_string(m1.decls()[d].domain,
                                                 Value{m1.decls()[d].domain.kind, t.inputs[d]}));
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            ReportStep step;
            step.index = i;
            step.ad1 = detail::report_state(m1, t.states[i].s1);
            if (t.states[i].s2) step.ad2 = detail::report_state(m2, *t.states[i].s2);
            w.steps.push_back(std::move(step));
        }
        rep.witnesses.push_back(std::move(w));
    }
    return rep;
}

inline nlohmann::json to_json(const DiffReport& rep) {
    nlohmann::json j;
    j["direction"] = rep.direction;
    j["algorithm"] = rep.algorithm;
    j["witness_count"] = rep.witness_count;
    j["timings"] = {{"decide_ms", rep.decide_ms}, {"total_ms", rep.total_ms}};
    j["witnesses"] = nlohmann::json::array();
    auto state_json = [](const ReportState& s) {
        nlohmann::json v = nlohmann::json::object();
        for (const auto& [k, val] : s.vars) v[k] = val;
        nlohmann::json out;
        out["node"] = s.node;
        out["action"] = s.action ? nlohmann::json(*s.action) : nlohmann::json(nullptr);
        out["vars"] = std::move(v);
        return out;
    };
    for (const ReportWitness& w : rep.witnesses) {
        nlohmann::json jw;
        jw["length"] = w.length;
        nlohmann::json in = nlohmann::json::object();
        for (const auto& [k, v] : w.input) in[k] = v;
        jw["input"] = std::move(in);
        jw["steps"] = nlohmann::json::array();
        for (const ReportStep& s : w.steps) {
            nlohmann::json js;
            js["index"] = s.index;
            js["ad1"] = state_json(s.ad1);
            js["ad2"] = s.ad2 ? state_json(*s.ad2) : nlohmann::json(nullptr);
            jw["steps"].push_back(std::move(js));
        }
        j["witnesses"].push_back(std::move(jw));
    }
    return j;
}

inline DiffReport report_from_json(const nlohmann::json& j) {
    DiffReport rep;
    rep.direction = j.at("direction").get<std::string>();
    rep.algorithm = j.at("algorithm").get<std::string>();
    rep.witness_count = j.at("witness_count").get<std::size_t>();
    rep.decide_ms = j.at("timings").at("decide_ms").get<double>();
    rep.total_ms = j.at("timings").at("total_ms").get<double>();
    auto state_from = [](const nlohmann::json& js) {
        ReportState s;
        s.node = js.at("node").get<std::string>();
        if (!js.at("action").is_null()) s.action = js.at("action").get<std::string>();
        for (auto it = js.at("vars").begin(); it != js.at("vars").end(); ++it)
            s.vars.emplace_back(it.key(), it.value().get<std::string>());
        return s;
    };
    for (const nlohmann::json& jw : j.at("witnesses")) {
        ReportWitness w;
        w.length = jw.at("length").get<std::size_t>();
        for (auto it = jw.at("input").begin(); it != jw.at("input").end(); ++it)
            w.input.emplace_back(it.key(), it.value().get<std::string>());
        for (const nlohmann::json& js : jw.at("steps")) {
            ReportStep s;
            s.index = js.at("index").get<std::size_t>();
            s.ad1 = state_from(js.at("ad1"));
            if (!js.at("ad2").is_null()) s.ad2 = state_from(js.at("ad2"));
            w.steps.push_back(std::move(s));
        }
        rep.witnesses.push_back(std::move(w));
    }
    return rep;
}

inline std::string report_to_text(const DiffReport& rep) {
    std::ostringstream os;
    os << "diff " << rep.direction << " [" << rep.algorithm << "]\n";
    if (rep.witnesses.empty()) {
        os << "no differences: every run of the first diagram is matched by the second\n";
    } else {
        os << rep.witness_count << " witness" << (rep.witness_count == 1 ? "" : "es")
           << " (runs of the first diagram the second cannot follow)\n";
    }
    auto fmt_state = [](const ReportState& s) {
        std::string out = s.node;
        if (s.action) out += " \"" + *s.action + "\"";
        if (!s.vars.empty()) {
            out += " {";
            for (std::size_t i = 0; i < s.vars.size(); ++i) {
                if (i) out += ", ";
                out += s.vars[i].first + "=" + s.vars[i].second;
            }
            out += "}";
        }
        return out;
    };
    for (std::size_t k = 0; k < rep.witnesses.size(); ++k) {
        const ReportWitness& w = rep.witnesses[k];
        os << "witness " << (k + 1) << ": length " << w.length;
        if (!w.input.empty()) {
            os << ", input ";
            for (std::size_t i = 0; i < w.input.size(); ++i) {
                if (i) os << ", ";
                os << w.input[i].first << "=" << w.input[i].second;
            }
        }
        os << "\n";
        for (const ReportStep& s : w.steps) {
            os << "  " << s.index << ": " << fmt_state(s.ad1);
            if (s.ad2)
                os << "  |  " << fmt_state(*s.ad2);
            else if (s.index + 1 == w.steps.size() && w.steps.size() > 1)
                os << "  |  (no matching step)";
            else if (w.steps.size() == 1)
                os << "  |  (no matching start)";
            os << "\n";
        }
    }
    os << "decide " << rep.decide_ms << " ms, total " << rep.total_ms << " ms\n";
    return os.str();
}

}  // namespace addiff
