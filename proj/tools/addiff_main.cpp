#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "addiff/addiff.hpp"

using namespace addiff;

namespace {

constexpr int kExitDifferent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitBudget = 4;

struct Loaded {
    std::string path;
    ActivityDiagram ad;
};

Loaded load_ad(const std::string& path) {
    ParseResult r = parse_file(path);
    if (!r.ok()) {
        for (const ParseError& e : r.errors)
            std::cerr << path << ":" << e.span.line << ":" << e.span.col << ": " << e.message
                      << "\n";
        throw Error("cannot parse " + path);
    }
    return {path, std::move(*r.ad)};
}

Machine load_machine(const std::string& path) { return Machine(load_ad(path).ad); }

void write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw Error("cannot write " + out_path);
    os << text;
}

std::vector<AdState> first_witness_states(const DiffResult& res) {
    std::vector<AdState> states;
    if (!res.traces.empty())
        for (const CombinedState& c : res.traces[0].states) states.push_back(c.s1);
    return states;
}

struct BenchRow {
    std::string name;
    std::size_t nodes = 0, reach = 0, witnesses = 0, shortest = 0, longest = 0;
    double con_decide = 0, con_total = 0, sym_decide = 0, sym_total = 0;
};

BenchRow bench_pair(const std::string& name, const ActivityDiagram& a,
                    const ActivityDiagram& b, const DiffOptions& base_opts) {
    Machine ma(a), mb(b);
    BenchRow row;
    row.name = name;
    row.nodes = a.nodes.size();
    row.reach = reachable_states(ma).size();
    DiffOptions o = base_opts;
    o.algo = Algo::Concrete;
    DiffResult rc = compute_diff(ma, mb, o);
    o.algo = Algo::Symbolic;
    DiffResult rs = compute_diff(ma, mb, o);
    row.witnesses = rc.traces.size();
    for (const DiffTrace& t : rc.traces) {
        std::size_t n = t.states.size();
        if (row.shortest == 0 || n < row.shortest) row.shortest = n;
        if (n > row.longest) row.longest = n;
    }
    row.con_decide = rc.decide_ms;
    row.con_total = rc.total_ms;
    row.sym_decide = rs.decide_ms;
    row.sym_total = rs.total_ms;
    return row;
}

void print_bench(const std::vector<BenchRow>& rows) {
    std::printf("%-18s %6s %7s %5s %6s %8s %16s %16s\n", "model", "nodes", "reach", "wit",
                "short", "long", "concrete d/a ms", "symbolic d/a ms");
    for (const BenchRow& r : rows)
        std::printf("%-18s %6zu %7zu %5zu %6zu %8zu %7.1f/%-8.1f %7.1f/%-8.1f\n",
                    r.name.c_str(), r.nodes, r.reach, r.witnesses, r.shortest, r.longest,
                    r.con_decide, r.con_total, r.sym_decide, r.sym_total);
}

ActivityDiagram canonical_mutant(const ActivityDiagram& ad, bool forking) {
    MutationSpec ms;
    ms.kind = MutationSpec::Kind::Rename;
    if (forking) {
        ms.target = "nend";
        ms.new_name = "a_end_v2";
    } else {
        ms.target = "lo1";
        ms.new_name = "lo_act1_v2";
    }
    return mutate(ad, ms);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic diff for activity diagrams: finds shortest runs one "
                 "diagram admits and another cannot follow."};
    app.require_subcommand(1);

    std::string algo_name = "symbolic";
    bool decide_only = false, switch_direction = false;
    std::string format = "text";
    std::size_t max_traces = 0;
    std::size_t state_budget = std::size_t(1) << 22;
    std::size_t node_budget = std::size_t(1) << 22;
    std::string out_path;

    auto add_common = [&](CLI::App* cmd, bool with_direction) {
        cmd->add_option("--algo", algo_name, "Algorithm: concrete|symbolic")
            ->check(CLI::IsMember({"concrete", "symbolic"}))
            ->capture_default_str();
        cmd->add_option("--state-budget", state_budget, "Explicit search pair limit")
            ->capture_default_str();
        cmd->add_option("--node-budget", node_budget, "Decision-diagram node limit")
            ->capture_default_str();
        if (with_direction)
            cmd->add_flag("--switch-direction", switch_direction, "Swap the two operands");
    };

    // validate
    std::string v_file;
    CLI::App* c_validate = app.add_subcommand("validate", "Check a diagram file");
    c_validate->add_option("file", v_file, "Diagram file")->required();

    // diff
    std::string d_a, d_b;
    CLI::App* c_diff = app.add_subcommand("diff", "Witness runs of A the diagram B cannot follow");
    c_diff->add_option("first", d_a, "Diagram A")->required();
    c_diff->add_option("second", d_b, "Diagram B")->required();
    add_common(c_diff, true);
    c_diff->add_flag("--decide-only", decide_only, "Report existence only, no witnesses");
    c_diff->add_option("--format", format, "Output: text|json|dot")
        ->check(CLI::IsMember({"text", "json", "dot"}))
        ->capture_default_str();
    c_diff->add_option("--max-traces", max_traces, "Cap the number of witnesses (0 = all)");
    c_diff->add_option("-o,--output", out_path, "Write the report to a file");

    // compare
    std::string k_a, k_b;
    CLI::App* c_compare = app.add_subcommand("compare", "Four-valued trace-set comparison");
    c_compare->add_option("first", k_a, "Diagram A")->required();
    c_compare->add_option("second", k_b, "Diagram B")->required();
    add_common(c_compare, false);

    // evolve
    std::vector<std::string> e_files;
    CLI::App* c_evolve = app.add_subcommand("evolve", "Compare consecutive versions");
    c_evolve->add_option("files", e_files, "Version files, oldest first")
        ->required()
        ->expected(2, -1);
    add_common(c_evolve, false);
    c_evolve->add_option("--format", format, "Output: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // gen
    std::string g_family;
    int g_width = 2, g_len = 0, g_domain = 4;
    std::string g_variant = "input";
    bool g_mutant = false;
    CLI::App* c_gen = app.add_subcommand("gen", "Emit a synthetic benchmark diagram");
    c_gen->add_option("family", g_family, "forking|linear")
        ->required()
        ->check(CLI::IsMember({"forking", "linear"}));
    c_gen->add_option("--width", g_width, "Concurrent branches (forking)")
        ->capture_default_str();
    c_gen->add_option("--len", g_len, "Chain length (default 6 forking, 12 linear)");
    c_gen->add_option("--domain", g_domain, "Decision domain size (linear)")
        ->capture_default_str();
    c_gen->add_option("--variant", g_variant, "Decision variable: input|local (linear)")
        ->check(CLI::IsMember({"input", "local"}))
        ->capture_default_str();
    c_gen->add_flag("--mutant", g_mutant, "Emit the renamed benchmark counterpart instead");
    c_gen->add_option("-o,--output", out_path, "Write to a file instead of stdout");

    // bench
    std::string b_family = "all";
    std::vector<int> b_widths{1, 2, 3};
    std::vector<int> b_domains{16, 32};
    int b_forking_len = 6, b_linear_len = 12;
    std::string b_variant = "input";
    CLI::App* c_bench = app.add_subcommand("bench", "Run the synthetic benchmark table");
    c_bench->add_option("--family", b_family, "forking|linear|all")
        ->check(CLI::IsMember({"forking", "linear", "all"}))
        ->capture_default_str();
    c_bench->add_option("--widths", b_widths, "Forking widths")->delimiter(',');
    c_bench->add_option("--domains", b_domains, "Linear domain sizes")->delimiter(',');
    c_bench->add_option("--forking-len", b_forking_len, "Forking chain length")
        ->capture_default_str();
    c_bench->add_option("--linear-len", b_linear_len, "Linear chain length")
        ->capture_default_str();
    c_bench->add_option("--variant", b_variant, "Linear decision variable: input|local")
        ->check(CLI::IsMember({"input", "local"}))
        ->capture_default_str();
    c_bench->add_option("--state-budget", state_budget, "Explicit search pair limit");
    c_bench->add_option("--node-budget", node_budget, "Decision-diagram node limit");

    // export
    std::string x_file, x_format = "dot", x_diff_with;
    CLI::App* c_export = app.add_subcommand("export", "Emit DOT or SMV for a diagram");
    c_export->add_option("file", x_file, "Diagram file")->required();
    c_export->add_option("--format", x_format, "dot|smv")
        ->check(CLI::IsMember({"dot", "smv"}))
        ->capture_default_str();
    c_export->add_option("--diff-with", x_diff_with,
                         "Highlight the first witness against this diagram (dot)");
    c_export->add_option("--algo", algo_name, "Algorithm: concrete|symbolic")
        ->check(CLI::IsMember({"concrete", "symbolic"}));
    c_export->add_option("-o,--output", out_path, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        DiffOptions opts;
        opts.algo = algo_name == "concrete" ? Algo::Concrete : Algo::Symbolic;
        opts.decide_only = decide_only;
        opts.max_traces = max_traces;
        opts.state_budget = state_budget;
        opts.node_budget = node_budget;

        if (c_validate->parsed()) {
            Loaded l = load_ad(v_file);
            Diagnostics d = validate(l.ad);
            if (!d.ok()) {
                std::cerr << d.to_string();
                return kExitInvalid;
            }
            std::cout << v_file << ": valid (" << l.ad.nodes.size() << " nodes, "
                      << l.ad.transitions.size() << " edges)\n";
            return 0;
        }

        if (c_diff->parsed()) {
            if (switch_direction) std::swap(d_a, d_b);
            Machine m1 = load_machine(d_a), m2 = load_machine(d_b);
            DiffResult res = compute_diff(m1, m2, opts);
            if (format == "dot") {
                std::vector<AdState> tr = first_witness_states(res);
                write_out(export_dot(m1.ad(), tr.empty() ? nullptr : &tr), out_path);
            } else {
                DiffReport rep =
                    make_report(m1, m2, res, m1.ad().name, m2.ad().name, opts.algo);
                if (format == "json")
                    write_out(to_json(rep).dump(2) + "\n", out_path);
                else
                    write_out(report_to_text(rep), out_path);
            }
            return res.difference ? kExitDifferent : 0;
        }

        if (c_compare->parsed()) {
            Machine m1 = load_machine(k_a), m2 = load_machine(k_b);
            CompareVerdict v = compare_diagrams(m1, m2, opts);
            std::cout << k_a << " " << verdict_symbol(v) << " " << k_b << "  ("
                      << verdict_name(v) << ")\n";
            return v == CompareVerdict::Equivalent ? 0 : kExitDifferent;
        }

        if (c_evolve->parsed()) {
            std::vector<Machine> versions;
            for (const std::string& f : e_files) versions.push_back(load_machine(f));
            std::vector<HistoryStep> steps = analyze_history(versions, opts);
            if (format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (const HistoryStep& s : steps)
                    j.push_back({{"pair", e_files[s.from] + " -> " + e_files[s.to]},
                                 {"verdict", verdict_name(s.verdict)},
                                 {"symbol", verdict_symbol(s.verdict)}});
                std::cout << j.dump(2) << "\n";
            } else {
                for (const HistoryStep& s : steps)
                    std::cout << e_files[s.from] << " " << verdict_symbol(s.verdict) << " "
                              << e_files[s.to] << "  (" << verdict_name(s.verdict) << ")\n";
            }
            return 0;
        }

        if (c_gen->parsed()) {
            bool forking = g_family == "forking";
            if (g_len == 0) g_len = forking ? 6 : 12;
            ActivityDiagram ad =
                forking ? gen_forking(g_width, g_len)
                        : gen_linear(g_len, g_domain,
                                     g_variant == "input" ? LinearVariant::Input
                                                          : LinearVariant::Local);
            if (g_mutant) ad = canonical_mutant(ad, forking);
            write_out(serialize(ad), out_path);
            return 0;
        }

        if (c_bench->parsed()) {
            DiffOptions bopts;
            bopts.state_budget = state_budget;
            bopts.node_budget = node_budget;
            std::vector<BenchRow> rows;
            if (b_family != "linear")
                for (int w : b_widths) {
                    ActivityDiagram a = gen_forking(w, b_forking_len);
                    rows.push_back(bench_pair("forking(" + std::to_string(w) + "," +
                                                  std::to_string(b_forking_len) + ")",
                                              a, canonical_mutant(a, true), bopts));
                }
            if (b_family != "forking")
                for (int d : b_domains) {
                    ActivityDiagram a = gen_linear(
                        b_linear_len, d,
                        b_variant == "input" ? LinearVariant::Input : LinearVariant::Local);
                    rows.push_back(bench_pair("lbl(" + std::to_string(b_linear_len) + "," +
                                                  std::to_string(d) + "," + b_variant + ")",
                                              a, canonical_mutant(a, false), bopts));
                }
            print_bench(rows);
            return 0;
        }

        if (c_export->parsed()) {
            Machine m1 = load_machine(x_file);
            if (x_format == "smv") {
                write_out(emit_smv(m1.ad()), out_path);
            } else if (!x_diff_with.empty()) {
                Machine m2 = load_machine(x_diff_with);
                DiffResult res = compute_diff(m1, m2, opts);
                std::vector<AdState> tr = first_witness_states(res);
                write_out(export_dot(m1.ad(), tr.empty() ? nullptr : &tr), out_path);
            } else {
                write_out(export_dot(m1.ad(), nullptr), out_path);
            }
            return 0;
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ValidationError& e) {
        std::cerr << "invalid diagram: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
