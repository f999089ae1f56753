#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <utility>

#include "addiff/diff.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_ad.hpp"

using namespace addiff;
using testsupport::load_fixture_machine;

namespace {

DiffOptions with_algo(Algo a) {
    DiffOptions o;
    o.algo = a;
    return o;
}

bool same_traces(const DiffResult& a, const DiffResult& b) {
    if (a.difference != b.difference || a.traces.size() != b.traces.size()) return false;
    for (std::size_t i = 0; i < a.traces.size(); ++i) {
        if (a.traces[i].inputs != b.traces[i].inputs) return false;
        if (!(a.traces[i].states.size() == b.traces[i].states.size())) return false;
        for (std::size_t j = 0; j < a.traces[i].states.size(); ++j) {
            if (!(a.traces[i].states[j].s1 == b.traces[i].states[j].s1)) return false;
            if (a.traces[i].states[j].s2.has_value() !=
                b.traces[i].states[j].s2.has_value())
                return false;
            if (a.traces[i].states[j].s2 &&
                !(*a.traces[i].states[j].s2 == *b.traces[i].states[j].s2))
                return false;
        }
    }
    return true;
}

// the algorithms may pick different representatives of equal length, so
// cross-checking generated pairs compares witness shape, not exact states
bool same_shape(const DiffResult& a, const DiffResult& b) {
    if (a.difference != b.difference) return false;
    auto shape = [](const DiffResult& r) {
        std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> v;
        for (const DiffTrace& t : r.traces) v.emplace_back(t.inputs, t.length());
        std::sort(v.begin(), v.end());
        return v;
    };
    return shape(a) == shape(b);
}

std::vector<std::string> action_row(const DiffTrace& t) {
    std::vector<std::string> out;
    for (const CombinedState& c : t.states)
        out.push_back(c.s1.tag == AdState::Tag::Act
                          ? c.s1.ac
                          : (c.s1.tag == AdState::Tag::Init ? "<start>" : "<end>"));
    return out;
}

}  // namespace

TEST_CASE("differences between the hiring revisions", "[diff]") {
    Machine v1 = load_fixture_machine("hire_v1.ad");
    Machine v2 = load_fixture_machine("hire_v2.ad");
    Machine v3 = load_fixture_machine("hire_v3.ad");
    Machine v4 = load_fixture_machine("hire_v4.ad");

    for (Algo algo : {Algo::Concrete, Algo::Symbolic}) {
        CAPTURE(algo == Algo::Concrete ? "concrete" : "symbolic");
        DiffOptions opts = with_algo(algo);

        DiffResult r12 = compute_diff(v1, v2, opts);
        REQUIRE(r12.difference);
        REQUIRE(r12.traces.size() == 1);
        CHECK(r12.traces[0].length() == 6);

        DiffResult r21 = compute_diff(v2, v1, opts);
        REQUIRE(r21.traces.size() == 1);
        CHECK(r21.traces[0].length() == 4);

        DiffResult r23 = compute_diff(v2, v3, opts);
        REQUIRE(r23.traces.size() == 1);
        CHECK(r23.traces[0].length() == 4);
        CHECK(action_row(r23.traces[0]) ==
              std::vector<std::string>{"<start>", "register", "get welcome pack",
                                       "assign to project"});

        DiffResult r34 = compute_diff(v3, v4, opts);
        REQUIRE(r34.traces.size() == 1);
        CHECK(r34.traces[0].length() == 4);
        CHECK(r34.traces[0].inputs == std::vector<std::int64_t>{0});

        DiffResult r24 = compute_diff(v2, v4, opts);
        REQUIRE(r24.traces.size() == 2);
        CHECK(r24.traces[0].length() == 4);
        CHECK(r24.traces[1].length() == 4);
    }
}

TEST_CASE("differences between the project workflows", "[diff]") {
    Machine v2 = load_fixture_machine("proj_v2.ad");
    Machine v3 = load_fixture_machine("proj_v3.ad");
    for (Algo algo : {Algo::Concrete, Algo::Symbolic}) {
        DiffOptions opts = with_algo(algo);
        DiffResult fwd = compute_diff(v2, v3, opts);
        CHECK(!fwd.difference);
        CHECK(fwd.traces.empty());
        DiffResult back = compute_diff(v3, v2, opts);
        REQUIRE(back.traces.size() == 2);
        CHECK(back.traces[0].length() == 4);
        CHECK(back.traces[1].length() == 4);
    }
}

TEST_CASE("both algorithms produce identical witness sets", "[diff]") {
    const char* names[] = {"hire_v1.ad", "hire_v2.ad", "hire_v3.ad", "hire_v4.ad",
                           "proj_v1.ad", "proj_v2.ad", "proj_v3.ad"};
    for (const char* a : names)
        for (const char* b : names) {
            Machine m1 = load_fixture_machine(a);
            Machine m2 = load_fixture_machine(b);
            if (a[0] != b[0]) continue;  // differing input domains across families
            CAPTURE(a, b);
            CHECK(same_traces(concrete_addiff(m1, m2), symbolic_addiff(m1, m2)));
        }
}

TEST_CASE("fixture witnesses satisfy the pairwise definition", "[diff]") {
    const char* names[] = {"hire_v1.ad", "hire_v2.ad", "hire_v3.ad", "hire_v4.ad"};
    for (const char* a : names)
        for (const char* b : names) {
            Machine m1 = load_fixture_machine(a);
            Machine m2 = load_fixture_machine(b);
            Correspondence corr(m1, m2);
            DiffResult r = concrete_addiff(m1, m2);
            for (const DiffTrace& t : r.traces) {
                std::string why;
                CAPTURE(a, b, why);
                CHECK(testsupport::conforming_diff_trace(m1, m2, corr, t, &why));
            }
        }
}

TEST_CASE("generated pairs agree with exhaustive search", "[diff]") {
    testsupport::RandomAd gen(90210);
    int judged = 0;
    for (int round = 0; round < 60; ++round) {
        Machine m1(gen.next()), m2(gen.next());
        testsupport::BruteForceDiff oracle = testsupport::brute_force_diff(m1, m2, 400);
        if (oracle.capped) continue;
        ++judged;
        DiffResult con = concrete_addiff(m1, m2);
        DiffResult sym = symbolic_addiff(m1, m2);
        std::string why;
        CAPTURE(round, m1.ad().name, m2.ad().name, why);
        CHECK(testsupport::conforms_to_definition(m1, m2, con, oracle, &why));
        CHECK(testsupport::conforms_to_definition(m1, m2, sym, oracle, &why));
        CHECK(same_shape(con, sym));
    }
    CHECK(judged >= 40);
}

TEST_CASE("a diagram never differs from itself", "[diff]") {
    testsupport::RandomAd gen(1234);
    for (int round = 0; round < 15; ++round) {
        Machine m(gen.next());
        CHECK(!concrete_addiff(m, m).difference);
        CHECK(!symbolic_addiff(m, m).difference);
    }
    Machine h = load_fixture_machine("hire_v2.ad");
    CHECK(!compute_diff(h, h).difference);
}

TEST_CASE("existence checks skip witness construction", "[diff]") {
    Machine v2 = load_fixture_machine("hire_v2.ad");
    Machine v3 = load_fixture_machine("hire_v3.ad");
    for (Algo algo : {Algo::Concrete, Algo::Symbolic}) {
        DiffOptions opts = with_algo(algo);
        opts.decide_only = true;
        DiffResult r = compute_diff(v2, v3, opts);
        CHECK(r.difference);
        CHECK(r.traces.empty());
        CHECK(r.decide_ms <= r.total_ms);
    }
}

TEST_CASE("witness count can be capped", "[diff]") {
    Machine v2 = load_fixture_machine("hire_v2.ad");
    Machine v4 = load_fixture_machine("hire_v4.ad");
    DiffResult full = compute_diff(v2, v4);
    REQUIRE(full.traces.size() == 2);
    DiffOptions opts;
    opts.max_traces = 1;
    DiffResult capped = compute_diff(v2, v4, opts);
    REQUIRE(capped.traces.size() == 1);
    CHECK(capped.traces[0].inputs == full.traces[0].inputs);
}

TEST_CASE("budgets abort runaway explorations", "[diff]") {
    Machine v1 = load_fixture_machine("hire_v1.ad");
    Machine v2 = load_fixture_machine("hire_v2.ad");
    {
        DiffOptions opts = with_algo(Algo::Concrete);
        opts.state_budget = 3;
        CHECK_THROWS_AS(compute_diff(v1, v2, opts), BudgetError);
    }
    {
        DiffOptions opts = with_algo(Algo::Symbolic);
        opts.node_budget = 64;
        CHECK_THROWS_AS(compute_diff(v1, v2, opts), BudgetError);
    }
}

TEST_CASE("four-valued comparison of revisions", "[diff]") {
    Machine h1 = load_fixture_machine("hire_v1.ad");
    Machine h2 = load_fixture_machine("hire_v2.ad");
    Machine h3 = load_fixture_machine("hire_v3.ad");
    Machine h4 = load_fixture_machine("hire_v4.ad");
    CHECK(compare_diagrams(h1, h2) == CompareVerdict::Incomparable);
    CHECK(compare_diagrams(h2, h3) == CompareVerdict::Greater);
    CHECK(compare_diagrams(h3, h4) == CompareVerdict::Incomparable);
    CHECK(compare_diagrams(h3, h2) == CompareVerdict::Less);

    Machine p1 = load_fixture_machine("proj_v1.ad");
    Machine p2 = load_fixture_machine("proj_v2.ad");
    Machine p3 = load_fixture_machine("proj_v3.ad");
    CHECK(compare_diagrams(p1, p2) == CompareVerdict::Equivalent);
    CHECK(compare_diagrams(p2, p3) == CompareVerdict::Less);

    CHECK(std::string(verdict_symbol(CompareVerdict::Equivalent)) == "==");
    CHECK(std::string(verdict_symbol(CompareVerdict::Less)) == "<");
    CHECK(std::string(verdict_symbol(CompareVerdict::Greater)) == ">");
    CHECK(std::string(verdict_symbol(CompareVerdict::Incomparable)) == "<>");
    CHECK(std::string(verdict_name(CompareVerdict::Incomparable)) == "incomparable");
}

TEST_CASE("history analysis walks consecutive versions", "[diff]") {
    std::vector<Machine> hist;
    for (const char* n : {"hire_v1.ad", "hire_v2.ad", "hire_v3.ad", "hire_v4.ad"})
        hist.push_back(load_fixture_machine(n));
    std::vector<HistoryStep> steps = analyze_history(hist);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].from == 0);
    CHECK(steps[0].to == 1);
    CHECK(steps[0].verdict == CompareVerdict::Incomparable);
    CHECK(steps[1].verdict == CompareVerdict::Greater);
    CHECK(steps[2].verdict == CompareVerdict::Incomparable);
    CHECK(analyze_history({}).empty());
}

TEST_CASE("swapping operands mirrors the verdict", "[diff]") {
    testsupport::RandomAd gen(777);
    for (int round = 0; round < 12; ++round) {
        Machine m1(gen.next()), m2(gen.next());
        CompareVerdict fwd = compare_diagrams(m1, m2);
        CompareVerdict back = compare_diagrams(m2, m1);
        switch (fwd) {
            case CompareVerdict::Equivalent: CHECK(back == CompareVerdict::Equivalent); break;
            case CompareVerdict::Incomparable:
                CHECK(back == CompareVerdict::Incomparable);
                break;
            case CompareVerdict::Less: CHECK(back == CompareVerdict::Greater); break;
            case CompareVerdict::Greater: CHECK(back == CompareVerdict::Less); break;
        }
    }
}
