#include <catch2/catch_amalgamated.hpp>

#include "addiff/benchgen.hpp"
#include "addiff/diff.hpp"
#include "addiff/parser.hpp"
#include "addiff/serialize.hpp"

using namespace addiff;

TEST_CASE("parallel-family sizes and validity", "[benchgen]") {
    CHECK(gen_forking(1, 1).nodes.size() == 7);
    CHECK(gen_forking(1, 6).nodes.size() == 12);
    CHECK(gen_forking(2, 6).nodes.size() == 18);
    CHECK(gen_forking(3, 6).nodes.size() == 24);
    CHECK(gen_forking(4, 6).nodes.size() == 30);
    CHECK(gen_forking(2, 6).name == "forking_w2_l6");
    for (int w = 1; w <= 3; ++w)
        for (int l : {1, 3, 6}) {
            CAPTURE(w, l);
            CHECK(validate(gen_forking(w, l)).ok());
        }
    CHECK_THROWS_AS(gen_forking(0, 6), Error);
    CHECK_THROWS_AS(gen_forking(2, 0), Error);
}

TEST_CASE("chain-family sizes and validity", "[benchgen]") {
    CHECK(gen_linear(1, 2, LinearVariant::Input).nodes.size() == 12);
    CHECK(gen_linear(12, 16, LinearVariant::Input).nodes.size() == 34);
    CHECK(gen_linear(12, 16, LinearVariant::Input).name == "linear_l12_d16");
    for (LinearVariant v : {LinearVariant::Input, LinearVariant::Local})
        for (int l : {1, 4, 12}) {
            CAPTURE(l, v == LinearVariant::Input);
            CHECK(validate(gen_linear(l, 4, v)).ok());
        }
    CHECK_THROWS_AS(gen_linear(0, 4, LinearVariant::Input), Error);
    CHECK_THROWS_AS(gen_linear(4, 3, LinearVariant::Input), Error);
    CHECK_THROWS_AS(gen_linear(4, 0, LinearVariant::Input), Error);
}

TEST_CASE("state counts scale linearly with the domain", "[benchgen]") {
    Machine a((gen_linear(12, 16, LinearVariant::Input)));
    Machine b((gen_linear(12, 32, LinearVariant::Input)));
    std::size_t na = reachable_states(a).size();
    std::size_t nb = reachable_states(b).size();
    CHECK(na == 464);
    CHECK(nb == 928);
    CHECK(nb == 2 * na);
    Machine c((gen_forking(1, 2)));
    CHECK(reachable_states(c).size() == 6);
}

TEST_CASE("renaming the closing action yields one witness per run shape", "[benchgen]") {
    for (int w : {1, 2}) {
        ActivityDiagram base = gen_forking(w, 6);
        ActivityDiagram changed =
            mutate(base, {MutationSpec::Kind::Rename, "nend", "a_end_v2", ""});
        Machine m1{base}, m2{changed};
        DiffResult r = concrete_addiff(m1, m2);
        REQUIRE(r.traces.size() == 1);
        CHECK(r.traces[0].length() == std::size_t(w * 6 + 3));
        CHECK(r.traces[0].states.back().s1.ac == "a_end");
    }
}

TEST_CASE("deciding on an input yields one witness per admitting value", "[benchgen]") {
    ActivityDiagram base = gen_linear(2, 4, LinearVariant::Input);
    ActivityDiagram changed =
        mutate(base, {MutationSpec::Kind::Rename, "lo1", "lo_act1_v2", ""});
    Machine m1{base}, m2{changed};
    DiffResult r = concrete_addiff(m1, m2);
    REQUIRE(r.traces.size() == 2);  // the two values below the threshold
    for (const DiffTrace& t : r.traces) {
        CHECK(t.length() == 5);
        CHECK(t.inputs.size() == 1);
        CHECK(t.inputs[0] < 2);
    }
}

TEST_CASE("pinning the variable leaves a single witness", "[benchgen]") {
    ActivityDiagram base = gen_linear(2, 4, LinearVariant::Local);
    ActivityDiagram changed =
        mutate(base, {MutationSpec::Kind::Rename, "lo1", "lo_act1_v2", ""});
    Machine m1{base}, m2{changed};
    DiffResult r = concrete_addiff(m1, m2);
    REQUIRE(r.traces.size() == 1);
    CHECK(r.traces[0].length() == 5);
    CHECK(r.traces[0].inputs.empty());
}

TEST_CASE("generated diagrams survive the text format", "[benchgen]") {
    for (const ActivityDiagram& ad :
         {gen_forking(2, 3), gen_linear(3, 4, LinearVariant::Input),
          gen_linear(3, 4, LinearVariant::Local)}) {
        std::string text = serialize(ad);
        ParseResult r = parse(text);
        REQUIRE(r.ok());
        CHECK(validate(*r.ad).ok());
        CHECK(serialize(*r.ad) == text);
    }
}

TEST_CASE("deleting and moving splice actions along their edge", "[benchgen]") {
    ActivityDiagram base = gen_forking(1, 2);
    ActivityDiagram removed = mutate(base, {MutationSpec::Kind::Delete, "b0_1", "", ""});
    CHECK(removed.nodes.size() == base.nodes.size() - 1);
    Machine m1{base}, m2{removed};
    CHECK(concrete_addiff(m1, m2).difference);

    ActivityDiagram moved =
        mutate(base, {MutationSpec::Kind::Move, "b0_1", "", "n0"});
    CHECK(moved.nodes.size() == base.nodes.size());
    Machine m3{moved};
    CHECK(concrete_addiff(m1, m3).difference);
    CHECK(concrete_addiff(m3, m1).difference);
}

TEST_CASE("edits that break the structure are rejected", "[benchgen]") {
    ActivityDiagram base = gen_forking(1, 1);
    CHECK_THROWS_WITH(mutate(base, {MutationSpec::Kind::Rename, "ghost", "x", ""}),
                      Catch::Matchers::ContainsSubstring("not found"));
    CHECK_THROWS_WITH(mutate(base, {MutationSpec::Kind::Rename, "split", "x", ""}),
                      Catch::Matchers::ContainsSubstring("not an action"));
    CHECK_THROWS_WITH(mutate(base, {MutationSpec::Kind::Delete, "b0_0", "", ""}),
                      Catch::Matchers::ContainsSubstring("invalid diagram"));
    CHECK_THROWS_WITH(mutate(base, {MutationSpec::Kind::Rename, "nend", "", ""}),
                      Catch::Matchers::ContainsSubstring("invalid diagram"));
}
