#include <catch2/catch_amalgamated.hpp>

#include "addiff/parser.hpp"
#include "addiff/serialize.hpp"
#include "support/fixtures.hpp"

using namespace addiff;

static const char* kSmall = R"(// two-step workflow
activity small {
  input go : bool;
  local n : 0..2;
  local mode : enum {off, on};

  initial start;
  action first "boot" { n = 1; mode = on; };
  decision pick;
  action yes "accept";
  action no "reject" { n = n - 1; };
  merge done;
  final end;

  start -> first;
  first -> pick;
  pick -> yes [go & n <= 1];
  pick -> no [!(go & n <= 1)];
  yes -> done;
  no -> done;
  done -> end;
}
)";

TEST_CASE("a small diagram parses into the expected structure", "[parser]") {
    ParseResult r = parse(kSmall);
    REQUIRE(r.ok());
    const ActivityDiagram& ad = *r.ad;
    CHECK(ad.name == "small");
    REQUIRE(ad.input_vars.size() == 1);
    CHECK(ad.input_vars[0].name == "go");
    CHECK(ad.input_vars[0].domain.kind == Domain::Kind::Bool);
    CHECK(ad.input_vars[0].kind == VarKind::Input);
    REQUIRE(ad.local_vars.size() == 2);
    CHECK(ad.local_vars[0].domain == Domain::make_int(0, 2));
    CHECK(ad.local_vars[1].domain == Domain::make_enum({"off", "on"}));
    CHECK(ad.local_vars[1].kind == VarKind::Local);

    REQUIRE(ad.nodes.size() == 7);
    CHECK(ad.nodes[0].kind == NodeKind::Initial);
    CHECK(ad.nodes[1].kind == NodeKind::Action);
    CHECK(ad.nodes[1].id == "first");
    CHECK(ad.nodes[1].action == "boot");
    REQUIRE(ad.nodes[1].assignments.size() == 2);
    CHECK(ad.nodes[1].assignments[0].var == "n");
    CHECK(expr_to_string(ad.nodes[1].assignments[0].value) == "1");
    CHECK(expr_to_string(ad.nodes[1].assignments[1].value) == "on");
    CHECK(ad.nodes[2].kind == NodeKind::Decision);
    CHECK(ad.nodes[5].kind == NodeKind::Merge);
    CHECK(ad.nodes[6].kind == NodeKind::Final);

    REQUIRE(ad.transitions.size() == 7);
    CHECK(ad.transitions[0].src == "start");
    CHECK(ad.transitions[0].trg == "first");
    CHECK(ad.transitions[0].guard == nullptr);
    REQUIRE(ad.transitions[2].guard != nullptr);
    CHECK(expr_to_string(ad.transitions[2].guard) == "go & n <= 1");
    CHECK(expr_to_string(ad.transitions[3].guard) == "!(go & n <= 1)");
}

TEST_CASE("serialization reparses to an identical diagram", "[parser]") {
    ParseResult r = parse(kSmall);
    REQUIRE(r.ok());
    std::string once = serialize(*r.ad);
    ParseResult r2 = parse(once);
    REQUIRE(r2.ok());
    CHECK(serialize(*r2.ad) == once);
}

TEST_CASE("all shipped fixtures parse, validate and round-trip", "[parser]") {
    for (const char* name :
         {"hire_v1.ad", "hire_v2.ad", "hire_v3.ad", "hire_v4.ad", "proj_v1.ad",
          "proj_v2.ad", "proj_v3.ad"}) {
        CAPTURE(name);
        ActivityDiagram ad = testsupport::load_fixture_ad(name);
        std::string text = serialize(ad);
        ParseResult again = parse(text);
        REQUIRE(again.ok());
        CHECK(serialize(*again.ad) == text);
    }
}

TEST_CASE("parse errors carry source positions", "[parser]") {
    SECTION("missing semicolon") {
        ParseResult r = parse("activity a {\n  initial start\n  final end;\n}\n");
        REQUIRE(!r.ok());
        REQUIRE(!r.errors.empty());
        CHECK(r.errors[0].span.line == 3);
    }
    SECTION("unknown top-level keyword") {
        ParseResult r = parse("activity a {\n  widget w;\n}\n");
        REQUIRE(!r.ok());
        CHECK(r.errors[0].span.line == 2);
    }
    SECTION("missing activity header") {
        ParseResult r = parse("initial start;\n");
        REQUIRE(!r.ok());
        CHECK(r.errors[0].span.line == 1);
    }
    SECTION("bad guard expression") {
        ParseResult r = parse(
            "activity a {\n  initial s;\n  final e;\n  s -> e [1 +];\n}\n");
        REQUIRE(!r.ok());
        CHECK(r.errors[0].span.line == 4);
    }
    SECTION("unterminated action label") {
        ParseResult r = parse("activity a {\n  action x \"oops;\n}\n");
        REQUIRE(!r.ok());
        CHECK(r.errors[0].span.line == 2);
    }
}

TEST_CASE("reading a missing file reports an error instead of throwing", "[parser]") {
    ParseResult r = parse_file("/nonexistent/definitely_not_here.ad");
    CHECK(!r.ok());
    REQUIRE(!r.errors.empty());
    CHECK(r.errors[0].message.find("open") != std::string::npos);
}

TEST_CASE("comments and whitespace are ignored", "[parser]") {
    ParseResult r = parse(
        "// leading note\nactivity a { // inline\n  initial s;\n"
        "  // a full-line comment\n  final e;\n  s -> e;\n}\n// trailing\n");
    REQUIRE(r.ok());
    CHECK(r.ad->nodes.size() == 2);
}
