// Preference-system and matching I/O: parsing, validation, rendering,
// accessor semantics, and error reporting with line numbers.

#include <sstream>
#include <string>

#include "doctest.h"
#include "popmatch/instance.hpp"
#include "popmatch/instance_gen.hpp"

using namespace popmatch;

namespace {

const char* kHalfSizeText =
    "popmatch-instance v1\n"
    "A: a1 a2\n"
    "B: b1 b2\n"
    "pref a1: b1\n"
    "pref a2: b1 b2\n"
    "pref b1: a2 a1\n"
    "pref b2: a2\n";

}  // namespace

TEST_CASE("instance: parse and accessors") {
    PreferenceSystem ps = parse_instance_string(kHalfSizeText);
    CHECK(ps.a_count() == 2);
    CHECK(ps.b_count() == 2);
    CHECK(ps.vertex_count() == 4);
    CHECK(ps.edge_count() == 3);
    CHECK(ps.side_of(ps.id_of("a1")) == Side::A);
    CHECK(ps.side_of(ps.id_of("b2")) == Side::B);
    CHECK(ps.name(ps.id_of("a2")) == "a2");
    CHECK(ps.try_id("nope") == std::nullopt);
    CHECK_THROWS_AS((void)ps.id_of("nope"), ValidationError);

    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");
    CHECK(ps.neighbors(a2) == std::vector<int>{b1, b2});
    CHECK(ps.neighbors(b1) == std::vector<int>{a2, a1});
    CHECK(ps.degree(a1) == 1);
    CHECK(ps.rank(b1, a2) == 1);
    CHECK(ps.rank(b1, a1) == 2);
    CHECK(ps.adjacent(a1, b1));
    CHECK(!ps.adjacent(a1, b2));

    std::vector<std::pair<int, int>> expected{{a1, b1}, {a2, b1}, {a2, b2}};
    CHECK(ps.edges() == expected);
    CHECK(ps.edge_index(a1, b1) == 0);
    CHECK(ps.edge_index(b1, a2) == 1);
    CHECK(ps.edge_index(a1, b2) == -1);
}

TEST_CASE("instance: render round-trips") {
    PreferenceSystem ps = parse_instance_string(kHalfSizeText);
    CHECK(render_instance(ps) == kHalfSizeText);
    PreferenceSystem again = parse_instance_string(render_instance(ps));
    CHECK(render_instance(again) == kHalfSizeText);
}

TEST_CASE("instance: constructor validation") {
    // b1 does not list a1 back.
    CHECK_THROWS_AS(PreferenceSystem({"a1"}, {"b1"}, {{1}, {}}), ValidationError);
    // duplicate entry within one list
    CHECK_THROWS_AS(PreferenceSystem({"a1"}, {"b1"}, {{1, 1}, {0, 0}}),
                    ValidationError);
    // same-side adjacency
    CHECK_THROWS_AS(PreferenceSystem({"a1", "a2"}, {"b1"}, {{1}, {0}, {}}),
                    ValidationError);
}

TEST_CASE("instance: parse errors carry line numbers") {
    try {
        parse_instance_string("nonsense v1\nA: a\n");
        FAIL("header should be rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("header") != std::string::npos);
    }
    try {
        parse_instance_string(
            "popmatch-instance v1\nA: a\nB: b\nwhat a: b\n");
        FAIL("unknown directive should be rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    try {
        parse_instance_string(
            "popmatch-instance v1\nA: a\nB: b\npref a: b\npref b: a\npref c: a\n");
        FAIL("pref for unknown vertex should be rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
    }
    CHECK_THROWS_AS(
        parse_instance_string("popmatch-instance v1\nA: a:b\nB: c\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_instance_string(
            "popmatch-instance v1\nA: a\nB: b\npref a: b\n"),
        ParseError);  // missing pref line for b
}

TEST_CASE("matching: construction and queries") {
    PreferenceSystem ps = sample_half_size_instance();
    int a1 = ps.id_of("a1"), a2 = ps.id_of("a2");
    int b1 = ps.id_of("b1"), b2 = ps.id_of("b2");

    Matching empty = Matching::empty(ps);
    CHECK(empty.size() == 0);
    CHECK(!empty.covers(a1));

    Matching d = Matching::from_edges(ps, {{a1, b1}, {b2, a2}});
    CHECK(d.size() == 2);
    CHECK(d.covers(b2));
    CHECK(d.contains_edge(a1, b1));
    CHECK(d.contains_edge(b1, a1));
    CHECK(!d.contains_edge(a2, b1));
    std::vector<std::pair<int, int>> el{{a1, b1}, {a2, b2}};
    CHECK(d.edge_list(ps.a_count()) == el);

    // nonexistent edge and reused vertex are rejected
    CHECK_THROWS_AS((void)Matching::from_edges(ps, {{a1, b2}}), ValidationError);
    CHECK_THROWS_AS((void)Matching::from_edges(ps, {{a1, b1}, {a2, b1}}),
                    ValidationError);
}

TEST_CASE("matching: text round-trip ignores comments") {
    PreferenceSystem ps = sample_half_size_instance();
    Matching d = Matching::from_edges(
        ps, {{ps.id_of("a1"), ps.id_of("b1")}, {ps.id_of("a2"), ps.id_of("b2")}});
    std::string text = render_matching(ps, d);
    CHECK(text == "a1 b1\na2 b2\n");
    std::istringstream annotated("# metadata line\n" + text);
    Matching back = parse_matching(ps, annotated);
    CHECK(back == d);
    try {
        std::istringstream bad("a1 zz\n");
        parse_matching(ps, bad);
        FAIL("unknown vertex should be rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}
