// Tests for the satisfiability reduction: DIMACS parsing, the monotone and
// normalized rewrites, the gadget-graph construction (checked vertex by
// vertex on small formulas), assignment <-> matching translation, constraint
// padding, and the end-to-end satisfiability decider. Structural claims are
// cross-checked against the exhaustive enumeration oracle.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/reduction.hpp"

using namespace popmatch;

namespace {

CnfFormula make_formula(std::vector<std::string> vars,
                        std::vector<std::vector<std::pair<std::string, bool>>> cls) {
    CnfFormula f;
    f.variables = std::move(vars);
    for (const auto& c : cls) {
        std::vector<Literal> lits;
        for (const auto& [v, pos] : c) lits.push_back({v, pos});
        f.clauses.push_back(std::move(lits));
    }
    return f;
}

bool eval_formula(const CnfFormula& f, const std::map<std::string, bool>& a) {
    for (const auto& clause : f.clauses) {
        bool sat = false;
        for (const Literal& lit : clause)
            if (a.at(lit.var) == lit.positive) sat = true;
        if (!sat) return false;
    }
    return true;
}

// (x1) and (not x1): the smallest unsatisfiable normalized formula.
CnfFormula contradiction_formula() {
    return make_formula({"x1"}, {{{"x1", true}}, {{"x1", false}}});
}

// (x1 or x2) and (not x1 or not x2): satisfiable, already normalized.
CnfFormula exclusive_pair_formula() {
    return make_formula({"x1", "x2"},
                        {{{"x1", true}, {"x2", true}},
                         {{"x1", false}, {"x2", false}}});
}

// The three-clause worked example with five variables.
CnfFormula worked_formula() {
    return make_formula({"x1", "x2", "x3", "x4", "x5"},
                        {{{"x1", true}, {"x2", true}, {"x3", true}},
                         {{"x1", false}, {"x2", false}, {"x4", false}},
                         {{"x2", true}, {"x4", true}, {"x5", true}}});
}

std::vector<std::string> pref_names(const PreferenceSystem& ps,
                                    const std::string& v) {
    std::vector<std::string> out;
    for (int nb : ps.neighbors(ps.id_of(v))) out.push_back(ps.name(nb));
    return out;
}

CnfFormula random_mixed_formula(std::mt19937_64& rng) {
    int n_vars = 1 + static_cast<int>(rng() % 4);
    int n_clauses = 1 + static_cast<int>(rng() % 4);
    CnfFormula f;
    for (int i = 1; i <= n_vars; ++i)
        f.variables.push_back("x" + std::to_string(i));
    for (int c = 0; c < n_clauses; ++c) {
        int width = 1 + static_cast<int>(rng() % 3);
        std::vector<int> vars(n_vars);
        for (int i = 0; i < n_vars; ++i) vars[i] = i;
        std::shuffle(vars.begin(), vars.end(), rng);
        std::vector<Literal> clause;
        for (int i = 0; i < std::min(width, n_vars); ++i)
            clause.push_back({f.variables[vars[i]], rng() % 2 == 0});
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

CnfFormula random_monotone_formula(std::mt19937_64& rng) {
    CnfFormula f = random_mixed_formula(rng);
    for (auto& clause : f.clauses) {
        bool positive = rng() % 2 == 0;
        for (Literal& lit : clause) lit.positive = positive;
    }
    return f;
}

}  // namespace

TEST_CASE("dimacs parsing handles comments, multi-line clauses, and errors") {
    CnfFormula f = parse_dimacs_string(
        "c a comment line\n"
        "p cnf 3 2\n"
        "1 -2 0\n"
        "2\n"
        "3 0\n");
    CHECK(f.variables == std::vector<std::string>{"x1", "x2", "x3"});
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::vector<Literal>{{"x1", true}, {"x2", false}});
    CHECK(f.clauses[1] == std::vector<Literal>{{"x2", true}, {"x3", true}});

    // A clause token before the header is rejected with its line number.
    try {
        parse_dimacs_string("1 0\np cnf 1 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    // Non-integer token.
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 1 1\nx 0\n"), ParseError);
    // Literal outside the declared variable range.
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\n3 0\n"), ParseError);
    // Unterminated final clause.
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 1\n1 2\n"), ParseError);
    // Clause count mismatch against the header.
    CHECK_THROWS_AS(parse_dimacs_string("p cnf 2 2\n1 0\n"), ParseError);
}

TEST_CASE("formula validation and monotonicity predicates") {
    CHECK_NOTHROW(contradiction_formula().validate());
    CHECK_NOTHROW(worked_formula().validate());

    // Empty clause.
    CnfFormula empty_clause = make_formula({"x1"}, {{}});
    CHECK_THROWS_AS(empty_clause.validate(), ValidationError);
    // More than three literals.
    CnfFormula wide = make_formula({"x1", "x2", "x3", "x4"},
                                   {{{"x1", true},
                                     {"x2", true},
                                     {"x3", true},
                                     {"x4", true}}});
    CHECK_THROWS_AS(wide.validate(), ValidationError);
    // Repeated variable inside one clause.
    CnfFormula repeated =
        make_formula({"x1"}, {{{"x1", true}, {"x1", false}}});
    CHECK_THROWS_AS(repeated.validate(), ValidationError);
    // Literal referencing an undeclared variable.
    CnfFormula unknown = make_formula({"x1"}, {{{"x2", true}}});
    CHECK_THROWS_AS(unknown.validate(), ValidationError);
    // Duplicate variable names.
    CnfFormula dup = make_formula({"x1", "x1"}, {{{"x1", true}}});
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    CHECK(contradiction_formula().is_monotone());
    CHECK(worked_formula().is_monotone());
    CnfFormula mixed = make_formula({"x1", "x2"},
                                    {{{"x1", true}, {"x2", false}}});
    CHECK_FALSE(mixed.is_monotone());

    CHECK(contradiction_formula().is_normalized_monotone());
    CHECK(exclusive_pair_formula().is_normalized_monotone());
    // Monotone but missing a negative clause.
    CnfFormula pos_only = make_formula({"x1"}, {{{"x1", true}}});
    CHECK_FALSE(pos_only.is_normalized_monotone());
    // Monotone with both clause polarities but x2 occurs only positively.
    CnfFormula lopsided = make_formula(
        {"x1", "x2"},
        {{{"x1", true}, {"x2", true}}, {{"x1", false}}});
    CHECK_FALSE(lopsided.is_normalized_monotone());
}

TEST_CASE("sat_bruteforce worked examples and variable guard") {
    CHECK_FALSE(sat_bruteforce(contradiction_formula()));
    CHECK(sat_bruteforce(exclusive_pair_formula()));
    CHECK(sat_bruteforce(worked_formula()));
    CHECK(sat_bruteforce(CnfFormula{}));  // no clauses: vacuously satisfiable

    CnfFormula big;
    for (int i = 1; i <= 25; ++i) big.variables.push_back("x" + std::to_string(i));
    big.clauses = {{{"x1", true}}};
    CHECK_THROWS_AS(sat_bruteforce(big), HardCaseError);
}

TEST_CASE("to_monotone splits mixed clauses exactly as documented") {
    // (x1 or not x2 or not x3) -> (x1 or aux1) and (not aux1 or not x2 or not x3)
    CnfFormula f = make_formula(
        {"x1", "x2", "x3"},
        {{{"x1", true}, {"x2", false}, {"x3", false}}});
    CnfFormula g = to_monotone(f);
    CHECK(g.is_monotone());
    CHECK(g.variables ==
          std::vector<std::string>{"x1", "x2", "x3", "aux1"});
    REQUIRE(g.clauses.size() == 2);
    CHECK(g.clauses[0] == std::vector<Literal>{{"x1", true}, {"aux1", true}});
    CHECK(g.clauses[1] == std::vector<Literal>{{"aux1", false},
                                               {"x2", false},
                                               {"x3", false}});

    // Two positive literals keep their order; the auxiliary is appended.
    CnfFormula f2 = make_formula(
        {"x1", "x2", "x3"},
        {{{"x1", true}, {"x2", true}, {"x3", false}}});
    CnfFormula g2 = to_monotone(f2);
    REQUIRE(g2.clauses.size() == 2);
    CHECK(g2.clauses[0] == std::vector<Literal>{{"x1", true},
                                                {"x2", true},
                                                {"aux1", true}});
    CHECK(g2.clauses[1] ==
          std::vector<Literal>{{"aux1", false}, {"x3", false}});

    // Monotone clauses pass through untouched.
    CnfFormula mono = exclusive_pair_formula();
    CnfFormula same = to_monotone(mono);
    CHECK(same.clauses == mono.clauses);
    CHECK(same.variables == mono.variables);

    // A variable named aux1 already in use pushes the fresh name to aux2.
    CnfFormula taken = make_formula(
        {"x1", "aux1"},
        {{{"x1", true}, {"aux1", false}}});
    CnfFormula fresh = to_monotone(taken);
    CHECK(std::count(fresh.variables.begin(), fresh.variables.end(), "aux2") == 1);
}

TEST_CASE("to_monotone preserves satisfiability on random formulas") {
    std::mt19937_64 rng(441);
    for (int trial = 0; trial < 80; ++trial) {
        CnfFormula f = random_mixed_formula(rng);
        CnfFormula g = to_monotone(f);
        CHECK_NOTHROW(g.validate());
        CHECK(g.is_monotone());
        CHECK(sat_bruteforce(f) == sat_bruteforce(g));
    }
}

TEST_CASE("normalize_monotone adds the dual-polarity scaffold") {
    // A single positive clause gains the (p or q), (not p or not q) pair and
    // a guard clause tying x1 to the new variables.
    CnfFormula f = make_formula({"x1"}, {{{"x1", true}}});
    CnfFormula g = normalize_monotone(f);
    CHECK(g.is_normalized_monotone());
    CHECK(g.variables == std::vector<std::string>{"x1", "p", "q"});
    REQUIRE(g.clauses.size() == 4);
    CHECK(g.clauses[0] == std::vector<Literal>{{"x1", true}});
    CHECK(g.clauses[1] == std::vector<Literal>{{"p", true}, {"q", true}});
    CHECK(g.clauses[2] == std::vector<Literal>{{"p", false}, {"q", false}});
    CHECK(g.clauses[3] == std::vector<Literal>{{"x1", false},
                                               {"p", false},
                                               {"q", false}});

    // A variable occurring only negatively gets the positive guard clause.
    CnfFormula neg = make_formula({"x1"}, {{{"x1", false}}});
    CnfFormula gn = normalize_monotone(neg);
    CHECK(gn.is_normalized_monotone());
    REQUIRE(gn.clauses.size() == 4);
    CHECK(gn.clauses[3] ==
          std::vector<Literal>{{"x1", true}, {"p", true}, {"q", true}});

    // Already conforming input is returned untouched.
    CnfFormula conforming = contradiction_formula();
    CnfFormula same = normalize_monotone(conforming);
    CHECK(same.clauses == conforming.clauses);
    CHECK(same.variables == conforming.variables);

    // Non-monotone input is rejected.
    CnfFormula mixed = make_formula({"x1", "x2"},
                                    {{{"x1", true}, {"x2", false}}});
    CHECK_THROWS_AS(normalize_monotone(mixed), ValidationError);

    // Fresh names avoid existing variables called p and q.
    CnfFormula taken = make_formula({"p", "q"}, {{{"p", true}, {"q", true}}});
    CnfFormula fresh = normalize_monotone(taken);
    std::set<std::string> vars(fresh.variables.begin(), fresh.variables.end());
    CHECK(vars.size() == fresh.variables.size());
    CHECK(vars.count("p1") == 1);
    CHECK(vars.count("q1") == 1);
}

TEST_CASE("normalize_monotone preserves satisfiability on random formulas") {
    std::mt19937_64 rng(442);
    for (int trial = 0; trial < 80; ++trial) {
        CnfFormula f = random_monotone_formula(rng);
        CnfFormula g = normalize_monotone(f);
        CHECK_NOTHROW(g.validate());
        CHECK(g.is_normalized_monotone());
        CHECK(sat_bruteforce(f) == sat_bruteforce(g));
    }
}

TEST_CASE("construction rejects formulas without both clause polarities") {
    // A single all-positive clause has no all-negative companion.
    CnfFormula pos_only = make_formula({"x1", "x2"},
                                       {{{"x1", true}, {"x2", true}}});
    CHECK_THROWS_AS(build_graph(pos_only), ValidationError);
    // All-negative only.
    CnfFormula neg_only = make_formula({"x1"}, {{{"x1", false}}});
    CHECK_THROWS_AS(build_graph(neg_only), ValidationError);
    // Mixed clause: not monotone.
    CnfFormula mixed = make_formula({"x1", "x2"},
                                    {{{"x1", true}, {"x2", false}},
                                     {{"x1", false}}});
    CHECK_THROWS_AS(build_graph(mixed), ValidationError);
}

TEST_CASE("gadget graph for the one-variable contradiction is reproduced exactly") {
    BuiltGraph built = build_graph(contradiction_formula());
    const PreferenceSystem& ps = built.ps;
    const GadgetMap& gm = built.map;

    CHECK(ps.vertex_count() == 20);
    CHECK(ps.edge_count() == 24);
    CHECK(ps.a_count() == 10);
    CHECK(ps.b_count() == 10);

    // Special vertices and their sides.
    CHECK(gm.s == "s");
    CHECK(gm.t == "t");
    CHECK(gm.u == "u");
    CHECK(gm.v == "v");
    CHECK(gm.w == "w");
    CHECK(gm.x == "x");
    CHECK(gm.y == "y");
    CHECK(ps.side_of(ps.id_of("s")) == Side::A);
    CHECK(ps.side_of(ps.id_of("u")) == Side::A);
    CHECK(ps.side_of(ps.id_of("w")) == Side::A);
    CHECK(ps.side_of(ps.id_of("y")) == Side::A);
    CHECK(ps.side_of(ps.id_of("t")) == Side::B);
    CHECK(ps.side_of(ps.id_of("v")) == Side::B);
    CHECK(ps.side_of(ps.id_of("x")) == Side::B);

    // Gadget bookkeeping.
    REQUIRE(gm.gadgets.size() == 2);
    const GadgetInfo& pos = gm.gadget(1, 1);
    const GadgetInfo& neg = gm.gadget(2, 1);
    CHECK(pos.positive);
    CHECK(pos.var == "x1");
    CHECK(pos.a == "u");  // first gadget's apex is u itself
    CHECK(pos.b == "b(1.1)");
    CHECK(pos.g == "g(1.1)");
    CHECK(pos.h.empty());
    CHECK_FALSE(neg.positive);
    CHECK(neg.a == "u");
    CHECK(neg.h == "h(2.1)");
    CHECK_THROWS_AS(gm.gadget(3, 1), ValidationError);

    // Gadget internal sides: the positive pattern puts c, d on the first
    // side, the negative pattern puts d, e there.
    CHECK(ps.side_of(ps.id_of("c(1.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("d(1.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("g(1.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("b(1.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("e(1.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("f(1.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("d(2.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("e(2.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("g(2.1)")) == Side::A);
    CHECK(ps.side_of(ps.id_of("b(2.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("c(2.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("f(2.1)")) == Side::B);
    CHECK(ps.side_of(ps.id_of("h(2.1)")) == Side::B);

    // Complete preference lists, frozen.
    CHECK(pref_names(ps, "s") == std::vector<std::string>{"t"});
    CHECK(pref_names(ps, "t") == std::vector<std::string>{"u", "s"});
    CHECK(pref_names(ps, "u") ==
          std::vector<std::string>{"t", "b(1.1)", "b(2.1)", "c(2.1)"});
    CHECK(pref_names(ps, "v") ==
          std::vector<std::string>{"g(1.1)", "g(2.1)", "w"});
    CHECK(pref_names(ps, "w") == std::vector<std::string>{"x", "v"});
    CHECK(pref_names(ps, "x") == std::vector<std::string>{"w", "y"});
    CHECK(pref_names(ps, "y") == std::vector<std::string>{"x"});

    CHECK(pref_names(ps, "b(1.1)") ==
          std::vector<std::string>{"c(1.1)", "u", "d(1.1)"});
    CHECK(pref_names(ps, "c(1.1)") ==
          std::vector<std::string>{"e(1.1)", "c(2.1)", "b(1.1)"});
    CHECK(pref_names(ps, "d(1.1)") ==
          std::vector<std::string>{"b(1.1)", "e(1.1)", "f(1.1)"});
    CHECK(pref_names(ps, "e(1.1)") ==
          std::vector<std::string>{"d(1.1)", "c(1.1)"});
    CHECK(pref_names(ps, "f(1.1)") ==
          std::vector<std::string>{"d(1.1)", "g(1.1)"});
    CHECK(pref_names(ps, "g(1.1)") == std::vector<std::string>{"f(1.1)", "v"});

    CHECK(pref_names(ps, "b(2.1)") ==
          std::vector<std::string>{"u", "e(2.1)", "d(2.1)"});
    CHECK(pref_names(ps, "c(2.1)") ==
          std::vector<std::string>{"d(2.1)", "u", "c(1.1)", "e(2.1)"});
    CHECK(pref_names(ps, "d(2.1)") ==
          std::vector<std::string>{"b(2.1)", "c(2.1)"});
    CHECK(pref_names(ps, "e(2.1)") ==
          std::vector<std::string>{"c(2.1)", "f(2.1)", "b(2.1)", "h(2.1)"});
    CHECK(pref_names(ps, "f(2.1)") ==
          std::vector<std::string>{"g(2.1)", "e(2.1)"});
    CHECK(pref_names(ps, "g(2.1)") == std::vector<std::string>{"f(2.1)", "v"});
    CHECK(pref_names(ps, "h(2.1)") == std::vector<std::string>{"e(2.1)"});

    // True/false edge patterns.
    using SP = std::pair<std::string, std::string>;
    CHECK(pos.t_edges() ==
          std::vector<SP>{{"b(1.1)", "c(1.1)"}, {"d(1.1)", "e(1.1)"}});
    CHECK(pos.f_edges() ==
          std::vector<SP>{{"b(1.1)", "d(1.1)"}, {"c(1.1)", "e(1.1)"}});
    CHECK(neg.t_edges() ==
          std::vector<SP>{{"c(2.1)", "e(2.1)"}, {"b(2.1)", "d(2.1)"}});
    CHECK(neg.f_edges() ==
          std::vector<SP>{{"c(2.1)", "d(2.1)"}, {"b(2.1)", "e(2.1)"}});

    // One consistency edge (x1 occurs in both polarities) and one evicted
    // edge (one negative gadget).
    CHECK(gm.consistency_edges == std::vector<SP>{{"c(1.1)", "c(2.1)"}});
    CHECK(gm.evicted_edges == std::vector<SP>{{"e(2.1)", "h(2.1)"}});
    CHECK(gm.forbidden_st == SP{"s", "t"});
    CHECK(gm.forbidden_wx == SP{"w", "x"});
}

TEST_CASE("gadget graph for the two-variable formula chains apexes and gateways") {
    BuiltGraph built = build_graph(exclusive_pair_formula());
    const PreferenceSystem& ps = built.ps;
    const GadgetMap& gm = built.map;

    CHECK(ps.vertex_count() == 33);
    CHECK(ps.edge_count() == 41);
    REQUIRE(gm.gadgets.size() == 4);

    // Apex chaining: the first gadget of each clause hangs off u, later
    // gadgets hang off the previous gadget's gateway.
    CHECK(gm.gadget(1, 1).a == "u");
    CHECK(gm.gadget(1, 2).a == "g(1.1)");
    CHECK(gm.gadget(2, 1).a == "u");
    CHECK(gm.gadget(2, 2).a == "g(2.1)");

    // Gateway tails: toward a positive successor only its b vertex, toward
    // a negative successor its c vertex then its b vertex, and the last
    // gadget of a clause points at v.
    CHECK(pref_names(ps, "g(1.1)") ==
          std::vector<std::string>{"f(1.1)", "b(1.2)"});
    CHECK(pref_names(ps, "g(1.2)") == std::vector<std::string>{"f(1.2)", "v"});
    CHECK(pref_names(ps, "g(2.1)") ==
          std::vector<std::string>{"f(2.1)", "c(2.2)", "b(2.2)"});
    CHECK(pref_names(ps, "g(2.2)") == std::vector<std::string>{"f(2.2)", "v"});

    // u lists t, then per clause the entry points in clause order.
    CHECK(pref_names(ps, "u") ==
          std::vector<std::string>{"t", "b(1.1)", "b(2.1)", "c(2.1)"});
    // v lists the final gateways in clause order, then w.
    CHECK(pref_names(ps, "v") ==
          std::vector<std::string>{"g(1.2)", "g(2.2)", "w"});

    // One consistency edge per variable occurring in both polarities.
    using SP = std::pair<std::string, std::string>;
    CHECK(gm.consistency_edges ==
          std::vector<SP>{{"c(1.1)", "c(2.1)"}, {"c(1.2)", "c(2.2)"}});
    CHECK(gm.evicted_edges ==
          std::vector<SP>{{"e(2.1)", "h(2.1)"}, {"e(2.2)", "h(2.2)"}});
}

TEST_CASE("assignment matchings leave exactly s and the negative h vertices exposed") {
    for (const CnfFormula& f :
         {contradiction_formula(), exclusive_pair_formula()}) {
        BuiltGraph built = build_graph(f);
        const PreferenceSystem& ps = built.ps;
        int n_assignments = 1 << f.variables.size();
        for (int bits = 0; bits < n_assignments; ++bits) {
            std::map<std::string, bool> a;
            for (std::size_t i = 0; i < f.variables.size(); ++i)
                a[f.variables[i]] = (bits >> i) & 1;
            Matching m = assignment_to_matching(ps, built.map, a);

            std::set<std::string> exposed;
            for (int v = 0; v < ps.vertex_count(); ++v)
                if (!m.covers(v)) exposed.insert(ps.name(v));
            std::set<std::string> expected{"s"};
            for (const GadgetInfo& gi : built.map.gadgets)
                if (!gi.positive) expected.insert(gi.h);
            CHECK(exposed == expected);

            // tu, vw, xy always in; st, wx never.
            CHECK(m.contains_edge(ps.id_of("t"), ps.id_of("u")));
            CHECK(m.contains_edge(ps.id_of("v"), ps.id_of("w")));
            CHECK(m.contains_edge(ps.id_of("x"), ps.id_of("y")));
            CHECK_FALSE(m.contains_edge(ps.id_of("s"), ps.id_of("t")));
            CHECK_FALSE(m.contains_edge(ps.id_of("w"), ps.id_of("x")));

            // Each gadget plays its T pattern when the literal is satisfied
            // and its F pattern otherwise; fg is always in.
            for (const GadgetInfo& gi : built.map.gadgets) {
                bool lit_true = a.at(gi.var) == gi.positive;
                const auto pattern = lit_true ? gi.t_edges() : gi.f_edges();
                for (const auto& [p, q] : pattern)
                    CHECK(m.contains_edge(ps.id_of(p), ps.id_of(q)));
                CHECK(m.contains_edge(ps.id_of(gi.f), ps.id_of(gi.g)));
            }

            // The matching is popular exactly when the assignment satisfies
            // the formula.
            CHECK(is_popular(ps, m).verdict == eval_formula(f, a));
        }
    }
}

TEST_CASE("readback recovers a satisfying assignment from the worked formula") {
    CnfFormula f = worked_formula();
    BuiltGraph built = build_graph(f);
    const PreferenceSystem& ps = built.ps;

    CHECK(ps.vertex_count() == 64);
    CHECK(ps.edge_count() == 81);
    CHECK(built.map.gadgets.size() == 9);
    CHECK(built.map.consistency_edges.size() == 4);
    CHECK(built.map.evicted_edges.size() == 3);

    std::map<std::string, bool> a{{"x1", true},
                                  {"x2", false},
                                  {"x3", false},
                                  {"x4", true},
                                  {"x5", true}};
    REQUIRE(eval_formula(f, a));
    Matching m = assignment_to_matching(ps, built.map, a);
    REQUIRE(is_popular(ps, m).verdict);

    // The only (+,+) edge of the labeled graph is wx.
    LabeledGraph lg(ps, m);
    REQUIRE(lg.plus_plus_edges().size() == 1);
    CHECK(lg.plus_plus_edges().front() ==
          ps.edge_index(ps.id_of("w"), ps.id_of("x")));

    // Readback: x1, x4, x5 have gadgets playing T toward true; x2's negative
    // occurrence plays T so it reads false; x3 never plays T anywhere and
    // defaults to true. Either way the result satisfies the formula.
    std::map<std::string, bool> back = matching_to_assignment(ps, built.map, m);
    std::map<std::string, bool> expected{{"x1", true},
                                         {"x2", false},
                                         {"x3", true},
                                         {"x4", true},
                                         {"x5", true}};
    CHECK(back == expected);
    CHECK(eval_formula(f, back));
}

TEST_CASE("readback preconditions reject forbidden edges and unpopular matchings") {
    BuiltGraph built = build_graph(contradiction_formula());
    const PreferenceSystem& ps = built.ps;

    // A matching containing st is rejected outright.
    Matching with_st =
        Matching::from_edges(ps, {{ps.id_of("s"), ps.id_of("t")}});
    CHECK_THROWS_AS(matching_to_assignment(ps, built.map, with_st),
                    PreconditionError);
    // Same for wx.
    Matching with_wx =
        Matching::from_edges(ps, {{ps.id_of("w"), ps.id_of("x")}});
    CHECK_THROWS_AS(matching_to_assignment(ps, built.map, with_wx),
                    PreconditionError);

    // The formula is unsatisfiable, so no assignment matching is popular and
    // readback must refuse them all.
    for (bool value : {false, true}) {
        Matching m = assignment_to_matching(ps, built.map, {{"x1", value}});
        CHECK_THROWS_AS(matching_to_assignment(ps, built.map, m),
                        PreconditionError);
    }
}

TEST_CASE("popular matchings of the contradiction graph stay on forbidden edges") {
    // The formula behind this graph is unsatisfiable, so every popular
    // matching must contain st or wx: none survives forbidding both.
    BuiltGraph built = build_graph(contradiction_formula());
    const PreferenceSystem& ps = built.ps;

    std::vector<Matching> popular = oracle::popular_set(ps, 5'000'000).popular;
    REQUIRE(!popular.empty());
    int on_st = 0, on_wx = 0;
    for (const Matching& m : popular) {
        bool has_st = m.contains_edge(ps.id_of("s"), ps.id_of("t"));
        bool has_wx = m.contains_edge(ps.id_of("w"), ps.id_of("x"));
        CHECK((has_st || has_wx));
        on_st += has_st;
        on_wx += has_wx;

        // Matchings free of evicted edges use no consistency edge either.
        bool evicted = false;
        for (const auto& [p, q] : built.map.evicted_edges)
            if (m.contains_edge(ps.id_of(p), ps.id_of(q))) evicted = true;
        if (!evicted) {
            for (const auto& [p, q] : built.map.consistency_edges)
                CHECK_FALSE(m.contains_edge(ps.id_of(p), ps.id_of(q)));
        }
    }
    CHECK(on_st > 0);
    CHECK(on_wx > 0);
}

TEST_CASE("solver pipeline decides satisfiability of small formulas") {
    // Empty formula: trivially satisfiable, no graph is built.
    CHECK(decide_sat(CnfFormula{}, false));

    // Nontrivial formulas require the exponential fallback to be enabled.
    CHECK_THROWS_AS(decide_sat(contradiction_formula(), false), HardCaseError);

    CHECK_FALSE(decide_sat(contradiction_formula(), true));
    CHECK(decide_sat(exclusive_pair_formula(), true));

    // A mixed (non-monotone) formula goes through the monotone rewrite
    // first: (x1 or not x2) and (x2) and (not x1) forces x2, then x1, then
    // contradicts not x1 -- unsatisfiable.
    CnfFormula mixed = make_formula(
        {"x1", "x2"},
        {{{"x1", true}, {"x2", false}}, {{"x2", true}}, {{"x1", false}}});
    REQUIRE(!sat_bruteforce(mixed));
    CHECK_FALSE(decide_sat(mixed, true));

    // An unsatisfiable three-clause monotone formula.
    CnfFormula unsat = make_formula(
        {"x1", "x2"},
        {{{"x1", true}, {"x2", true}}, {{"x1", false}}, {{"x2", false}}});
    REQUIRE(!sat_bruteforce(unsat));
    CHECK_FALSE(decide_sat(unsat, true));
}

TEST_CASE("padding yields forced pendant pairs and forbidden evicted edges") {
    BuiltGraph built = build_graph(contradiction_formula());
    const PreferenceSystem& ps = built.ps;
    const GadgetMap& gm = built.map;

    // No padding: the instance is returned unchanged with empty constraint
    // lists.
    PaddedInstance none = pad_constraints(ps, gm, 0, 0);
    CHECK(render_instance(none.ps) == render_instance(ps));
    CHECK(none.forced_edges.empty());
    CHECK(none.forced_nodes.empty());
    CHECK(none.forbidden_edges.empty());
    CHECK(none.forbidden_nodes.empty());

    // Forbidden padding reuses the evicted edge of a negative gadget.
    PaddedInstance fb = pad_constraints(ps, gm, 0, 1);
    using SP = std::pair<std::string, std::string>;
    CHECK(fb.forbidden_edges == std::vector<SP>{{"e(2.1)", "h(2.1)"}});
    CHECK(fb.forbidden_nodes == std::vector<std::string>{"h(2.1)"});
    CHECK(render_instance(fb.ps) == render_instance(ps));

    // Only one negative gadget exists, so two forbidden paddings fail.
    CHECK_THROWS_AS(pad_constraints(ps, gm, 0, 2), ValidationError);
    CHECK_THROWS_AS(pad_constraints(ps, gm, -1, 0), ValidationError);

    // Forced padding appends a pendant pair whose edge joins every popular
    // matching: z(1) and k(1) are mutual first choices.
    PaddedInstance fc = pad_constraints(ps, gm, 1, 0);
    CHECK(fc.forced_edges == std::vector<SP>{{"z(1)", "k(1)"}});
    CHECK(fc.forced_nodes == std::vector<std::string>{"z(1)", "k(1)"});
    CHECK(fc.ps.vertex_count() == ps.vertex_count() + 2);
    CHECK(fc.ps.edge_count() == ps.edge_count() + 2);
    CHECK(pref_names(fc.ps, "z(1)") == std::vector<std::string>{"k(1)"});
    CHECK(pref_names(fc.ps, "k(1)") ==
          std::vector<std::string>{"z(1)", "g(1.1)"});
    // The gateway's list grew by the pendant partner, at the very end.
    CHECK(pref_names(fc.ps, "g(1.1)") ==
          std::vector<std::string>{"f(1.1)", "v", "k(1)"});

    int z = fc.ps.id_of("z(1)"), k = fc.ps.id_of("k(1)");
    std::vector<Matching> popular = oracle::popular_set(fc.ps, 5'000'000).popular;
    REQUIRE(!popular.empty());
    for (const Matching& m : popular) CHECK(m.contains_edge(z, k));

    // Two pendant pairs round-robin over the gateways.
    PaddedInstance fc2 = pad_constraints(ps, gm, 2, 0);
    CHECK(pref_names(fc2.ps, "k(1)") ==
          std::vector<std::string>{"z(1)", "g(1.1)"});
    CHECK(pref_names(fc2.ps, "k(2)") ==
          std::vector<std::string>{"z(2)", "g(2.1)"});
}

TEST_CASE("gadget map serializes to json") {
    BuiltGraph built = build_graph(contradiction_formula());
    nlohmann::json j = nlohmann::json::parse(built.map.to_json());

    CHECK(j["specials"]["s"] == "s");
    CHECK(j["specials"]["v"] == "v");
    REQUIRE(j["forbidden_edges"].size() == 2);
    CHECK(j["forbidden_edges"][0] ==
          nlohmann::json::array({"s", "t"}));
    CHECK(j["forbidden_edges"][1] ==
          nlohmann::json::array({"w", "x"}));
    REQUIRE(j["gadgets"].size() == 2);
    CHECK(j["gadgets"][0]["clause"] == 1);
    CHECK(j["gadgets"][0]["positive"] == true);
    CHECK(j["gadgets"][0]["vertices"]["b"] == "b(1.1)");
    CHECK(!j["gadgets"][0]["vertices"].contains("h"));
    CHECK(j["gadgets"][1]["vertices"]["h"] == "h(2.1)");
    CHECK(j["gadgets"][1]["t_edges"].size() == 2);
    CHECK(j["consistency_edges"].size() == 1);
    CHECK(j["evicted_edges"].size() == 1);
}
