// Monotone-3-SAT machinery: CNF handling, monotonization/normalization,
// the clause-gadget graph construction, assignment <-> matching maps,
// constraint padding, and an end-to-end SAT decision through the
// constrained-popular-matching solver.
//
// The construction turns a normalized monotone formula into a preference
// system whose popular matchings avoiding two designated edges (st and wx)
// correspond exactly to satisfying assignments. Per literal occurrence
// there is a gadget (positive or negative flavour) whose "T"/"F" internal
// matchings encode the literal's truth value; gadgets of one clause chain
// from the hub vertex u through per-gadget gateways to the hub v, and
// consistency edges between the c-vertices of opposite occurrences of the
// same variable forbid contradictory assignments. Special chain: s-t-u and
// v-w-x-y.
//
// Vertex naming: specials are "s","t","u","v","w","x","y"; gadget-internal
// vertices are "b(i.j)" .. "h(i.j)" for clause i, literal j (1-based). The
// apex "a" of a gadget is an alias: u for a clause's first literal, the
// previous literal's gateway g otherwise.

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

struct Literal {
    std::string var;
    bool positive = true;

    bool operator==(const Literal&) const = default;
};

struct CnfFormula {
    std::vector<std::string> variables;          // declaration order
    std::vector<std::vector<Literal>> clauses;   // each clause 1..3 literals

    // Throws ValidationError unless: every clause has 1..3 literals over
    // declared variables, no clause is empty, and no clause repeats a
    // variable.
    void validate() const;

    // Every clause is single-polarity (all positive or all negative).
    bool is_monotone() const;

    // Strict normal form: monotone, at least one all-positive and one
    // all-negative clause, and every variable occurs in both polarities.
    bool is_normalized_monotone() const;
};

// DIMACS CNF ("c" comments, "p cnf <vars> <clauses>", clauses as signed
// integers terminated by 0). Variable i becomes "x<i>".
CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_string(const std::string& text);
CnfFormula parse_dimacs_file(const std::string& path);

// Truth-table satisfiability check; throws HardCaseError past 24 variables.
bool sat_bruteforce(const CnfFormula& f);

// Equisatisfiable monotone formula: each mixed clause (P or N), with P the
// positive and N the negative literals, splits into (P or aux) and
// (~aux or N) for a fresh variable aux. Monotone clauses pass through.
CnfFormula to_monotone(const CnfFormula& f);

// Equisatisfiable strict normal form (see is_normalized_monotone): adds
// fresh variables p, q with clauses (p or q) and (~p or ~q), and per
// variable missing a polarity the always-satisfiable complement clause
// (~x or ~p or ~q) resp. (x or p or q). Conforming input passes through
// unchanged. Throws ValidationError on non-monotone input.
CnfFormula normalize_monotone(const CnfFormula& f);

// One literal occurrence's gadget. Vertex fields hold instance names; `a`
// is the apex alias (u or the previous gateway), `h` is empty for the
// positive flavour.
struct GadgetInfo {
    int clause = 0;   // 1-based
    int literal = 0;  // 1-based within the clause
    std::string var;
    bool positive = true;
    std::string a, b, c, d, e, f, g, h;

    // The two internal matchings: a positive gadget's T is {bc, de} and F is
    // {bd, ce}; a negative gadget's T is {ce, bd} and F is {cd, be}. T means
    // "literal satisfied" (variable true for positive occurrences, false for
    // negative ones).
    std::vector<std::pair<std::string, std::string>> t_edges() const;
    std::vector<std::pair<std::string, std::string>> f_edges() const;
};

struct GadgetMap {
    std::string s = "s", t = "t", u = "u", v = "v", w = "w", x = "x", y = "y";
    std::vector<GadgetInfo> gadgets;  // clause-major, literal-minor order
    std::vector<std::pair<std::string, std::string>> consistency_edges;
    std::vector<std::pair<std::string, std::string>> evicted_edges;
    // The two edges a satisfying assignment's matching must avoid.
    std::pair<std::string, std::string> forbidden_st{"s", "t"};
    std::pair<std::string, std::string> forbidden_wx{"w", "x"};

    const GadgetInfo& gadget(int clause, int literal) const;
    std::string to_json() const;
};

struct BuiltGraph {
    PreferenceSystem ps;
    GadgetMap map;
};

// Builds the gadget graph and its preference lists for a monotone formula
// that has at least one all-positive and one all-negative clause (the
// variable-level strictness of is_normalized_monotone is not required;
// consistency edges simply exist only for variables occurring in both
// polarities). Throws ValidationError otherwise.
BuiltGraph build_graph(const CnfFormula& f);

// Matching encoding an assignment: {tu, vw, xy}, every gadget's fg edge,
// and per gadget T or F edges according to the assignment. Throws
// ValidationError if the assignment misses a variable.
Matching assignment_to_matching(const PreferenceSystem& ps, const GadgetMap& gm,
                                const std::map<std::string, bool>& assignment);

// Reads an assignment back from a popular matching avoiding st and wx
// (PreconditionError otherwise): a variable is true iff some positive
// occurrence plays T, false iff some negative occurrence plays T,
// defaulting to true. Gadget theory guarantees those never conflict.
std::map<std::string, bool> matching_to_assignment(const PreferenceSystem& ps,
                                                   const GadgetMap& gm,
                                                   const Matching& m);

// Padding for larger constraint families on a built gadget graph: k_in
// pendant pairs (z(i), k(i)) whose edge lies in every popular matching
// (mutual first choices; k(i) also hangs off a gateway, round-robin), plus
// k_out evicted edges e(l)h(l) / nodes h(l) drawn from negative gadgets
// (never used by a popular matching containing tu). Throws ValidationError
// when fewer than k_out negative gadgets exist.
struct PaddedInstance {
    PreferenceSystem ps;
    std::vector<std::pair<std::string, std::string>> forced_edges;
    std::vector<std::string> forced_nodes;
    std::vector<std::pair<std::string, std::string>> forbidden_edges;
    std::vector<std::string> forbidden_nodes;
};

PaddedInstance pad_constraints(const PreferenceSystem& ps, const GadgetMap& gm,
                               int k_in, int k_out);

// End-to-end satisfiability: monotonize if needed, normalize, build the
// gadget graph, and ask for a popular matching avoiding {st, wx}. An empty
// clause list is trivially satisfiable. The underlying search is the
// constrained module's exhaustive fallback, so allow_exponential must be
// set for nontrivial formulas (HardCaseError otherwise).
bool decide_sat(const CnfFormula& f, bool allow_exponential);

}  // namespace popmatch
