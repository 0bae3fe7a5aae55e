// CNF handling and the clause-gadget reduction. See reduction.hpp for the
// shape of the construction; the preference lists assembled here follow the
// per-gadget canonical patterns, with deterministic choices wherever the
// pattern leaves an order free (hub entries grouped by clause in input
// order, consistency partners sorted by the partner's clause/literal
// position).

#include "popmatch/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "popmatch/constrained.hpp"
#include "popmatch/popularity.hpp"

namespace popmatch {

void CnfFormula::validate() const {
    std::unordered_set<std::string> declared;
    for (const std::string& v : variables) {
        if (v.empty()) throw ValidationError("empty variable name");
        if (!declared.insert(v).second)
            throw ValidationError("duplicate variable '" + v + "'");
    }
    for (const auto& clause : clauses) {
        if (clause.empty()) throw ValidationError("empty clause");
        if (clause.size() > 3)
            throw ValidationError("clause with more than three literals");
        std::unordered_set<std::string> seen;
        for (const Literal& lit : clause) {
            if (!declared.count(lit.var))
                throw ValidationError("undeclared variable '" + lit.var + "'");
            if (!seen.insert(lit.var).second)
                throw ValidationError("variable '" + lit.var +
                                      "' repeated within a clause");
        }
    }
}

bool CnfFormula::is_monotone() const {
    for (const auto& clause : clauses) {
        for (const Literal& lit : clause)
            if (lit.positive != clause.front().positive) return false;
    }
    return true;
}

bool CnfFormula::is_normalized_monotone() const {
    if (!is_monotone()) return false;
    bool has_pos_clause = false, has_neg_clause = false;
    std::unordered_map<std::string, int> polarity;  // bit 0: pos, bit 1: neg
    for (const auto& clause : clauses) {
        (clause.front().positive ? has_pos_clause : has_neg_clause) = true;
        for (const Literal& lit : clause)
            polarity[lit.var] |= lit.positive ? 1 : 2;
    }
    if (!has_pos_clause || !has_neg_clause) return false;
    for (const std::string& v : variables)
        if (polarity[v] != 3) return false;
    return true;
}

CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    long long want_vars = -1, want_clauses = -1;
    std::vector<Literal> pending;
    std::string line;
    int line_no = 0;
    int header_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank
        if (tok[0] == 'c' || tok[0] == '%') continue;
        if (tok == "p") {
            if (want_vars >= 0) throw ParseError("duplicate header", line_no);
            std::string kind;
            if (!(ls >> kind >> want_vars >> want_clauses) || kind != "cnf" ||
                want_vars < 0 || want_clauses < 0)
                throw ParseError("malformed header; expected 'p cnf <vars> <clauses>'",
                                 line_no);
            header_line = line_no;
            for (long long i = 1; i <= want_vars; ++i)
                f.variables.push_back("x" + std::to_string(i));
            continue;
        }
        if (want_vars < 0) throw ParseError("clause before 'p cnf' header", line_no);
        ls.clear();
        ls.str(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (pending.empty()) throw ParseError("empty clause", line_no);
                f.clauses.push_back(pending);
                pending.clear();
                continue;
            }
            long long var = lit < 0 ? -lit : lit;
            if (var > want_vars)
                throw ParseError("literal " + std::to_string(lit) +
                                     " out of declared range",
                                 line_no);
            pending.push_back({"x" + std::to_string(var), lit > 0});
        }
        if (!ls.eof())
            throw ParseError("clause lines must contain integers only", line_no);
    }
    if (want_vars < 0) throw ParseError("missing 'p cnf' header");
    if (!pending.empty())
        throw ParseError("last clause not terminated by 0", line_no);
    if (static_cast<long long>(f.clauses.size()) != want_clauses)
        throw ParseError("header declares " + std::to_string(want_clauses) +
                             " clauses but " + std::to_string(f.clauses.size()) +
                             " were given",
                         header_line);
    f.validate();
    return f;
}

CnfFormula parse_dimacs_string(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

CnfFormula parse_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_dimacs(in);
}

bool sat_bruteforce(const CnfFormula& f) {
    f.validate();
    const int n = static_cast<int>(f.variables.size());
    if (n > 24)
        throw HardCaseError("truth-table check limited to 24 variables, got " +
                            std::to_string(n));
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) index[f.variables[i]] = i;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        bool ok = true;
        for (const auto& clause : f.clauses) {
            bool sat = false;
            for (const Literal& lit : clause) {
                bool value = (mask >> index[lit.var]) & 1;
                if (value == lit.positive) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

CnfFormula to_monotone(const CnfFormula& f) {
    f.validate();
    CnfFormula out;
    out.variables = f.variables;
    std::unordered_set<std::string> used(f.variables.begin(), f.variables.end());
    int next_aux = 1;
    for (const auto& clause : f.clauses) {
        std::vector<Literal> pos, neg;
        for (const Literal& lit : clause) (lit.positive ? pos : neg).push_back(lit);
        if (pos.empty() || neg.empty()) {
            out.clauses.push_back(clause);
            continue;
        }
        std::string aux;
        do {
            aux = "aux" + std::to_string(next_aux++);
        } while (used.count(aux));
        used.insert(aux);
        out.variables.push_back(aux);
        pos.push_back({aux, true});
        neg.insert(neg.begin(), {aux, false});
        out.clauses.push_back(std::move(pos));
        out.clauses.push_back(std::move(neg));
    }
    return out;
}

CnfFormula normalize_monotone(const CnfFormula& f) {
    f.validate();
    if (!f.is_monotone())
        throw ValidationError("normalization requires a monotone formula");
    if (f.is_normalized_monotone()) return f;

    CnfFormula out = f;
    std::unordered_set<std::string> used(f.variables.begin(), f.variables.end());
    std::string p = "p", q = "q";
    for (int k = 1; used.count(p) || used.count(q); ++k) {
        p = "p" + std::to_string(k);
        q = "q" + std::to_string(k);
    }
    out.variables.push_back(p);
    out.variables.push_back(q);
    out.clauses.push_back({{p, true}, {q, true}});
    out.clauses.push_back({{p, false}, {q, false}});

    std::unordered_map<std::string, int> polarity;
    for (const auto& clause : f.clauses)
        for (const Literal& lit : clause)
            polarity[lit.var] |= lit.positive ? 1 : 2;
    for (const std::string& v : f.variables) {
        int seen = polarity[v];
        // Complement clauses are always satisfiable once p != q, so adding
        // them preserves satisfiability while giving v the missing polarity.
        if (!(seen & 2))
            out.clauses.push_back({{v, false}, {p, false}, {q, false}});
        if (!(seen & 1)) out.clauses.push_back({{v, true}, {p, true}, {q, true}});
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> GadgetInfo::t_edges() const {
    if (positive) return {{b, c}, {d, e}};
    return {{c, e}, {b, d}};
}

std::vector<std::pair<std::string, std::string>> GadgetInfo::f_edges() const {
    if (positive) return {{b, d}, {c, e}};
    return {{c, d}, {b, e}};
}

const GadgetInfo& GadgetMap::gadget(int clause, int literal) const {
    for (const GadgetInfo& gi : gadgets)
        if (gi.clause == clause && gi.literal == literal) return gi;
    throw ValidationError("no gadget for clause " + std::to_string(clause) +
                          ", literal " + std::to_string(literal));
}

std::string GadgetMap::to_json() const {
    nlohmann::ordered_json j;
    j["specials"] = {{"s", s}, {"t", t}, {"u", u}, {"v", v},
                     {"w", w}, {"x", x}, {"y", y}};
    j["forbidden_edges"] = nlohmann::ordered_json::array(
        {nlohmann::ordered_json::array({forbidden_st.first, forbidden_st.second}),
         nlohmann::ordered_json::array({forbidden_wx.first, forbidden_wx.second})});
    j["gadgets"] = nlohmann::ordered_json::array();
    for (const GadgetInfo& gi : gadgets) {
        nlohmann::ordered_json g;
        g["clause"] = gi.clause;
        g["literal"] = gi.literal;
        g["var"] = gi.var;
        g["positive"] = gi.positive;
        nlohmann::ordered_json verts;
        verts["a"] = gi.a;
        verts["b"] = gi.b;
        verts["c"] = gi.c;
        verts["d"] = gi.d;
        verts["e"] = gi.e;
        verts["f"] = gi.f;
        verts["g"] = gi.g;
        if (!gi.h.empty()) verts["h"] = gi.h;
        g["vertices"] = verts;
        g["t_edges"] = gi.t_edges();
        g["f_edges"] = gi.f_edges();
        j["gadgets"].push_back(g);
    }
    j["consistency_edges"] = consistency_edges;
    j["evicted_edges"] = evicted_edges;
    return j.dump(2);
}

namespace {

std::string occurrence_tag(int clause, int literal) {
    return "(" + std::to_string(clause) + "." + std::to_string(literal) + ")";
}

}  // namespace

BuiltGraph build_graph(const CnfFormula& f) {
    f.validate();
    if (!f.is_monotone())
        throw ValidationError("gadget construction requires a monotone formula");
    bool has_pos_clause = false, has_neg_clause = false;
    for (const auto& clause : f.clauses)
        (clause.front().positive ? has_pos_clause : has_neg_clause) = true;
    if (!has_pos_clause || !has_neg_clause)
        throw ValidationError(
            "gadget construction requires at least one all-positive and one "
            "all-negative clause");

    GadgetMap gm;
    std::vector<int> clause_first;  // gadget index of each clause's first literal
    for (int ci = 0; ci < static_cast<int>(f.clauses.size()); ++ci) {
        const auto& clause = f.clauses[ci];
        clause_first.push_back(static_cast<int>(gm.gadgets.size()));
        for (int li = 0; li < static_cast<int>(clause.size()); ++li) {
            GadgetInfo gi;
            gi.clause = ci + 1;
            gi.literal = li + 1;
            gi.var = clause[li].var;
            gi.positive = clause[li].positive;
            std::string tag = occurrence_tag(gi.clause, gi.literal);
            gi.b = "b" + tag;
            gi.c = "c" + tag;
            gi.d = "d" + tag;
            gi.e = "e" + tag;
            gi.f = "f" + tag;
            gi.g = "g" + tag;
            if (!gi.positive) gi.h = "h" + tag;
            gi.a = li == 0 ? gm.u : gm.gadgets.back().g;
            if (!gi.positive) gm.evicted_edges.push_back({gi.e, gi.h});
            gm.gadgets.push_back(std::move(gi));
        }
    }

    // Consistency edges pair the c-vertex of every positive occurrence of a
    // variable with the c-vertex of every negative occurrence, in occurrence
    // order on both sides.
    std::unordered_map<std::string, std::vector<int>> pos_occ, neg_occ;
    for (int gi = 0; gi < static_cast<int>(gm.gadgets.size()); ++gi) {
        auto& bucket = gm.gadgets[gi].positive ? pos_occ : neg_occ;
        bucket[gm.gadgets[gi].var].push_back(gi);
    }
    std::unordered_map<std::string, std::vector<std::string>> partners;
    for (const GadgetInfo& gi : gm.gadgets) {
        if (!gi.positive) continue;
        for (int nj : neg_occ[gi.var]) {
            gm.consistency_edges.push_back({gi.c, gm.gadgets[nj].c});
            partners[gi.c].push_back(gm.gadgets[nj].c);
            partners[gm.gadgets[nj].c].push_back(gi.c);
        }
    }
    // Partner lists sorted by the partner occurrence's (clause, literal);
    // gadget creation order already is that order, so sort by first index in
    // the gadget list.
    std::unordered_map<std::string, int> gadget_order;
    for (int gi = 0; gi < static_cast<int>(gm.gadgets.size()); ++gi)
        gadget_order[gm.gadgets[gi].c] = gi;
    for (auto& [c_name, list] : partners)
        std::sort(list.begin(), list.end(),
                  [&](const std::string& lhs, const std::string& rhs) {
                      return gadget_order[lhs] < gadget_order[rhs];
                  });

    // Assemble every vertex's preference list (as names).
    std::unordered_map<std::string, std::vector<std::string>> prefs;
    prefs[gm.s] = {gm.t};
    prefs[gm.t] = {gm.u, gm.s};
    prefs[gm.u] = {gm.t};
    prefs[gm.v] = {};
    prefs[gm.w] = {gm.x, gm.v};
    prefs[gm.x] = {gm.w, gm.y};
    prefs[gm.y] = {gm.x};

    for (int ci = 0; ci < static_cast<int>(f.clauses.size()); ++ci) {
        const int first = clause_first[ci];
        const int size = static_cast<int>(f.clauses[ci].size());
        // Hub entries for the clause's first gadget: b, then c when negative
        // (the hub's internal order is free; grouped by clause).
        const GadgetInfo& head = gm.gadgets[first];
        prefs[gm.u].push_back(head.b);
        if (!head.positive) prefs[gm.u].push_back(head.c);

        for (int li = 0; li < size; ++li) {
            const GadgetInfo& gi = gm.gadgets[first + li];
            if (gi.positive) {
                prefs[gi.b] = {gi.c, gi.a, gi.d};
                prefs[gi.c] = {gi.e};
                for (const std::string& p : partners[gi.c])
                    prefs[gi.c].push_back(p);
                prefs[gi.c].push_back(gi.b);
                prefs[gi.d] = {gi.b, gi.e, gi.f};
                prefs[gi.e] = {gi.d, gi.c};
                prefs[gi.f] = {gi.d, gi.g};
            } else {
                prefs[gi.b] = {gi.a, gi.e, gi.d};
                prefs[gi.c] = {gi.d, gi.a};
                for (const std::string& p : partners[gi.c])
                    prefs[gi.c].push_back(p);
                prefs[gi.c].push_back(gi.e);
                prefs[gi.d] = {gi.b, gi.c};
                prefs[gi.e] = {gi.c, gi.f, gi.b, gi.h};
                prefs[gi.f] = {gi.g, gi.e};
                prefs[gi.h] = {gi.e};
            }
            // Gateway list: own f first, then the next gadget's entries (c
            // before b for a negative successor, by its apex ranks), or v
            // for the clause's last literal.
            prefs[gi.g] = {gi.f};
            if (li + 1 < size) {
                const GadgetInfo& next = gm.gadgets[first + li + 1];
                if (next.positive) {
                    prefs[gi.g].push_back(next.b);
                } else {
                    prefs[gi.g].push_back(next.c);
                    prefs[gi.g].push_back(next.b);
                }
            } else {
                prefs[gi.g].push_back(gm.v);
                prefs[gm.v].push_back(gi.g);
            }
        }
    }
    prefs[gm.v].push_back(gm.w);

    // Register vertices: specials first, then gadget internals in creation
    // order. A side hosts s, u, w, y plus each gadget's {c,d,g} (positive)
    // or {d,e,g} (negative).
    std::vector<std::string> a_names = {gm.s, gm.u, gm.w, gm.y};
    std::vector<std::string> b_names = {gm.t, gm.v, gm.x};
    for (const GadgetInfo& gi : gm.gadgets) {
        if (gi.positive) {
            a_names.insert(a_names.end(), {gi.c, gi.d, gi.g});
            b_names.insert(b_names.end(), {gi.b, gi.e, gi.f});
        } else {
            a_names.insert(a_names.end(), {gi.d, gi.e, gi.g});
            b_names.insert(b_names.end(), {gi.b, gi.c, gi.f, gi.h});
        }
    }

    std::unordered_map<std::string, int> ids;
    std::vector<std::string> all = a_names;
    all.insert(all.end(), b_names.begin(), b_names.end());
    for (int i = 0; i < static_cast<int>(all.size()); ++i) ids[all[i]] = i;
    std::vector<std::vector<int>> pref_ids(all.size());
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
        for (const std::string& nb : prefs.at(all[i]))
            pref_ids[i].push_back(ids.at(nb));
    }
    return BuiltGraph{PreferenceSystem(a_names, b_names, std::move(pref_ids)),
                      std::move(gm)};
}

Matching assignment_to_matching(const PreferenceSystem& ps, const GadgetMap& gm,
                                const std::map<std::string, bool>& assignment) {
    std::vector<std::pair<std::string, std::string>> edges = {
        {gm.t, gm.u}, {gm.v, gm.w}, {gm.x, gm.y}};
    for (const GadgetInfo& gi : gm.gadgets) {
        edges.push_back({gi.f, gi.g});
        auto it = assignment.find(gi.var);
        if (it == assignment.end())
            throw ValidationError("assignment misses variable '" + gi.var + "'");
        // T encodes "literal satisfied": variable true at positive
        // occurrences, variable false at negative ones.
        bool plays_t = gi.positive ? it->second : !it->second;
        auto chosen = plays_t ? gi.t_edges() : gi.f_edges();
        edges.insert(edges.end(), chosen.begin(), chosen.end());
    }
    std::vector<std::pair<int, int>> id_edges;
    id_edges.reserve(edges.size());
    for (const auto& [p, r] : edges) id_edges.push_back({ps.id_of(p), ps.id_of(r)});
    return Matching::from_edges(ps, id_edges);
}

std::map<std::string, bool> matching_to_assignment(const PreferenceSystem& ps,
                                                   const GadgetMap& gm,
                                                   const Matching& m) {
    auto has_edge = [&](const std::pair<std::string, std::string>& e) {
        return m.contains_edge(ps.id_of(e.first), ps.id_of(e.second));
    };
    if (has_edge(gm.forbidden_st) || has_edge(gm.forbidden_wx))
        throw PreconditionError(
            "matching uses a forbidden edge; no assignment corresponds to it");
    if (!is_popular(ps, m).verdict)
        throw PreconditionError("matching is not popular");

    auto plays_t = [&](const GadgetInfo& gi) {
        for (const auto& e : gi.t_edges())
            if (!has_edge(e)) return false;
        return true;
    };
    std::map<std::string, bool> out;
    for (const GadgetInfo& gi : gm.gadgets)
        if (!out.count(gi.var)) out[gi.var] = true;  // default
    std::map<std::string, int> constrained;  // bit 0: true seen, bit 1: false seen
    for (const GadgetInfo& gi : gm.gadgets) {
        if (!plays_t(gi)) continue;
        constrained[gi.var] |= gi.positive ? 1 : 2;
        out[gi.var] = gi.positive;
    }
    for (const auto& [var, bits] : constrained)
        if (bits == 3)
            throw std::logic_error("variable '" + var +
                                   "' assigned both values; gadget theory violated");
    return out;
}

PaddedInstance pad_constraints(const PreferenceSystem& ps, const GadgetMap& gm,
                               int k_in, int k_out) {
    if (k_in < 0 || k_out < 0)
        throw ValidationError("padding counts must be nonnegative");
    if (k_out > static_cast<int>(gm.evicted_edges.size()))
        throw ValidationError(
            "not enough negative gadgets for the requested forbidden padding");

    PaddedInstance out{ps, {}, {}, {}, {}};
    for (int i = 0; i < k_out; ++i) {
        out.forbidden_edges.push_back(gm.evicted_edges[i]);
        out.forbidden_nodes.push_back(gm.evicted_edges[i].second);  // h vertex
    }
    if (k_in == 0) return out;

    // Rebuild the instance with k_in pendant pairs: z(i) on the A side with
    // the single neighbour k(i); k(i) ranks z(i) first and a gateway second;
    // the gateway (round-robin over gadgets) appends k(i) at the very end of
    // its list. Mutual first choice puts z(i)k(i) into every popular
    // matching.
    std::vector<std::string> a_names, b_names;
    for (int v = 0; v < ps.a_count(); ++v) a_names.push_back(ps.name(v));
    for (int v = ps.a_count(); v < ps.vertex_count(); ++v)
        b_names.push_back(ps.name(v));
    std::vector<std::vector<std::string>> pref_names(ps.vertex_count());
    for (int v = 0; v < ps.vertex_count(); ++v)
        for (int nb : ps.neighbors(v)) pref_names[v].push_back(ps.name(nb));

    std::vector<std::string> gateways;
    for (const GadgetInfo& gi : gm.gadgets) gateways.push_back(gi.g);
    if (gateways.empty()) throw ValidationError("gadget map lists no gateways");

    std::vector<std::vector<std::string>> new_a_prefs, new_b_prefs;
    for (int i = 1; i <= k_in; ++i) {
        std::string z = "z(" + std::to_string(i) + ")";
        std::string k = "k(" + std::to_string(i) + ")";
        while (ps.try_id(z)) z += "'";
        while (ps.try_id(k)) k += "'";
        const std::string& gate = gateways[(i - 1) % gateways.size()];
        a_names.push_back(z);
        b_names.push_back(k);
        new_a_prefs.push_back({k});
        new_b_prefs.push_back({z, gate});
        pref_names[ps.id_of(gate)].push_back(k);
        out.forced_edges.push_back({z, k});
        out.forced_nodes.push_back(z);
        out.forced_nodes.push_back(k);
    }

    std::vector<std::vector<std::string>> all_pref_names;
    for (int v = 0; v < ps.a_count(); ++v) all_pref_names.push_back(pref_names[v]);
    for (auto& p : new_a_prefs) all_pref_names.push_back(std::move(p));
    for (int v = ps.a_count(); v < ps.vertex_count(); ++v)
        all_pref_names.push_back(pref_names[v]);
    for (auto& p : new_b_prefs) all_pref_names.push_back(std::move(p));

    std::unordered_map<std::string, int> ids;
    std::vector<std::string> all = a_names;
    all.insert(all.end(), b_names.begin(), b_names.end());
    for (int i = 0; i < static_cast<int>(all.size()); ++i) ids[all[i]] = i;
    std::vector<std::vector<int>> pref_ids(all.size());
    for (int i = 0; i < static_cast<int>(all.size()); ++i)
        for (const std::string& nb : all_pref_names[i])
            pref_ids[i].push_back(ids.at(nb));
    out.ps = PreferenceSystem(a_names, b_names, std::move(pref_ids));
    return out;
}

bool decide_sat(const CnfFormula& f, bool allow_exponential) {
    f.validate();
    if (f.clauses.empty()) return true;
    CnfFormula monotone = f.is_monotone() ? f : to_monotone(f);
    CnfFormula normal = normalize_monotone(monotone);
    BuiltGraph built = build_graph(normal);
    ConstraintSet cs;
    cs.forbidden_edges = {
        built.ps.edge_index(built.ps.id_of(built.map.forbidden_st.first),
                            built.ps.id_of(built.map.forbidden_st.second)),
        built.ps.edge_index(built.ps.id_of(built.map.forbidden_wx.first),
                            built.ps.id_of(built.map.forbidden_wx.second))};
    return solve_pmffe(built.ps, cs, allow_exponential).found();
}

}  // namespace popmatch
