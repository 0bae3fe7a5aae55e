// Implementation of the ten acceptance criteria. Each criterion is a
// self-contained body returning pass/fail plus a detail line; the runner
// seeds an independent RNG per criterion (so reordering or re-running one
// criterion never changes another), times it, and catches exceptions.

#include "popmatch/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "popmatch/constrained.hpp"
#include "popmatch/dominant.hpp"
#include "popmatch/instance.hpp"
#include "popmatch/instance_gen.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/reduction.hpp"
#include "popmatch/stable.hpp"
#include "popmatch/weighted.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {
namespace {

using Clock = std::chrono::steady_clock;

constexpr long long kCap = 5'000'000;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::mt19937_64 criterion_rng(std::uint64_t seed, int criterion) {
    return std::mt19937_64(seed ^ (0x9E3779B97F4A7C15ULL *
                                   static_cast<std::uint64_t>(criterion + 1)));
}

bool contains_matching(const std::vector<Matching>& set, const Matching& m) {
    return std::find(set.begin(), set.end(), m) != set.end();
}

std::string edges_str(const PreferenceSystem& ps, const Matching& m) {
    std::string out;
    for (const auto& [a, b] : m.edge_list(ps.a_count())) {
        if (!out.empty()) out += ' ';
        out += ps.name(a);
        out += '-';
        out += ps.name(b);
    }
    return out.empty() ? std::string("(empty)") : out;
}

std::pair<bool, std::string> fail_at(int instance_index, const std::string& what) {
    return {false, "instance #" + std::to_string(instance_index) + ": " + what};
}

// --- criterion 1: popularity verdicts vs. the vote-count oracle ------------

std::pair<bool, std::string> criterion1(std::mt19937_64& rng) {
    auto t0 = Clock::now();
    long long verdicts = 0;
    for (int i = 0; i < 1000; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        oracle::EnumerationReport naive = oracle::popular_set_naive(ps, kCap);
        for (const Matching& m : oracle::enumerate_matchings(ps, kCap)) {
            bool expected = contains_matching(naive.popular, m);
            PopularityCertificate cert = is_popular(ps, m);
            ++verdicts;
            if (cert.verdict != expected)
                return fail_at(i, "is_popular says " +
                                      std::string(cert.verdict ? "yes" : "no") +
                                      ", oracle says the opposite for " +
                                      edges_str(ps, m));
            if (!cert.verdict &&
                (!cert.witness || !witness_is_valid(ps, m, *cert.witness)))
                return fail_at(i, "unpopular verdict without a valid witness for " +
                                      edges_str(ps, m));
        }
    }
    double secs = seconds_since(t0);
    if (secs >= 60.0)
        return {false, "exceeded the 60 s budget (" + std::to_string(secs) + " s)"};
    std::ostringstream os;
    os << verdicts << " verdicts over 1000 instances in " << secs << " s";
    return {true, os.str()};
}

// --- criterion 2: node-coverage chain ---------------------------------------

std::pair<bool, std::string> criterion2(std::mt19937_64& rng) {
    for (int i = 0; i < 500; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        if (!oracle::check_coverage_chain(ps, kCap))
            return fail_at(i, "coverage chain violated:\n" + render_instance(ps));
    }
    return {true, "stable-node subset of V(M) subset of dominant-node held on "
                  "500 instances"};
}

// --- criterion 3: size dichotomy --------------------------------------------

std::pair<bool, std::string> criterion3(std::mt19937_64& rng) {
    std::vector<PreferenceSystem> fixtures;
    fixtures.push_back(sample_half_size_instance());
    fixtures.push_back(sample_two_stable_instance());
    fixtures.push_back(single_edge_instance());
    fixtures.push_back(path_three_instance());
    for (int i = 0; i < 504; ++i) {
        PreferenceSystem ps = i < static_cast<int>(fixtures.size())
                                  ? fixtures[static_cast<std::size_t>(i)]
                                  : random_instance(rng, 4, 4, 12);
        oracle::EnumerationReport report = oracle::popular_set(ps, kCap);
        for (const Matching& s : report.stable)
            if (s.size() != report.min_popular_size)
                return fail_at(i, "stable matching " + edges_str(ps, s) +
                                      " has size " + std::to_string(s.size()) +
                                      ", min popular size is " +
                                      std::to_string(report.min_popular_size));
        Matching d = two_level_gale_shapley(ps);
        if (d.size() != report.max_popular_size)
            return fail_at(i, "two-level output " + edges_str(ps, d) +
                                  " has size " + std::to_string(d.size()) +
                                  ", max popular size is " +
                                  std::to_string(report.max_popular_size));
        if (i == 0 && report.max_popular_size != 2 * report.min_popular_size)
            return fail_at(i, "half-size example should have max = 2 * min");
    }
    return {true, "min = stable size and max = two-level size on 4 fixtures + "
                  "500 random instances"};
}

// --- criterion 4: popular-edge decomposition ---------------------------------

std::pair<bool, std::string> criterion4(std::mt19937_64& rng) {
    for (int i = 0; i < 500; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        oracle::EnumerationReport report = oracle::popular_set(ps, kCap);
        const auto& edges = ps.edges();
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            auto [u, v] = edges[static_cast<std::size_t>(e)];
            auto probe = [&](const std::vector<Matching>& ms, bool& in_some,
                             bool& avoided) {
                in_some = false;
                avoided = false;
                for (const Matching& m : ms)
                    (m.contains_edge(u, v) ? in_some : avoided) = true;
            };
            bool in_s, av_s, in_d, av_d, in_p, av_p;
            probe(report.stable, in_s, av_s);
            probe(report.dominant, in_d, av_d);
            probe(report.popular, in_p, av_p);
            std::string ename = ps.name(u) + "-" + ps.name(v);
            if (in_p != (in_s || in_d))
                return fail_at(i, "edge " + ename +
                                      ": popular edges != stable + dominant edges");
            if (av_p != (av_s || av_d))
                return fail_at(i, "edge " + ename +
                                      ": avoided-by-popular != avoided-by-stable "
                                      "+ avoided-by-dominant");
            EdgeClassification c = classify_edge(ps, e);
            if (c.in_some_stable != in_s || c.in_some_dominant != in_d ||
                c.in_some_popular != in_p || c.avoided_by_some_stable != av_s ||
                c.avoided_by_some_dominant != av_d ||
                c.avoided_by_some_popular != av_p)
                return fail_at(i, "classify_edge disagrees with the oracle on " +
                                      ename);
        }
    }
    return {true, "edge decomposition and classify_edge verified on 500 "
                  "instances"};
}

// --- criterion 5: half-approximation guarantee -------------------------------

std::pair<bool, std::string> criterion5(std::mt19937_64& rng) {
    long long comparisons = 0;
    for (int i = 0; i < 100; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        oracle::EnumerationReport report = oracle::popular_set(ps, kCap);
        if (report.popular.empty()) return fail_at(i, "no popular matching found");
        for (int t = 0; t < 200; ++t) {
            WeightMap w = random_weights(rng, ps, 9);
            ApproxResult approx = mwp_half_approx(ps, w);
            WeightValue best = w.matching_weight(ps, report.popular.front());
            for (const Matching& m : report.popular) {
                WeightValue v = w.matching_weight(ps, m);
                if (best < v) best = v;
            }
            WeightValue doubled{approx.value.scaled * 2, approx.value.scale};
            ++comparisons;
            if (doubled < best)
                return fail_at(i, "approximation below half of the optimum "
                                  "(approx " + approx.value.str() + ", opt " +
                                  best.str() + ")");
            if (best < approx.value)
                return fail_at(i, "approximation value exceeds the popular "
                                  "optimum (approx " + approx.value.str() +
                                  ", opt " + best.str() + ")");
            if (t == 0) {
                auto exact = mwp_exact(ps, w, true);
                if (!(exact.second == best))
                    return fail_at(i, "mwp_exact value " + exact.second.str() +
                                          " != oracle optimum " + best.str());
            }
        }
    }
    PreferenceSystem half = sample_half_size_instance();
    WeightMap unit = WeightMap::uniform(half, 1);
    ApproxResult a = mwp_half_approx(half, unit);
    auto exact = mwp_exact(half, unit, true);
    if (!(a.value == exact.second))
        return {false, "unit-weight example: approximation " + a.value.str() +
                           " is not optimal (" + exact.second.str() + ")"};
    std::ostringstream os;
    os << comparisons << " weight vectors over 100 instances, plus exact "
       << "optimality on the unit-weight example";
    return {true, os.str()};
}

// --- criterion 6: worked three-clause formula ---------------------------------

CnfFormula worked_formula() {
    CnfFormula f;
    f.variables = {"x1", "x2", "x3", "x4", "x5"};
    f.clauses = {
        {{"x1", true}, {"x2", true}, {"x3", true}},
        {{"x1", false}, {"x2", false}, {"x4", false}},
        {{"x2", true}, {"x4", true}, {"x5", true}},
    };
    return f;
}

std::pair<bool, std::string> criterion6(std::mt19937_64&) {
    auto t0 = Clock::now();
    BuiltGraph built = build_graph(worked_formula());
    const PreferenceSystem& ps = built.ps;
    std::map<std::string, bool> assignment{{"x1", true},
                                           {"x2", false},
                                           {"x3", false},
                                           {"x4", true},
                                           {"x5", true}};
    Matching m = assignment_to_matching(ps, built.map, assignment);
    int s = ps.id_of("s"), t = ps.id_of("t"), u = ps.id_of("u");
    int v = ps.id_of("v"), w = ps.id_of("w"), x = ps.id_of("x");
    int y = ps.id_of("y");
    if (!m.contains_edge(t, u) || !m.contains_edge(v, w) || !m.contains_edge(x, y))
        return {false, "assignment matching misses one of tu, vw, xy"};
    if (m.contains_edge(s, t) || m.contains_edge(w, x))
        return {false, "assignment matching uses a forbidden edge"};
    PopularityCertificate cert = is_popular(ps, m);
    if (!cert.verdict) return {false, "assignment matching is not popular"};
    LabeledGraph lg(ps, m);
    const std::vector<int>& pp = lg.plus_plus_edges();
    int wx = ps.edge_index(w, x);
    if (pp.size() != 1 || pp.front() != wx) {
        std::ostringstream os;
        os << "expected wx to be the unique (+,+) edge, found " << pp.size()
           << " such edges";
        return {false, os.str()};
    }
    double secs = seconds_since(t0);
    if (secs >= 10.0)
        return {false, "exceeded the 10 s budget (" + std::to_string(secs) + " s)"};
    std::ostringstream os;
    os << ps.vertex_count() << "-vertex graph checked in " << secs << " s";
    return {true, os.str()};
}

// --- criterion 7: end-to-end satisfiability decisions -------------------------

std::pair<bool, std::string> criterion7(std::mt19937_64&) {
    CnfFormula unsat;
    unsat.variables = {"x1"};
    unsat.clauses = {{{"x1", true}}, {{"x1", false}}};
    CnfFormula sat;
    sat.variables = {"x1", "x2"};
    sat.clauses = {{{"x1", true}, {"x2", true}},
                   {{"x1", false}, {"x2", false}}};
    auto t0 = Clock::now();
    bool d_unsat = decide_sat(unsat, true);
    double secs_unsat = seconds_since(t0);
    t0 = Clock::now();
    bool d_sat = decide_sat(sat, true);
    double secs_sat = seconds_since(t0);
    if (d_unsat != false || d_unsat != sat_bruteforce(unsat))
        return {false, "the contradictory one-variable formula was not "
                       "recognized as unsatisfiable"};
    if (d_sat != true || d_sat != sat_bruteforce(sat))
        return {false, "the satisfiable two-variable formula was not "
                       "recognized as satisfiable"};
    if (secs_unsat >= 300.0 || secs_sat >= 300.0)
        return {false, "exceeded the 300 s per-decision budget"};
    std::ostringstream os;
    os << "unsat decided in " << secs_unsat << " s, sat in " << secs_sat << " s";
    return {true, os.str()};
}

// --- criterion 8: gadget-graph structural properties --------------------------

std::pair<bool, std::string> criterion8(std::mt19937_64&) {
    CnfFormula unsat;
    unsat.variables = {"x1"};
    unsat.clauses = {{{"x1", true}}, {{"x1", false}}};
    BuiltGraph built = build_graph(unsat);
    const PreferenceSystem& ps = built.ps;
    const GadgetMap& gm = built.map;
    int s = ps.id_of(gm.s), t = ps.id_of(gm.t), u = ps.id_of(gm.u);
    int w = ps.id_of(gm.w), x = ps.id_of(gm.x), y = ps.id_of(gm.y);
    oracle::EnumerationReport report = oracle::popular_set(ps, kCap);
    long long with_tu = 0;
    for (const Matching& m : report.popular) {
        bool no_stwx = !m.contains_edge(s, t) && !m.contains_edge(w, x);
        bool tu_xy = m.contains_edge(t, u) && m.contains_edge(x, y);
        bool coverage = !m.covers(s) && m.covers(y);
        if (no_stwx != tu_xy || tu_xy != coverage)
            return {false, "equivalence chain broken for popular matching " +
                           edges_str(ps, m)};
        if (!m.contains_edge(t, u)) continue;
        ++with_tu;
        for (const GadgetInfo& gi : gm.gadgets) {
            int apex = ps.id_of(gi.a);
            int gate = ps.id_of(gi.g);
            if (m.partner[static_cast<std::size_t>(apex)] !=
                ps.neighbors(apex).front())
                return {false, "apex " + gi.a + " not matched to its favorite in " +
                               edges_str(ps, m)};
            if (m.partner[static_cast<std::size_t>(gate)] !=
                ps.neighbors(gate).front())
                return {false, "gateway " + gi.g +
                               " not matched to its favorite in " +
                               edges_str(ps, m)};
            auto holds = [&](const std::vector<std::pair<std::string,
                                                         std::string>>& es) {
                for (const auto& [p, q] : es)
                    if (!m.contains_edge(ps.id_of(p), ps.id_of(q))) return false;
                return true;
            };
            bool plays_t = holds(gi.t_edges());
            bool plays_f = holds(gi.f_edges());
            if (plays_t == plays_f)
                return {false, "gadget (" + std::to_string(gi.clause) + "." +
                               std::to_string(gi.literal) +
                               ") plays neither or both of T and F in " +
                               edges_str(ps, m)};
        }
        for (const auto& [p, q] : gm.consistency_edges)
            if (m.contains_edge(ps.id_of(p), ps.id_of(q)))
                return {false, "consistency edge " + p + "-" + q +
                               " used by popular matching " + edges_str(ps, m)};
        for (const auto& [p, q] : gm.evicted_edges)
            if (m.contains_edge(ps.id_of(p), ps.id_of(q)))
                return {false, "evicted edge " + p + "-" + q +
                               " used by popular matching " + edges_str(ps, m)};
    }
    std::ostringstream os;
    os << report.popular.size() << " popular matchings checked (" << with_tu
       << " containing tu) out of " << report.total_matchings << " matchings";
    return {true, os.str()};
}

// --- criterion 9: rotation machinery vs. brute force ---------------------------

std::pair<bool, std::string> criterion9(std::mt19937_64& rng) {
    auto sorted = [](std::vector<Matching> ms) {
        std::sort(ms.begin(), ms.end(),
                  [](const Matching& a, const Matching& b) {
                      return a.partner < b.partner;
                  });
        return ms;
    };
    for (int i = 0; i < 500; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        std::vector<Matching> mine = sorted(all_stable_matchings(ps, kCap));
        std::vector<Matching> brute =
            sorted(oracle::stable_matchings_bruteforce(ps, kCap));
        if (mine != brute)
            return fail_at(i, "rotation-generated stable set (" +
                                  std::to_string(mine.size()) +
                                  ") differs from brute force (" +
                                  std::to_string(brute.size()) + ")");
    }
    for (int i = 0; i < 200; ++i) {
        PreferenceSystem ps = random_instance(rng, 4, 4, 12);
        WeightMap w = random_weights(rng, ps, 9);
        auto [m, value] = max_weight_stable(ps, w);
        std::vector<Matching> all = all_stable_matchings(ps, kCap);
        WeightValue best = w.matching_weight(ps, all.front());
        for (const Matching& cand : all) {
            WeightValue v = w.matching_weight(ps, cand);
            if (best < v) best = v;
        }
        if (!(value == best) || !(w.matching_weight(ps, m) == value))
            return fail_at(i, "max_weight_stable value " + value.str() +
                                  " != enumeration optimum " + best.str());
        if (!contains_matching(all, m))
            return fail_at(i, "max_weight_stable returned a non-stable matching");
    }
    return {true, "stable sets equal on 500 instances; optimizer matched "
                  "enumeration on 200 weight vectors"};
}

// --- criterion 10: construction output is properly two-sided -------------------

std::pair<bool, std::string> criterion10(std::mt19937_64& rng) {
    for (int i = 0; i < 100; ++i) {
        CnfFormula f = random_normalized_formula(rng, 4, 4);
        BuiltGraph built = build_graph(f);
        const PreferenceSystem& ps = built.ps;
        int n = ps.vertex_count();
        std::vector<int> color(static_cast<std::size_t>(n), -1);
        for (int root = 0; root < n; ++root) {
            if (color[static_cast<std::size_t>(root)] != -1) continue;
            color[static_cast<std::size_t>(root)] = 0;
            std::vector<int> queue{root};
            bool root_in_a = ps.side_of(root) == Side::A;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                int cur = queue[head];
                for (int nb : ps.neighbors(cur)) {
                    if (color[static_cast<std::size_t>(nb)] == -1) {
                        color[static_cast<std::size_t>(nb)] =
                            1 - color[static_cast<std::size_t>(cur)];
                        queue.push_back(nb);
                    } else if (color[static_cast<std::size_t>(nb)] ==
                               color[static_cast<std::size_t>(cur)]) {
                        return fail_at(i, "odd cycle through " + ps.name(nb));
                    }
                }
            }
            for (int vtx : queue) {
                bool in_a = ps.side_of(vtx) == Side::A;
                bool even = color[static_cast<std::size_t>(vtx)] == 0;
                if ((in_a == root_in_a) != even)
                    return fail_at(i, "declared side of " + ps.name(vtx) +
                                          " contradicts the 2-coloring");
            }
        }
    }
    return {true, "100 random normalized formulas produced bipartite graphs "
                  "with consistent sides"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            std::ostream* progress) {
    struct Item {
        int number;
        const char* description;
        std::pair<bool, std::string> (*body)(std::mt19937_64&);
    };
    const Item items[] = {
        {1, "popularity verdicts match the vote-count oracle", &criterion1},
        {2, "node-coverage chain stable - popular - dominant", &criterion2},
        {3, "size dichotomy: stable = minimum, two-level = maximum", &criterion3},
        {4, "popular edges decompose into stable and dominant edges", &criterion4},
        {5, "weighted approximation reaches half the optimum", &criterion5},
        {6, "worked formula: assignment matching popular, unique (+,+) edge",
         &criterion6},
        {7, "satisfiability decisions agree with brute force", &criterion7},
        {8, "gadget-graph structure holds for all popular matchings", &criterion8},
        {9, "rotation enumeration and optimization match brute force",
         &criterion9},
        {10, "construction output is bipartite with consistent sides",
         &criterion10},
    };
    std::vector<CriterionResult> results;
    for (const Item& item : items) {
        CriterionResult r;
        r.number = item.number;
        r.description = item.description;
        auto t0 = Clock::now();
        try {
            std::mt19937_64 rng = criterion_rng(seed, item.number);
            auto [ok, detail] = item.body(rng);
            r.passed = ok;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = seconds_since(t0);
        if (progress) {
            std::ostringstream line;
            line << (r.passed ? "PASS" : "FAIL") << " criterion " << r.number
                 << " (" << r.description << "): " << r.detail;
            *progress << line.str() << std::endl;
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace popmatch
