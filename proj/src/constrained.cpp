// pmffe dispatcher, edge classification, companion problems, and the
// guarded exhaustive fallback. See constrained.hpp for the case analysis.

#include "popmatch/constrained.hpp"

#include <algorithm>
#include <stdexcept>

#include "popmatch/dominant.hpp"
#include "popmatch/popularity.hpp"
#include "popmatch/stable.hpp"

namespace popmatch {

void ConstraintSet::normalize() {
    auto tidy = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    tidy(forced_nodes);
    tidy(forbidden_nodes);
    tidy(forced_edges);
    tidy(forbidden_edges);
}

void ConstraintSet::validate(const PreferenceSystem& ps) const {
    const int n = ps.vertex_count();
    const int m = ps.edge_count();
    auto check_nodes = [&](const std::vector<int>& v, const char* what) {
        for (int id : v) {
            if (id < 0 || id >= n)
                throw ValidationError(std::string(what) + ": vertex id out of range");
        }
    };
    auto check_edges = [&](const std::vector<int>& v, const char* what) {
        for (int e : v) {
            if (e < 0 || e >= m)
                throw ValidationError(std::string(what) + ": edge index out of range");
        }
    };
    check_nodes(forced_nodes, "forced nodes");
    check_nodes(forbidden_nodes, "forbidden nodes");
    check_edges(forced_edges, "forced edges");
    check_edges(forbidden_edges, "forbidden edges");

    std::vector<char> in_forced(n, 0), in_forbidden(n, 0);
    for (int id : forced_nodes) in_forced[id] = 1;
    for (int id : forbidden_nodes) {
        if (in_forced[id])
            throw ValidationError("vertex '" + ps.name(id) +
                                  "' is both forced and forbidden");
        in_forbidden[id] = 1;
    }
    std::vector<char> edge_forced(m, 0);
    for (int e : forced_edges) edge_forced[e] = 1;
    for (int e : forbidden_edges) {
        if (edge_forced[e]) {
            auto [u, v] = ps.edges()[e];
            throw ValidationError("edge (" + ps.name(u) + ", " + ps.name(v) +
                                  ") is both forced and forbidden");
        }
    }
    auto check_endpoints = [&](const std::vector<int>& v, const char* what) {
        for (int e : v) {
            auto [u, w] = ps.edges()[e];
            for (int x : {u, w}) {
                if (in_forced[x] || in_forbidden[x])
                    throw ValidationError(std::string(what) + ": endpoint '" +
                                          ps.name(x) +
                                          "' also appears in a node constraint");
            }
        }
    };
    check_endpoints(forced_edges, "forced edges");
    check_endpoints(forbidden_edges, "forbidden edges");
}

EdgeClassification classify_edge(const PreferenceSystem& ps, int edge_index) {
    if (edge_index < 0 || edge_index >= ps.edge_count())
        throw ValidationError("classify_edge: edge index out of range");
    auto [u, v] = ps.edges()[edge_index];

    RotationPoset poset = enumerate_rotations(ps);

    EdgeClassification out;
    out.in_some_stable = is_stable_pair(poset, ps, u, v);
    out.in_some_dominant = is_dominant_pair(ps, u, v);
    out.in_some_popular = out.in_some_stable || out.in_some_dominant;
    out.avoided_by_some_stable = avoided_by_some_stable(poset, ps, u, v);
    out.avoided_by_some_dominant = avoided_by_some_dominant(ps, u, v);
    out.avoided_by_some_popular =
        out.avoided_by_some_stable || out.avoided_by_some_dominant;
    return out;
}

EdgeClassification classify_edge(const PreferenceSystem& ps, int u, int v) {
    int e = ps.edge_index(u, v);
    if (e < 0)
        throw ValidationError("classify_edge: (" + ps.name(u) + ", " + ps.name(v) +
                              ") is not an edge");
    return classify_edge(ps, e);
}

namespace {

// Every popular matching is maximal: adding an edge between two exposed
// vertices wins two votes and loses none.
bool is_maximal(const PreferenceSystem& ps, const Matching& m) {
    for (auto [u, v] : ps.edges())
        if (!m.covers(u) && !m.covers(v)) return false;
    return true;
}

bool satisfies(const PreferenceSystem& ps, const Matching& m,
               const detail::SearchSpec& spec) {
    const int n = ps.vertex_count();
    for (int v = 0; v < n; ++v) {
        if (spec.must_cover[v] && !m.covers(v)) return false;
        if (spec.must_avoid[v] && m.covers(v)) return false;
        if (spec.exact_cover && !spec.must_cover[v] && m.covers(v)) return false;
    }
    for (int e : spec.forced_edges) {
        auto [u, v] = ps.edges()[e];
        if (!m.contains_edge(u, v)) return false;
    }
    const auto& edges = ps.edges();
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (!spec.forbidden_edge.empty() && spec.forbidden_edge[e] &&
            m.contains_edge(edges[e].first, edges[e].second))
            return false;
    }
    if (spec.budget >= 0 && !spec.budget_edge.empty()) {
        int used = 0;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            if (spec.budget_edge[e] &&
                m.contains_edge(edges[e].first, edges[e].second))
                ++used;
        if (used > spec.budget) return false;
    }
    return true;
}

// Depth-first enumeration over per-A-vertex decisions, restricted to one
// target matching size. Returns the first (deterministic order) popular
// matching meeting the spec, if any.
class TargetSizeSearch {
  public:
    TargetSizeSearch(const PreferenceSystem& ps, const detail::SearchSpec& spec,
                     int target)
        : ps_(ps),
          spec_(spec),
          target_(target),
          partner_(ps.vertex_count(), -1),
          last_chance_(ps.a_count()) {
        const int n = ps_.vertex_count();
        // For pruning: the last A-vertex (in scan order) adjacent to each
        // must-cover B-vertex; once the scan passes it the B-vertex can no
        // longer be matched.
        for (int b = ps_.a_count(); b < n; ++b) {
            if (!spec_.must_cover[b]) continue;
            int last = -1;
            for (int a : ps_.neighbors(b)) last = std::max(last, a);
            last_chance_[last].push_back(b);
        }
    }

    std::optional<Matching> run() {
        // Pre-place forced edges; a clash makes every target size infeasible,
        // but reporting "not found" per size keeps the control flow simple.
        int placed = 0;
        for (int e : spec_.forced_edges) {
            auto [u, v] = ps_.edges()[e];
            if (spec_.must_avoid[u] || spec_.must_avoid[v]) return std::nullopt;
            if (spec_.exact_cover && (!spec_.must_cover[u] || !spec_.must_cover[v]))
                return std::nullopt;
            if (!spec_.forbidden_edge.empty() && spec_.forbidden_edge[e])
                return std::nullopt;
            if (partner_[u] == v) continue;  // duplicate listing
            if (partner_[u] != -1 || partner_[v] != -1) return std::nullopt;
            partner_[u] = v;
            partner_[v] = u;
            ++placed;
            if (spec_.budget >= 0 && !spec_.budget_edge.empty() &&
                spec_.budget_edge[e] && ++budget_used_ > spec_.budget)
                return std::nullopt;
        }
        matched_ = placed;
        if (matched_ > target_) return std::nullopt;
        return dfs(0);
    }

  private:
    std::optional<Matching> dfs(int a) {
        const int n_a = ps_.a_count();
        if (matched_ + (n_a - a) < target_) return std::nullopt;
        if (a == n_a) return finish();

        if (partner_[a] != -1) return advance(a);

        std::optional<Matching> hit;
        bool a_blocked = spec_.must_avoid[a] != 0 ||
                         (spec_.exact_cover && !spec_.must_cover[a]);
        if (!a_blocked && matched_ < target_) {
            for (int b : ps_.neighbors(a)) {
                if (partner_[b] != -1) continue;
                if (spec_.must_avoid[b]) continue;
                if (spec_.exact_cover && !spec_.must_cover[b]) continue;
                int e = ps_.edge_index(a, b);
                if (!spec_.forbidden_edge.empty() && spec_.forbidden_edge[e])
                    continue;
                bool counts = spec_.budget >= 0 && !spec_.budget_edge.empty() &&
                              spec_.budget_edge[e];
                if (counts && budget_used_ == spec_.budget) continue;
                partner_[a] = b;
                partner_[b] = a;
                ++matched_;
                if (counts) ++budget_used_;
                hit = advance(a);
                if (counts) --budget_used_;
                --matched_;
                partner_[a] = -1;
                partner_[b] = -1;
                if (hit) return hit;
            }
        }
        if (!spec_.must_cover[a]) {
            hit = advance(a);
            if (hit) return hit;
        }
        return std::nullopt;
    }

    // Checks the B-side last-chance prune before descending past a.
    std::optional<Matching> advance(int a) {
        for (int b : last_chance_[a])
            if (partner_[b] == -1) return std::nullopt;
        return dfs(a + 1);
    }

    std::optional<Matching> finish() {
        if (matched_ != target_) return std::nullopt;
        Matching m{partner_};
        if (!is_maximal(ps_, m)) return std::nullopt;
        if (!satisfies(ps_, m, spec_)) return std::nullopt;
        if (!is_popular(ps_, m).verdict) return std::nullopt;
        return m;
    }

    const PreferenceSystem& ps_;
    const detail::SearchSpec& spec_;
    int target_;
    std::vector<int> partner_;
    int matched_ = 0;
    int budget_used_ = 0;
    std::vector<std::vector<int>> last_chance_;
};

PmffeOutcome hard_outcome(std::optional<Matching> m, std::string tag) {
    PmffeOutcome out;
    out.status = PmffeStatus::HardFallbackUsed;
    out.matching = std::move(m);
    out.case_tag = std::move(tag);
    return out;
}

PmffeOutcome poly_found(Matching m, std::string tag) {
    PmffeOutcome out;
    out.status = PmffeStatus::Found;
    out.matching = std::move(m);
    out.case_tag = std::move(tag);
    return out;
}

PmffeOutcome poly_infeasible(std::string tag) {
    PmffeOutcome out;
    out.status = PmffeStatus::Infeasible;
    out.case_tag = std::move(tag);
    return out;
}

void require_fallback_allowed(const PreferenceSystem& ps, bool allow_exponential) {
    // Default guard: refuse blowing up on large instances. The explicit
    // flag forces past the threshold (callers such as the SAT decider know
    // their instances are structured and safe).
    constexpr int kGuardEdges = 40;
    if (!allow_exponential) {
        throw HardCaseError(
            "constraint shape is NP-hard in general; exhaustive search over "
            "popular matchings required (instance has " +
            std::to_string(ps.edge_count()) + " edges, guard threshold " +
            std::to_string(kGuardEdges) + "); enable the exponential fallback");
    }
}

}  // namespace

namespace detail {

std::optional<Matching> exhaustive_popular_search(const PreferenceSystem& ps,
                                                  const SearchSpec& spec) {
    // Coverage sandwich: every popular matching covers V(S) and only
    // vertices of V(D); sizes therefore range over [|S|, |D|].
    Matching stable = gale_shapley(ps, Side::A);
    Matching dominant = two_level_gale_shapley(ps);
    const int n = ps.vertex_count();

    SearchSpec tightened = spec;
    for (int v = 0; v < n; ++v) {
        if (stable.covers(v)) {
            if (tightened.must_avoid[v]) return std::nullopt;
            if (tightened.exact_cover && !tightened.must_cover[v])
                return std::nullopt;
            tightened.must_cover[v] = 1;
        }
        if (!dominant.covers(v)) {
            if (tightened.must_cover[v]) return std::nullopt;
            tightened.must_avoid[v] = 1;
        }
    }
    int lo = stable.size();
    int hi = dominant.size();
    if (tightened.exact_cover) {
        int in_a = 0, in_b = 0;
        for (int v = 0; v < n; ++v) {
            if (!tightened.must_cover[v]) continue;
            (ps.side_of(v) == Side::A ? in_a : in_b)++;
        }
        if (in_a != in_b) return std::nullopt;
        if (in_a < lo || in_a > hi) return std::nullopt;
        lo = hi = in_a;
    }
    for (int k = hi; k >= lo; --k) {
        TargetSizeSearch search(ps, tightened, k);
        if (auto m = search.run()) return m;
    }
    return std::nullopt;
}

}  // namespace detail

namespace {

detail::SearchSpec spec_from_constraints(const PreferenceSystem& ps,
                                         const ConstraintSet& cs) {
    detail::SearchSpec spec;
    const int n = ps.vertex_count();
    spec.must_cover.assign(n, 0);
    spec.must_avoid.assign(n, 0);
    for (int v : cs.forced_nodes) spec.must_cover[v] = 1;
    for (int v : cs.forbidden_nodes) spec.must_avoid[v] = 1;
    spec.forced_edges = cs.forced_edges;
    // Endpoints of forced edges are covered by definition.
    for (int e : cs.forced_edges) {
        auto [u, v] = ps.edges()[e];
        spec.must_cover[u] = 1;
        spec.must_cover[v] = 1;
    }
    if (!cs.forbidden_edges.empty()) {
        spec.forbidden_edge.assign(ps.edge_count(), 0);
        for (int e : cs.forbidden_edges) spec.forbidden_edge[e] = 1;
    }
    return spec;
}

}  // namespace

PmffeOutcome solve_pmffe(const PreferenceSystem& ps, const ConstraintSet& cs,
                         bool allow_exponential) {
    ConstraintSet c = cs;
    c.normalize();
    c.validate(ps);

    const bool only_forbidden_nodes = !c.forbidden_nodes.empty() &&
                                      c.forced_nodes.empty() &&
                                      c.forced_edges.empty() &&
                                      c.forbidden_edges.empty();
    const bool only_forced_nodes = !c.forced_nodes.empty() &&
                                   c.forbidden_nodes.empty() &&
                                   c.forced_edges.empty() &&
                                   c.forbidden_edges.empty();
    const bool single_forced_edge = c.forced_edges.size() == 1 &&
                                    c.forbidden_edges.empty() &&
                                    c.forced_nodes.empty() &&
                                    c.forbidden_nodes.empty();
    const bool single_forbidden_edge = c.forbidden_edges.size() == 1 &&
                                       c.forced_edges.empty() &&
                                       c.forced_nodes.empty() &&
                                       c.forbidden_nodes.empty();

    if (c.empty()) {
        return poly_found(gale_shapley(ps, Side::A), "unconstrained");
    }
    if (only_forbidden_nodes) {
        // All stable matchings cover the same vertex set, and it is the
        // coverage minimum over popular matchings: a vertex is avoidable by
        // some popular matching iff it lies outside that set.
        Matching stable = gale_shapley(ps, Side::A);
        for (int v : c.forbidden_nodes)
            if (stable.covers(v)) return poly_infeasible("forbidden_nodes");
        return poly_found(std::move(stable), "forbidden_nodes");
    }
    if (only_forced_nodes) {
        // Dominant coverage is the maximum: a vertex is coverable by some
        // popular matching iff it lies in V(D), and one matching covers all
        // of V(D) at once.
        Matching dominant = two_level_gale_shapley(ps);
        for (int v : c.forced_nodes)
            if (!dominant.covers(v)) return poly_infeasible("forced_nodes");
        return poly_found(std::move(dominant), "forced_nodes");
    }
    if (single_forced_edge) {
        auto [u, v] = ps.edges()[c.forced_edges[0]];
        EdgeClassification cls = classify_edge(ps, c.forced_edges[0]);
        if (cls.in_some_stable) {
            RotationPoset poset = enumerate_rotations(ps);
            auto m = stable_with(poset, ps, {{u, v}}, {});
            if (!m) throw std::logic_error("stable pair query disagrees with solver");
            return poly_found(std::move(*m), "forced_edge");
        }
        if (cls.in_some_dominant) {
            auto m = dominant_with(ps, {{u, v}}, {});
            if (!m)
                throw std::logic_error("dominant pair query disagrees with solver");
            return poly_found(std::move(*m), "forced_edge");
        }
        return poly_infeasible("forced_edge");
    }
    if (single_forbidden_edge) {
        auto [u, v] = ps.edges()[c.forbidden_edges[0]];
        EdgeClassification cls = classify_edge(ps, c.forbidden_edges[0]);
        if (cls.avoided_by_some_stable) {
            RotationPoset poset = enumerate_rotations(ps);
            auto m = stable_with(poset, ps, {}, {{u, v}});
            if (!m) throw std::logic_error("stable avoidance disagrees with solver");
            return poly_found(std::move(*m), "forbidden_edge");
        }
        if (cls.avoided_by_some_dominant) {
            auto m = dominant_with(ps, {}, {{u, v}});
            if (!m)
                throw std::logic_error("dominant avoidance disagrees with solver");
            return poly_found(std::move(*m), "forbidden_edge");
        }
        return poly_infeasible("forbidden_edge");
    }

    require_fallback_allowed(ps, allow_exponential);
    detail::SearchSpec spec = spec_from_constraints(ps, c);
    return hard_outcome(detail::exhaustive_popular_search(ps, spec), "exhaustive");
}

PmffeOutcome exclusive_popular_set(const PreferenceSystem& ps,
                                   const std::vector<int>& u,
                                   bool allow_exponential) {
    const int n = ps.vertex_count();
    std::vector<char> in_u(n, 0);
    for (int v : u) {
        if (v < 0 || v >= n)
            throw ValidationError("exclusive set: vertex id out of range");
        in_u[v] = 1;
    }
    Matching stable = gale_shapley(ps, Side::A);
    Matching dominant = two_level_gale_shapley(ps);
    bool equals_stable = true, equals_dominant = true;
    for (int v = 0; v < n; ++v) {
        if (stable.covers(v) && !in_u[v]) return poly_infeasible("coverage_bounds");
        if (in_u[v] && !dominant.covers(v))
            return poly_infeasible("coverage_bounds");
        if (static_cast<bool>(in_u[v]) != stable.covers(v)) equals_stable = false;
        if (static_cast<bool>(in_u[v]) != dominant.covers(v))
            equals_dominant = false;
    }
    if (equals_stable) return poly_found(std::move(stable), "stable_boundary");
    if (equals_dominant) return poly_found(std::move(dominant), "dominant_boundary");

    require_fallback_allowed(ps, allow_exponential);
    detail::SearchSpec spec;
    spec.must_cover.assign(in_u.begin(), in_u.end());
    spec.must_avoid.assign(n, 0);
    for (int v = 0; v < n; ++v) spec.must_avoid[v] = in_u[v] ? 0 : 1;
    spec.exact_cover = true;
    return hard_outcome(detail::exhaustive_popular_search(ps, spec), "exhaustive");
}

PmffeOutcome bounded_forbidden(const PreferenceSystem& ps,
                               const std::vector<int>& f, int q,
                               bool allow_exponential) {
    if (q < 0) throw ValidationError("bounded forbidden: q must be nonnegative");
    const int m = ps.edge_count();
    std::vector<int> edges = f;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges)
        if (e < 0 || e >= m)
            throw ValidationError("bounded forbidden: edge index out of range");

    if (q >= static_cast<int>(edges.size())) {
        // Constraint is vacuous; any popular matching qualifies.
        return poly_found(gale_shapley(ps, Side::A), "vacuous");
    }
    if (q == 0 && edges.size() == 1) {
        ConstraintSet cs;
        cs.forbidden_edges = edges;
        PmffeOutcome out = solve_pmffe(ps, cs, allow_exponential);
        out.case_tag = "impopular_edge";
        return out;
    }

    require_fallback_allowed(ps, allow_exponential);
    detail::SearchSpec spec;
    spec.must_cover.assign(ps.vertex_count(), 0);
    spec.must_avoid.assign(ps.vertex_count(), 0);
    spec.budget_edge.assign(m, 0);
    for (int e : edges) spec.budget_edge[e] = 1;
    spec.budget = q;
    return hard_outcome(detail::exhaustive_popular_search(ps, spec), "exhaustive");
}

}  // namespace popmatch
