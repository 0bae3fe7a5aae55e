#include "popmatch/popularity.hpp"

#include <algorithm>
#include <queue>

namespace popmatch {

LabeledGraph::LabeledGraph(const PreferenceSystem& ps, Matching m)
    : ps_(&ps), m_(std::move(m)) {
    if (static_cast<int>(m_.partner.size()) != ps.vertex_count())
        throw ValidationError("matching does not belong to this instance");
    for (int v = 0; v < ps.vertex_count(); ++v) {
        int p = m_.partner[v];
        if (p < 0) continue;
        if (p >= ps.vertex_count() || m_.partner[p] != v || !ps.adjacent(v, p))
            throw ValidationError("inconsistent matching");
    }

    const int ne = ps.edge_count();
    matched_.assign(ne, 0);
    reduced_.assign(ne, 0);
    pp_.assign(ne, 0);
    vote_a_.assign(ne, Vote::Minus);
    vote_b_.assign(ne, Vote::Minus);
    radj_.assign(ps.vertex_count(), {});

    auto vote_of = [&](int u, int v) {
        int p = m_.partner[u];
        if (p < 0) return Vote::Plus;  // unmatched endpoints always prefer the edge
        return ps.rank(u, v) < ps.rank(u, p) ? Vote::Plus : Vote::Minus;
    };

    for (int e = 0; e < ne; ++e) {
        auto [a, b] = ps.edges()[e];
        if (m_.partner[a] == b) {
            matched_[e] = reduced_[e] = 1;
            continue;
        }
        vote_a_[e] = vote_of(a, b);
        vote_b_[e] = vote_of(b, a);
        bool pa = vote_a_[e] == Vote::Plus, pb = vote_b_[e] == Vote::Plus;
        if (pa || pb) {
            reduced_[e] = 1;  // (-,-) edges are dropped from G_M
            radj_[a].push_back(b);
            radj_[b].push_back(a);
        }
        if (pa && pb) {
            pp_[e] = 1;
            pp_list_.push_back(e);
        }
    }
}

Vote LabeledGraph::vote(int e, int endpoint) const {
    if (matched_[e]) throw PreconditionError("matched edges carry no label");
    auto [a, b] = ps_->edges()[e];
    if (endpoint == a) return vote_a_[e];
    if (endpoint == b) return vote_b_[e];
    throw ValidationError("vertex is not an endpoint of this edge");
}

std::set<std::pair<int, int>> alternating_reachability(const LabeledGraph& lg,
                                                       const std::vector<int>& sources) {
    const Matching& m = lg.matching();
    const int n = lg.system().vertex_count();
    std::set<std::pair<int, int>> out;
    std::vector<char> ready_seen(n, 0);
    std::queue<int> q;
    for (int s : sources)
        if (s >= 0 && s < n && !ready_seen[s]) {
            ready_seen[s] = 1;
            q.push(s);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int y : lg.reduced_neighbors(v)) {
            out.insert({y, 1});
            int py = m.partner[y];
            if (py < 0) continue;
            out.insert({py, 0});
            if (!ready_seen[py]) {
                ready_seen[py] = 1;
                q.push(py);
            }
        }
    }
    return out;
}

namespace {

// Vertices reachable as "ready" states (next edge must be non-matching) from
// the given ready sources; sources themselves included.  Walk reachability:
// an over-approximation of simple-path reachability that is exact in the
// negative direction (no walk => no simple alternating path), which is what
// makes the screens below sound for "popular" verdicts.
std::vector<char> ready_reach(const LabeledGraph& lg, const std::vector<int>& sources) {
    const Matching& m = lg.matching();
    std::vector<char> ready(lg.system().vertex_count(), 0);
    std::queue<int> q;
    for (int s : sources)
        if (!ready[s]) {
            ready[s] = 1;
            q.push(s);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int y : lg.reduced_neighbors(v)) {
            int py = m.partner[y];
            if (py >= 0 && !ready[py]) {
                ready[py] = 1;
                q.push(py);
            }
        }
    }
    return ready;
}

// Exhaustive backtracking over simple M-alternating paths in G_M.  Only run
// on candidates the walk screens have flagged; depth is bounded by |V|.
class ViolationSearch {
public:
    explicit ViolationSearch(const LabeledGraph& lg)
        : lg_(lg), ps_(lg.system()), m_(lg.matching()), on_path_(ps_.vertex_count(), 0) {}

    // Condition (iii): simple alternating path from an exposed vertex whose
    // final edge is (+,+).  (A path with a later (+,+) edge has this prefix.)
    std::optional<PopularityWitness> exposed_path(const std::vector<int>& exposed) {
        for (int r : exposed) {
            reset();
            PopularityWitness w;
            if (dfs_exposed(r, w)) return w;
        }
        return std::nullopt;
    }

    // Condition (i): simple alternating cycle through (+,+) edge (u, w).
    std::optional<PopularityWitness> plus_plus_cycle(int u, int w) {
        reset();
        on_path_[w] = 1;
        path_.push_back(w);
        if (!dfs_reach(m_.partner[w], u, -1)) return std::nullopt;
        PopularityWitness out;
        out.kind = ViolationKind::AlternatingCycle;
        out.walk = path_;
        out.walk.push_back(w);  // close the cycle
        out.plus_plus = {{u, w}};
        return out;
    }

    // Condition (ii): simple alternating path u1 -w1- ... -u2- w2 whose first
    // and last edges are the two given (+,+) edges.
    std::optional<PopularityWitness> double_plus_path(int u1, int w1, int u2, int w2) {
        reset();
        on_path_[u1] = on_path_[w1] = 1;
        path_ = {u1, w1};
        if (!dfs_reach(m_.partner[w1], u2, w2)) return std::nullopt;
        PopularityWitness out;
        out.kind = ViolationKind::TwoPlusPlusPath;
        out.walk = path_;
        out.walk.push_back(w2);
        out.plus_plus = {{u1, w1}, {u2, w2}};
        return out;
    }

private:
    void reset() {
        std::fill(on_path_.begin(), on_path_.end(), 0);
        path_.clear();
    }

    bool dfs_exposed(int v, PopularityWitness& out) {
        on_path_[v] = 1;
        path_.push_back(v);
        for (int y : lg_.reduced_neighbors(v)) {
            if (on_path_[y]) continue;
            if (lg_.plus_plus(ps_.edge_index(v, y))) {
                out.kind = ViolationKind::ExposedPath;
                out.walk = path_;
                out.walk.push_back(y);
                out.plus_plus = {{v, y}};
                return true;
            }
            int py = m_.partner[y];
            if (py < 0 || on_path_[py]) continue;
            on_path_[y] = 1;
            path_.push_back(y);
            if (dfs_exposed(py, out)) return true;
            path_.pop_back();
            on_path_[y] = 0;
        }
        path_.pop_back();
        on_path_[v] = 0;
        return false;
    }

    // v was just entered via its matched edge.  Succeeds upon entering
    // `target` the same way, provided `extra` (if >= 0) is not on the path;
    // on success the path buffer ends at target and is left intact.
    bool dfs_reach(int v, int target, int extra) {
        on_path_[v] = 1;
        path_.push_back(v);
        if (v == target) {
            if (extra < 0 || !on_path_[extra]) return true;
            path_.pop_back();
            on_path_[v] = 0;
            return false;
        }
        for (int y : lg_.reduced_neighbors(v)) {
            if (on_path_[y]) continue;
            int py = m_.partner[y];
            if (py < 0 || on_path_[py]) continue;
            on_path_[y] = 1;
            path_.push_back(y);
            if (dfs_reach(py, target, extra)) return true;
            path_.pop_back();
            on_path_[y] = 0;
        }
        path_.pop_back();
        on_path_[v] = 0;
        return false;
    }

    const LabeledGraph& lg_;
    const PreferenceSystem& ps_;
    const Matching& m_;
    std::vector<char> on_path_;
    std::vector<int> path_;
};

}  // namespace

PopularityCertificate is_popular(const PreferenceSystem& ps, const Matching& m) {
    LabeledGraph lg(ps, m);
    PopularityCertificate cert;

    // No (+,+) edge: none of the three conditions can fire.
    if (lg.plus_plus_edges().empty()) {
        cert.verdict = true;
        return cert;
    }

    ViolationSearch search(lg);

    // (iii) exposed-path violations.
    std::vector<int> exposed;
    for (int v = 0; v < ps.vertex_count(); ++v)
        if (!m.covers(v)) exposed.push_back(v);
    if (!exposed.empty()) {
        auto ready = ready_reach(lg, exposed);
        bool candidate = false;
        for (int e : lg.plus_plus_edges()) {
            auto [a, b] = ps.edges()[e];
            if (ready[a] || ready[b]) {
                candidate = true;
                break;
            }
        }
        if (candidate)
            if (auto w = search.exposed_path(exposed)) {
                cert.witness = std::move(w);
                return cert;
            }
    }

    // (i) alternating cycles through a (+,+) edge.  One orientation per edge
    // suffices: a cycle through uw yields walks in both directions.
    for (int e : lg.plus_plus_edges()) {
        auto [u, w] = ps.edges()[e];
        if (!m.covers(u) || !m.covers(w)) continue;  // cycle needs both matched
        auto ready = ready_reach(lg, {m.partner[w]});
        if (!ready[u]) continue;
        if (auto witness = search.plus_plus_cycle(u, w)) {
            cert.witness = std::move(witness);
            return cert;
        }
    }

    // (ii) paths whose first and last edges are distinct (+,+) edges.
    const auto& pps = lg.plus_plus_edges();
    for (size_t i = 0; i < pps.size(); ++i) {
        auto [a1, b1] = ps.edges()[pps[i]];
        for (size_t j = i + 1; j < pps.size(); ++j) {
            auto [a2, b2] = ps.edges()[pps[j]];
            if (a1 == a2 || b1 == b2) continue;  // shared endpoint: alternation impossible
            for (auto [u1, w1] : {std::pair{a1, b1}, std::pair{b1, a1}}) {
                if (!m.covers(w1)) continue;
                auto ready = ready_reach(lg, {m.partner[w1]});
                for (auto [u2, w2] : {std::pair{a2, b2}, std::pair{b2, a2}}) {
                    if (!m.covers(u2)) continue;
                    if (!ready[u2]) continue;
                    if (auto witness = search.double_plus_path(u1, w1, u2, w2)) {
                        cert.witness = std::move(witness);
                        return cert;
                    }
                }
            }
        }
    }

    cert.verdict = true;
    return cert;
}

namespace {

// Kuhn-style augmenting search in G_M from one exposed A-vertex, against the
// fixed matching m (no augmentation is applied).  On success `rev` holds the
// augmenting path's vertices in reverse.
bool kuhn(const LabeledGraph& lg, const Matching& m, int a, std::vector<char>& visited,
          std::vector<int>& rev) {
    for (int b : lg.reduced_neighbors(a)) {
        if (visited[b]) continue;
        visited[b] = 1;
        int pb = m.partner[b];
        if (pb < 0 || kuhn(lg, m, pb, visited, rev)) {
            rev.push_back(b);
            rev.push_back(a);
            return true;
        }
    }
    return false;
}

}  // namespace

DominanceCertificate is_dominant(const PreferenceSystem& ps, const Matching& m) {
    if (!is_popular(ps, m).verdict)
        throw PreconditionError("matching is not popular; the dominance test requires a "
                                "popular matching");
    LabeledGraph lg(ps, m);
    DominanceCertificate cert;
    // An augmenting path has one end on each side, so searching from the
    // exposed A-vertices is exhaustive.
    for (int a = 0; a < ps.a_count(); ++a) {
        if (m.covers(a)) continue;
        std::vector<char> visited(ps.vertex_count(), 0);
        std::vector<int> rev;
        if (kuhn(lg, m, a, visited, rev)) {
            std::reverse(rev.begin(), rev.end());
            cert.verdict = false;
            cert.augmenting_path = std::move(rev);
            return cert;
        }
    }
    cert.verdict = true;
    return cert;
}

bool witness_is_valid(const PreferenceSystem& ps, const Matching& m,
                      const PopularityWitness& w) {
    LabeledGraph lg(ps, m);
    const auto& walk = w.walk;
    if (walk.size() < 2) return false;

    bool cycle = w.kind == ViolationKind::AlternatingCycle;
    if (cycle && (walk.front() != walk.back() || walk.size() < 5 || walk.size() % 2 == 0))
        return false;  // closed, >= 4 edges, even edge count

    // Simplicity (cycles: ignore the repeated closing vertex).
    std::vector<char> seen(ps.vertex_count(), 0);
    size_t distinct = walk.size() - (cycle ? 1 : 0);
    for (size_t i = 0; i < distinct; ++i) {
        if (seen[walk[i]]) return false;
        seen[walk[i]] = 1;
    }

    // Edges exist, lie in G_M, and alternate.
    std::vector<char> edge_matched(walk.size() - 1, 0);
    for (size_t i = 0; i + 1 < walk.size(); ++i) {
        int e = ps.edge_index(walk[i], walk[i + 1]);
        if (e < 0 || !lg.in_reduced(e)) return false;
        edge_matched[i] = lg.matched_edge(e);
    }
    for (size_t i = 0; i + 1 < edge_matched.size(); ++i)
        if (edge_matched[i] == edge_matched[i + 1]) return false;
    if (cycle && edge_matched.front() == edge_matched.back()) return false;

    // Claimed (+,+) edges are on the walk and labelled (+,+).
    size_t expected = w.kind == ViolationKind::TwoPlusPlusPath ? 2 : 1;
    if (w.plus_plus.size() != expected) return false;
    for (auto [u, v] : w.plus_plus) {
        int e = ps.edge_index(u, v);
        if (e < 0 || lg.matched_edge(e) || !lg.plus_plus(e)) return false;
        bool on_walk = false;
        for (size_t i = 0; i + 1 < walk.size(); ++i)
            if ((walk[i] == u && walk[i + 1] == v) || (walk[i] == v && walk[i + 1] == u))
                on_walk = true;
        if (!on_walk) return false;
    }

    if (w.kind == ViolationKind::ExposedPath && m.covers(walk.front())) return false;
    if (w.kind == ViolationKind::TwoPlusPlusPath) {
        if (w.plus_plus[0] == w.plus_plus[1]) return false;
        auto [u1, v1] = w.plus_plus[0];
        auto [u2, v2] = w.plus_plus[1];
        if (ps.edge_index(u1, v1) == ps.edge_index(u2, v2)) return false;
    }
    return true;
}

}  // namespace popmatch
