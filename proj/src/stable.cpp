#include "popmatch/stable.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace popmatch {

Matching gale_shapley(const PreferenceSystem& ps, Side proposing) {
    Matching m = Matching::empty(ps);
    std::vector<size_t> next(ps.vertex_count(), 0);  // next list position to try
    std::deque<int> free;
    for (int v = 0; v < ps.vertex_count(); ++v)
        if (ps.side_of(v) == proposing) free.push_back(v);

    while (!free.empty()) {
        int p = free.front();
        free.pop_front();
        while (next[p] < ps.neighbors(p).size()) {
            int q = ps.neighbors(p)[next[p]++];
            int cur = m.partner[q];
            if (cur < 0) {
                m.partner[p] = q;
                m.partner[q] = p;
                break;
            }
            if (ps.rank(q, p) < ps.rank(q, cur)) {
                m.partner[cur] = -1;
                m.partner[p] = q;
                m.partner[q] = p;
                free.push_back(cur);
                break;
            }
        }
    }
    return m;
}

std::vector<char> stable_node_set(const PreferenceSystem& ps) {
    Matching m = gale_shapley(ps, Side::A);
    std::vector<char> covered(ps.vertex_count(), 0);
    for (int v = 0; v < ps.vertex_count(); ++v) covered[v] = m.covers(v);
    return covered;
}

// --- Rotation poset --------------------------------------------------------

namespace {

// s(a) under the current matching: the first b after m(a) on a's list that
// would accept a, i.e. is unmatched or prefers a to its current partner.
// An unmatched b ends the chain: she is unmatched in every stable matching
// (the covered set is invariant), so pairing a below her on his list would
// leave (a, b) blocking -- no rotation can ever reach past her.
int successor(const PreferenceSystem& ps, const Matching& m, int a) {
    int cur = m.partner[a];
    if (cur < 0) return -1;
    const auto& list = ps.neighbors(a);
    for (size_t i = ps.rank(a, cur); i < list.size(); ++i) {  // rank is 1-based
        int b = list[i];
        int pb = m.partner[b];
        if (pb < 0) return -1;
        if (ps.rank(b, a) < ps.rank(b, pb)) return b;
    }
    return -1;
}

}  // namespace

Matching RotationPoset::apply(const std::vector<char>& in_set) const {
    if (!is_closed(in_set))
        throw ValidationError("rotation set is not closed under its predecessors");
    Matching m = a_optimal;
    for (size_t r = 0; r < rotations.size(); ++r) {
        if (!in_set[r]) continue;
        const Rotation& rot = rotations[r];
        for (auto [a, b] : rot.removed) {
            m.partner[a] = -1;
            m.partner[b] = -1;
        }
        for (auto [a, b] : rot.added) {
            m.partner[a] = b;
            m.partner[b] = a;
        }
    }
    return m;
}

bool RotationPoset::is_closed(const std::vector<char>& in_set) const {
    if (in_set.size() != rotations.size()) return false;
    for (size_t r = 0; r < rotations.size(); ++r)
        if (in_set[r])
            for (int p : direct_preds[r])
                if (!in_set[p]) return false;
    return true;
}

RotationPoset enumerate_rotations(const PreferenceSystem& ps) {
    RotationPoset poset;
    poset.a_optimal = gale_shapley(ps, Side::A);
    poset.b_optimal = gale_shapley(ps, Side::B);
    poset.added_by.assign(ps.edge_count(), -1);
    poset.removed_by.assign(ps.edge_count(), -1);

    Matching m = poset.a_optimal;

    // Exposure-and-elimination loop.  Each iteration finds the cycle of the
    // successor graph reachable from the smallest unexplored A-vertex and
    // eliminates it; the loop ends exactly at the B-optimal matching.
    while (true) {
        std::vector<int> next(ps.a_count(), -1);
        for (int a = 0; a < ps.a_count(); ++a) {
            int s = successor(ps, m, a);
            if (s >= 0) next[a] = m.partner[s];
        }

        // Find a cycle deterministically: walk from each a in id order.
        std::vector<int> state(ps.a_count(), 0);  // 0 new, 1 on walk, 2 done
        std::vector<std::pair<int, int>> cycle;
        for (int a0 = 0; a0 < ps.a_count() && cycle.empty(); ++a0) {
            if (state[a0] != 0 || next[a0] < 0) continue;
            std::vector<int> walk;
            int a = a0;
            while (a >= 0 && state[a] == 0) {
                state[a] = 1;
                walk.push_back(a);
                a = next[a];
            }
            if (a >= 0 && state[a] == 1) {
                // The walk closed on itself: extract the cycle portion.
                auto it = std::find(walk.begin(), walk.end(), a);
                std::vector<int> cyc(it, walk.end());
                // Canonical start: smallest a id.
                auto mn = std::min_element(cyc.begin(), cyc.end());
                std::rotate(cyc.begin(), mn, cyc.end());
                for (int ai : cyc) cycle.emplace_back(ai, m.partner[ai]);
            }
            for (int w : walk) state[w] = 2;
        }
        if (cycle.empty()) break;

        Rotation rot;
        rot.pairs = cycle;
        int k = static_cast<int>(cycle.size());
        for (int i = 0; i < k; ++i) {
            auto [a, b] = cycle[i];
            int b_next = cycle[(i + 1) % k].second;
            rot.removed.emplace_back(a, b);
            rot.added.emplace_back(a, b_next);
        }
        int r = static_cast<int>(poset.rotations.size());
        for (auto [a, b] : rot.removed) {
            int e = ps.edge_index(a, b);
            if (poset.removed_by[e] >= 0)
                throw std::logic_error("edge removed by two rotations");
            poset.removed_by[e] = r;
            m.partner[a] = -1;
            m.partner[b] = -1;
        }
        for (auto [a, b] : rot.added) {
            int e = ps.edge_index(a, b);
            if (poset.added_by[e] >= 0) throw std::logic_error("edge added by two rotations");
            poset.added_by[e] = r;
            m.partner[a] = b;
            m.partner[b] = a;
        }
        poset.rotations.push_back(std::move(rot));
    }

    if (!(m == poset.b_optimal))
        throw std::logic_error("rotation elimination did not reach the B-optimal matching");

    // Precedence rules.
    //
    // Rule 1: if rho removes an edge that is not in the A-optimal matching,
    // the rotation that added it must come first.
    //
    // Rule 2: for a pair (a, b_i) -> b_{i+1} of rho and any stably-matched b
    // strictly between b_i and b_{i+1} on a's list whose A-optimal partner is
    // worse than a: before rho can be exposed, b's partner must already be
    // better than a (else s(a) would stop at b), so the unique rotation
    // moving b's partner from worse-than-a to better-than-a precedes rho.
    // Partner chains improve monotonically on the B side, so the crossing
    // rotation exists and is unique.
    const int nrot = static_cast<int>(poset.rotations.size());
    poset.direct_preds.assign(nrot, {});

    // b -> its partner-change history [(rotation, old partner, new partner)].
    std::vector<std::vector<std::array<int, 3>>> chain(ps.vertex_count());
    for (int r = 0; r < nrot; ++r) {
        const Rotation& rot = poset.rotations[r];
        int k = static_cast<int>(rot.pairs.size());
        for (int i = 0; i < k; ++i) {
            int b = rot.pairs[i].second;
            int oldp = rot.pairs[i].first;
            int newp = rot.pairs[(i - 1 + k) % k].first;  // added edge (a_{i-1}, b_i)
            chain[b].push_back({r, oldp, newp});
        }
    }

    for (int r = 0; r < nrot; ++r) {
        auto& preds = poset.direct_preds[r];
        const Rotation& rot = poset.rotations[r];
        for (auto [a, b] : rot.removed) {
            int adder = poset.added_by[ps.edge_index(a, b)];
            if (adder >= 0 && adder != r) preds.push_back(adder);
        }
        int k = static_cast<int>(rot.pairs.size());
        for (int i = 0; i < k; ++i) {
            int a = rot.pairs[i].first;
            int b_i = rot.pairs[i].second;
            int b_next = rot.pairs[(i + 1) % k].second;
            const auto& list = ps.neighbors(a);
            for (int pos = ps.rank(a, b_i); pos + 1 < ps.rank(a, b_next); ++pos) {
                int b = list[pos];  // strictly between b_i and b_next
                int pb = poset.a_optimal.partner[b];
                if (pb < 0) continue;                       // never stably matched
                if (ps.rank(b, pb) < ps.rank(b, a)) continue;  // already better than a
                int crossing = -1;
                for (const auto& [cr, oldp, newp] : chain[b]) {
                    if (ps.rank(b, oldp) > ps.rank(b, a) && ps.rank(b, newp) < ps.rank(b, a)) {
                        crossing = cr;
                        break;
                    }
                }
                if (crossing < 0)
                    throw std::logic_error("missing crossing rotation for precedence rule 2");
                if (crossing != r) preds.push_back(crossing);
            }
        }
        std::sort(preds.begin(), preds.end());
        preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
        for (int p : preds)
            if (p >= r)
                throw std::logic_error("elimination order is not a linear extension");
    }
    return poset;
}

std::vector<Matching> all_stable_matchings(const RotationPoset& poset, long long cap) {
    std::vector<Matching> out;
    const int nrot = static_cast<int>(poset.rotations.size());
    std::vector<char> chosen(nrot, 0);

    // DFS over rotations in elimination order; predecessors have smaller
    // indices, so the closure check is incremental.
    auto rec = [&](auto&& self, int idx) -> void {
        if (idx == nrot) {
            if (static_cast<long long>(out.size()) >= cap)
                throw HardCaseError("stable matching enumeration exceeded cap of " +
                                    std::to_string(cap));
            out.push_back(poset.apply(chosen));
            return;
        }
        self(self, idx + 1);  // exclude rotation idx
        for (int p : poset.direct_preds[idx])
            if (!chosen[p]) return;
        chosen[idx] = 1;
        self(self, idx + 1);
        chosen[idx] = 0;
    };
    rec(rec, 0);
    return out;
}

std::vector<Matching> all_stable_matchings(const PreferenceSystem& ps, long long cap) {
    return all_stable_matchings(enumerate_rotations(ps), cap);
}

bool is_stable_pair(const RotationPoset& poset, const PreferenceSystem& ps, int u, int v) {
    int e = ps.edge_index(u, v);
    if (e < 0) throw ValidationError("not an edge");
    auto [a, b] = ps.edges()[e];
    return poset.a_optimal.partner[a] == b || poset.added_by[e] >= 0;
}

bool is_stable_pair(const PreferenceSystem& ps, int u, int v) {
    return is_stable_pair(enumerate_rotations(ps), ps, u, v);
}

bool avoided_by_some_stable(const RotationPoset& poset, const PreferenceSystem& ps, int u,
                            int v) {
    int e = ps.edge_index(u, v);
    if (e < 0) throw ValidationError("not an edge");
    auto [a, b] = ps.edges()[e];
    bool in_every = poset.a_optimal.partner[a] == b && poset.removed_by[e] < 0;
    return !in_every;
}

bool avoided_by_some_stable(const PreferenceSystem& ps, int u, int v) {
    return avoided_by_some_stable(enumerate_rotations(ps), ps, u, v);
}

std::optional<Matching> stable_with(const RotationPoset& poset, const PreferenceSystem& ps,
                                    const std::vector<std::pair<int, int>>& forced,
                                    const std::vector<std::pair<int, int>>& forbidden) {
    const int nrot = static_cast<int>(poset.rotations.size());
    std::vector<char> must_out(nrot, 0);
    std::vector<std::vector<int>> implications(nrot);
    std::vector<int> seeds;

    for (auto [u, v] : forced) {
        int e = ps.edge_index(u, v);
        if (e < 0) throw ValidationError("forced pair is not an edge");
        auto [a, b] = ps.edges()[e];
        bool in_a_opt = poset.a_optimal.partner[a] == b;
        if (!in_a_opt && poset.added_by[e] < 0) return std::nullopt;  // not a stable pair
        if (!in_a_opt) seeds.push_back(poset.added_by[e]);
        if (poset.removed_by[e] >= 0) must_out[poset.removed_by[e]] = 1;
    }
    for (auto [u, v] : forbidden) {
        int e = ps.edge_index(u, v);
        if (e < 0) throw ValidationError("forbidden pair is not an edge");
        auto [a, b] = ps.edges()[e];
        bool in_a_opt = poset.a_optimal.partner[a] == b;
        int adder = poset.added_by[e], remover = poset.removed_by[e];
        if (in_a_opt) {
            if (remover < 0) return std::nullopt;  // edge lies in every stable matching
            seeds.push_back(remover);
        } else if (adder >= 0) {
            if (remover >= 0)
                implications[adder].push_back(remover);  // taking adder forces remover
            else
                must_out[adder] = 1;  // once added the edge would stay forever
        }
        // else: the edge is in no stable matching; nothing to do.
    }

    // Least fixpoint over predecessor closure plus the implications.  Hitting
    // a must_out atom proves infeasibility (every solution contains the
    // fixpoint); otherwise the fixpoint itself is a closed witness set.
    std::vector<char> in_set(nrot, 0);
    std::queue<int> work;
    for (int s : seeds) work.push(s);
    while (!work.empty()) {
        int r = work.front();
        work.pop();
        if (in_set[r]) continue;
        if (must_out[r]) return std::nullopt;
        in_set[r] = 1;
        for (int p : poset.direct_preds[r]) work.push(p);
        for (int q : implications[r]) work.push(q);
    }

    Matching m = poset.apply(in_set);
    // Defensive verification; failures here would mean a bug, not infeasibility.
    for (auto [u, v] : forced)
        if (m.partner[u] != v) throw std::logic_error("constrained stable solver broke a force");
    for (auto [u, v] : forbidden)
        if (m.partner[u] == v)
            throw std::logic_error("constrained stable solver kept a forbidden edge");
    return m;
}

// --- Max-weight stable matching via closure/min-cut -------------------------

namespace {

// Minimal Dinic max-flow on exact big-integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}

    void add_edge(int from, int to, BigInt cap) {
        edges_.push_back({to, head_[from], std::move(cap)});
        head_[from] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({from, head_[to], 0});
        head_[to] = static_cast<int>(edges_.size()) - 1;
    }

    BigInt run(int s, int t) {
        BigInt flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (true) {
                BigInt pushed = dfs(s, t, BigInt(-1));
                if (pushed == 0) break;
                flow += pushed;
            }
        }
        return flow;
    }

    // After run(): vertices reachable from s in the residual graph (the
    // canonical source side of a minimum cut).
    std::vector<char> min_cut_source_side(int s) const {
        std::vector<char> vis(head_.size(), 0);
        std::queue<int> q;
        vis[s] = 1;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e = head_[v]; e >= 0; e = edges_[e].next)
                if (edges_[e].cap > 0 && !vis[edges_[e].to]) {
                    vis[edges_[e].to] = 1;
                    q.push(edges_[e].to);
                }
        }
        return vis;
    }

private:
    struct Edge {
        int to, next;
        BigInt cap;
    };

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e = head_[v]; e >= 0; e = edges_[e].next)
                if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[v] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] >= 0;
    }

    // limit < 0 means unbounded.
    BigInt dfs(int v, int t, BigInt limit) {
        if (v == t) return limit < 0 ? BigInt(-1) : limit;
        for (int& e = it_[v]; e >= 0; e = edges_[e].next) {
            Edge& ed = edges_[e];
            if (ed.cap <= 0 || level_[ed.to] != level_[v] + 1) continue;
            BigInt sub = limit < 0 ? ed.cap : std::min(limit, ed.cap);
            BigInt pushed = dfs(ed.to, t, sub);
            if (pushed < 0) pushed = sub;  // unbounded child: take sub
            if (pushed > 0) {
                ed.cap -= pushed;
                edges_[e ^ 1].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_, level_, it_;
};

}  // namespace

std::pair<Matching, WeightValue> max_weight_stable(const PreferenceSystem& ps,
                                                   const WeightMap& w) {
    RotationPoset poset = enumerate_rotations(ps);
    const int nrot = static_cast<int>(poset.rotations.size());

    std::vector<BigInt> gain(nrot, 0);
    BigInt inf = 1;
    for (int r = 0; r < nrot; ++r) {
        for (auto [a, b] : poset.rotations[r].added) gain[r] += w.scaled(ps.edge_index(a, b));
        for (auto [a, b] : poset.rotations[r].removed) gain[r] -= w.scaled(ps.edge_index(a, b));
        inf += gain[r] < 0 ? -gain[r] : gain[r];
    }

    // Maximum-weight closed set (closure problem): source->r with capacity
    // gain for positive gains, r->sink with -gain for negative ones, and an
    // "infinite" arc r->pred for every precedence.  The source side of a
    // minimum cut is the best closed set.
    const int src = nrot, snk = nrot + 1;
    MaxFlow mf(nrot + 2);
    BigInt positive_total = 0;
    for (int r = 0; r < nrot; ++r) {
        if (gain[r] > 0) {
            mf.add_edge(src, r, gain[r]);
            positive_total += gain[r];
        } else if (gain[r] < 0) {
            mf.add_edge(r, snk, -gain[r]);
        }
        for (int p : poset.direct_preds[r]) mf.add_edge(r, p, inf);
    }
    mf.run(src, snk);
    std::vector<char> side = mf.min_cut_source_side(src);

    std::vector<char> in_set(nrot, 0);
    BigInt closure_gain = 0;
    for (int r = 0; r < nrot; ++r)
        if (side[r]) {
            in_set[r] = 1;
            closure_gain += gain[r];
        }

    Matching best = poset.apply(in_set);  // apply() re-checks closedness
    WeightValue total = w.matching_weight(ps, best);
    BigInt expected = w.matching_weight(ps, poset.a_optimal).scaled + closure_gain;
    if (total.scaled != expected)
        throw std::logic_error("closure value mismatch in max_weight_stable");
    return {std::move(best), total};
}

}  // namespace popmatch
