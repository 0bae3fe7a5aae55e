#include "popmatch/dominant.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

namespace popmatch {

namespace {

// Suffixes for derived names; lengthened until no derived name collides with
// an original one (originals are pairwise distinct already).
struct NameScheme {
    std::string sep;

    std::string level0(const std::string& base) const { return base + sep + "0"; }
    std::string level1(const std::string& base) const { return base + sep + "1"; }
    std::string dummy(const std::string& base) const { return base + sep + "d"; }
};

NameScheme pick_scheme(const PreferenceSystem& ps) {
    std::set<std::string> taken;
    for (int v = 0; v < ps.vertex_count(); ++v) taken.insert(ps.name(v));
    NameScheme s{"@"};
    while (true) {
        bool clash = false;
        for (int v = 0; v < ps.vertex_count() && !clash; ++v) {
            const std::string& n = ps.name(v);
            clash = taken.count(s.level0(n)) || taken.count(s.level1(n)) ||
                    taken.count(s.dummy(n));
        }
        if (!clash) return s;
        s.sep += "@";
    }
}

}  // namespace

LevelledInstance::LevelledInstance(const PreferenceSystem& ps)
    : n_a_(ps.a_count()), n_b_(ps.b_count()) {
    NameScheme scheme = pick_scheme(ps);

    // A' = a1@0, a1@1, a2@0, ... ; B' = original B order, then dummies d(a).
    std::vector<std::string> a_names, b_names;
    for (int a = 0; a < n_a_; ++a) {
        a_names.push_back(scheme.level0(ps.name(a)));
        a_names.push_back(scheme.level1(ps.name(a)));
    }
    for (int b = 0; b < n_b_; ++b) b_names.push_back(ps.name(n_a_ + b));
    for (int a = 0; a < n_a_; ++a) b_names.push_back(scheme.dummy(ps.name(a)));

    const int na2 = 2 * n_a_;
    auto bmap = [&](int b) { return na2 + (b - n_a_); };  // original B id -> G' id
    auto dmap = [&](int a) { return na2 + n_b_ + a; };

    std::vector<std::vector<int>> prefs(na2 + n_b_ + n_a_);
    for (int a = 0; a < n_a_; ++a) {
        auto& l0 = prefs[copy(a, 0)];
        auto& l1 = prefs[copy(a, 1)];
        l1.push_back(dmap(a));
        for (int b : ps.neighbors(a)) {
            l0.push_back(bmap(b));
            l1.push_back(bmap(b));
        }
        l0.push_back(dmap(a));
        prefs[dmap(a)] = {copy(a, 0), copy(a, 1)};
    }
    for (int b = n_a_; b < ps.vertex_count(); ++b) {
        auto& lb = prefs[bmap(b)];
        for (int a : ps.neighbors(b)) lb.push_back(copy(a, 1));
        for (int a : ps.neighbors(b)) lb.push_back(copy(a, 0));
    }

    gprime_.emplace(std::move(a_names), std::move(b_names), std::move(prefs));

    origin_.assign(gprime_->vertex_count(), -1);
    kind_.assign(gprime_->vertex_count(), 3);
    for (int a = 0; a < n_a_; ++a) {
        origin_[copy(a, 0)] = a;
        kind_[copy(a, 0)] = 0;
        origin_[copy(a, 1)] = a;
        kind_[copy(a, 1)] = 1;
        origin_[dmap(a)] = a;
        kind_[dmap(a)] = 3;
    }
    for (int b = n_a_; b < ps.vertex_count(); ++b) {
        origin_[bmap(b)] = b;
        kind_[bmap(b)] = 2;
    }
}

int LevelledInstance::dummy(int a) const { return 2 * n_a_ + n_b_ + a; }
int LevelledInstance::real_b(int b) const { return 2 * n_a_ + (b - n_a_); }

Matching LevelledInstance::project(const PreferenceSystem& orig, const Matching& mprime) const {
    Matching m = Matching::empty(orig);
    for (int b = orig.a_count(); b < orig.vertex_count(); ++b) {
        int pb = mprime.partner[real_b(b)];
        if (pb < 0) continue;
        int a = origin_[pb];
        if (kind_[pb] != 0 && kind_[pb] != 1)
            throw std::logic_error("projection found a real B-vertex matched to a non-copy");
        if (m.partner[a] >= 0)
            throw std::logic_error("projection would match an A-vertex twice");
        m.partner[a] = b;
        m.partner[b] = a;
    }
    return m;
}

WeightMap LevelledInstance::lift(const PreferenceSystem& orig, const WeightMap& w) const {
    std::vector<BigInt> scaled(gprime_->edge_count(), 0);
    for (int e = 0; e < gprime_->edge_count(); ++e) {
        auto [ap, bp] = gprime_->edges()[e];
        if (kind_[bp] == 3) continue;  // dummy edges weigh 0
        int a = origin_[ap], b = origin_[bp];
        scaled[e] = w.scaled(orig.edge_index(a, b));
    }
    return WeightMap::from_scaled(*gprime_, std::move(scaled), w.scale());
}

LevelledInstance build_levelled_instance(const PreferenceSystem& ps) {
    return LevelledInstance(ps);
}

Matching two_level_gale_shapley(const PreferenceSystem& ps) {
    Matching m = Matching::empty(ps);
    std::vector<int> level(ps.a_count(), 0);
    std::vector<size_t> next(ps.a_count(), 0);
    std::deque<int> free;
    for (int a = 0; a < ps.a_count(); ++a) free.push_back(a);

    // proposer p beats holder h at b iff p is on a higher level, or on the
    // same level and better-ranked in b's original list.
    auto beats = [&](const PreferenceSystem& g, int b, int p, int h) {
        if (level[p] != level[h]) return level[p] > level[h];
        return g.rank(b, p) < g.rank(b, h);
    };

    while (!free.empty()) {
        int a = free.front();
        free.pop_front();
        bool placed = false;
        while (next[a] < ps.neighbors(a).size()) {
            int b = ps.neighbors(a)[next[a]++];
            int cur = m.partner[b];
            if (cur < 0 || beats(ps, b, a, cur)) {
                if (cur >= 0) {
                    m.partner[cur] = -1;
                    free.push_back(cur);
                }
                m.partner[a] = b;
                m.partner[b] = a;
                placed = true;
                break;
            }
        }
        if (!placed && level[a] == 0) {
            level[a] = 1;  // promote once and restart the list
            next[a] = 0;
            free.push_back(a);
        }
    }
    return m;
}

std::vector<char> dominant_node_set(const PreferenceSystem& ps) {
    Matching d = two_level_gale_shapley(ps);
    std::vector<char> covered(ps.vertex_count(), 0);
    for (int v = 0; v < ps.vertex_count(); ++v) covered[v] = d.covers(v);
    return covered;
}

bool is_dominant_pair(const PreferenceSystem& ps, int u, int v) {
    int e = ps.edge_index(u, v);
    if (e < 0) throw ValidationError("not an edge");
    auto [a, b] = ps.edges()[e];
    LevelledInstance li(ps);
    RotationPoset poset = enumerate_rotations(li.gprime());
    return is_stable_pair(poset, li.gprime(), li.copy(a, 0), li.real_b(b)) ||
           is_stable_pair(poset, li.gprime(), li.copy(a, 1), li.real_b(b));
}

bool avoided_by_some_dominant(const PreferenceSystem& ps, int u, int v) {
    int e = ps.edge_index(u, v);
    if (e < 0) throw ValidationError("not an edge");
    auto [a, b] = ps.edges()[e];
    LevelledInstance li(ps);
    RotationPoset poset = enumerate_rotations(li.gprime());
    auto s = stable_with(poset, li.gprime(), {},
                         {{li.copy(a, 0), li.real_b(b)}, {li.copy(a, 1), li.real_b(b)}});
    return s.has_value();
}

std::optional<Matching> dominant_with(const PreferenceSystem& ps,
                                      const std::vector<std::pair<int, int>>& forced,
                                      const std::vector<std::pair<int, int>>& forbidden) {
    LevelledInstance li(ps);
    const PreferenceSystem& gp = li.gprime();
    RotationPoset poset = enumerate_rotations(gp);

    std::vector<std::pair<int, int>> banned;
    for (auto [u, v] : forbidden) {
        int e = ps.edge_index(u, v);
        if (e < 0) throw ValidationError("forbidden pair is not an edge");
        auto [a, b] = ps.edges()[e];
        banned.emplace_back(li.copy(a, 0), li.real_b(b));
        banned.emplace_back(li.copy(a, 1), li.real_b(b));
    }

    std::vector<std::pair<int, int>> fedges;
    for (auto [u, v] : forced) {
        int e = ps.edge_index(u, v);
        if (e < 0) throw ValidationError("forced pair is not an edge");
        fedges.push_back(ps.edges()[e]);
    }

    // Try every assignment of levels to the forced edges (2^k, with k tiny in
    // all polynomial uses: the dispatcher only ever forces one edge).
    const size_t k = fedges.size();
    if (k > 20) throw HardCaseError("too many forced edges for the dominant-side solver");
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
        std::vector<std::pair<int, int>> fprime;
        for (size_t i = 0; i < k; ++i) {
            auto [a, b] = fedges[i];
            int lvl = (mask >> i) & 1;
            fprime.emplace_back(li.copy(a, lvl), li.real_b(b));
        }
        if (auto s = stable_with(poset, gp, fprime, banned))
            return li.project(ps, *s);
    }
    return std::nullopt;
}

std::pair<Matching, WeightValue> max_weight_dominant(const PreferenceSystem& ps,
                                                     const WeightMap& w) {
    LevelledInstance li(ps);
    WeightMap lifted = li.lift(ps, w);
    auto [mprime, value] = max_weight_stable(li.gprime(), lifted);
    Matching m = li.project(ps, mprime);
    WeightValue check = w.matching_weight(ps, m);
    if (!(check == value))
        throw std::logic_error("projected weight mismatch in max_weight_dominant");
    return {std::move(m), check};
}

}  // namespace popmatch
