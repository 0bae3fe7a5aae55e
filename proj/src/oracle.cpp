#include "popmatch/oracle.hpp"

#include <algorithm>

#include "popmatch/voting.hpp"

namespace popmatch::oracle {

namespace {

void enumerate_rec(const PreferenceSystem& ps, int idx, Matching& m, long long cap,
                   long long& count, const std::function<void(const Matching&)>& fn) {
    if (idx == ps.edge_count()) {
        if (++count > cap)
            throw HardCaseError("matching enumeration exceeded cap of " + std::to_string(cap));
        fn(m);
        return;
    }
    enumerate_rec(ps, idx + 1, m, cap, count, fn);  // exclude edge idx
    auto [a, b] = ps.edges()[idx];
    if (!m.covers(a) && !m.covers(b)) {
        m.partner[a] = b;
        m.partner[b] = a;
        enumerate_rec(ps, idx + 1, m, cap, count, fn);
        m.partner[a] = -1;
        m.partner[b] = -1;
    }
}

bool is_maximal(const PreferenceSystem& ps, const Matching& m) {
    for (auto [a, b] : ps.edges())
        if (!m.covers(a) && !m.covers(b)) return false;
    return true;
}

EnumerationReport build_report(const PreferenceSystem& ps, long long cap, bool naive) {
    EnumerationReport rep;
    // Candidates and opponents.  In naive mode both range over everything;
    // otherwise both are restricted to maximal matchings (see header).
    std::vector<Matching> everything;
    for_each_matching(ps, cap, [&](const Matching& m) {
        ++rep.total_matchings;
        if (naive) everything.push_back(m);
        if (is_maximal(ps, m)) rep.maximal.push_back(m);
        if (!has_blocking_pair(ps, m)) rep.stable.push_back(m);
    });
    const std::vector<Matching>& opponents = naive ? everything : rep.maximal;

    for (const Matching& cand : (naive ? everything : rep.maximal)) {
        bool popular = true, dominant = true;
        for (const Matching& opp : opponents) {
            int f = phi(ps, cand, opp), g = phi(ps, opp, cand);
            if (g > f) {
                popular = dominant = false;
                break;
            }
            if (g == f && opp.size() > cand.size()) dominant = false;
        }
        if (popular) {
            rep.popular.push_back(cand);
            if (dominant) rep.dominant.push_back(cand);
        }
    }

    for (const Matching& m : rep.popular) {
        int s = m.size();
        if (rep.min_popular_size < 0 || s < rep.min_popular_size) rep.min_popular_size = s;
        if (s > rep.max_popular_size) rep.max_popular_size = s;
    }
    return rep;
}

}  // namespace

void for_each_matching(const PreferenceSystem& ps, long long cap,
                       const std::function<void(const Matching&)>& fn) {
    Matching m = Matching::empty(ps);
    long long count = 0;
    enumerate_rec(ps, 0, m, cap, count, fn);
}

std::vector<Matching> enumerate_matchings(const PreferenceSystem& ps, long long cap) {
    std::vector<Matching> out;
    for_each_matching(ps, cap, [&](const Matching& m) { out.push_back(m); });
    return out;
}

bool has_blocking_pair(const PreferenceSystem& ps, const Matching& m) {
    for (auto [a, b] : ps.edges()) {
        if (m.partner[a] == b) continue;
        bool a_wants = !m.covers(a) || ps.rank(a, b) < ps.rank(a, m.partner[a]);
        bool b_wants = !m.covers(b) || ps.rank(b, a) < ps.rank(b, m.partner[b]);
        if (a_wants && b_wants) return true;
    }
    return false;
}

EnumerationReport popular_set(const PreferenceSystem& ps, long long cap) {
    return build_report(ps, cap, /*naive=*/false);
}

EnumerationReport popular_set_naive(const PreferenceSystem& ps, long long cap) {
    return build_report(ps, cap, /*naive=*/true);
}

bool is_popular_bruteforce(const PreferenceSystem& ps, const Matching& m, long long cap) {
    bool popular = true;
    for_each_matching(ps, cap, [&](const Matching& opp) {
        if (popular && phi(ps, opp, m) > phi(ps, m, opp)) popular = false;
    });
    return popular;
}

std::vector<Matching> stable_matchings_bruteforce(const PreferenceSystem& ps, long long cap) {
    std::vector<Matching> out;
    for_each_matching(ps, cap, [&](const Matching& m) {
        if (!has_blocking_pair(ps, m)) out.push_back(m);
    });
    return out;
}

bool check_coverage_chain(const PreferenceSystem& ps, long long cap) {
    EnumerationReport rep = popular_set(ps, cap);
    if (rep.stable.empty() || rep.dominant.empty()) return false;

    auto covered = [&](const Matching& m) {
        std::vector<char> c(ps.vertex_count(), 0);
        for (int v = 0; v < ps.vertex_count(); ++v) c[v] = m.covers(v);
        return c;
    };

    auto vs = covered(rep.stable.front());
    for (const Matching& s : rep.stable)
        if (covered(s) != vs) return false;
    auto vd = covered(rep.dominant.front());
    for (const Matching& d : rep.dominant)
        if (covered(d) != vd) return false;

    for (const Matching& m : rep.popular) {
        auto vm = covered(m);
        for (int v = 0; v < ps.vertex_count(); ++v) {
            if (vs[v] && !vm[v]) return false;
            if (vm[v] && !vd[v]) return false;
        }
    }
    return true;
}

}  // namespace popmatch::oracle
