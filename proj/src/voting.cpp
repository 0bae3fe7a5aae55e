#include "popmatch/voting.hpp"

namespace popmatch {

int phi(const PreferenceSystem& ps, const Matching& m1, const Matching& m2) {
    int votes = 0;
    for (int v = 0; v < ps.vertex_count(); ++v) {
        int p1 = m1.partner[v], p2 = m2.partner[v];
        if (p1 == p2) continue;     // same partner (or unmatched in both): abstains
        if (p1 < 0) continue;       // unmatched in m1, matched in m2: votes m2
        if (p2 < 0) { ++votes; continue; }
        if (ps.rank(v, p1) < ps.rank(v, p2)) ++votes;
    }
    return votes;
}

bool is_more_popular(const PreferenceSystem& ps, const Matching& m1, const Matching& m2) {
    return phi(ps, m1, m2) > phi(ps, m2, m1);
}

bool defeats(const PreferenceSystem& ps, const Matching& m1, const Matching& m2) {
    int f = phi(ps, m1, m2), b = phi(ps, m2, m1);
    if (f != b) return f > b;
    return m1.size() > m2.size();
}

}  // namespace popmatch
