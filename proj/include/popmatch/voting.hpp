// Head-to-head voting between two matchings of one preference system.
//
// In an election between matchings M and M', every vertex votes for the
// matching giving it the better partner (being matched beats being unmatched;
// otherwise its preference order decides); vertices with the same partner in
// both abstain.  phi(M, M') counts the votes for M.

#pragma once

#include "popmatch/instance.hpp"

namespace popmatch {

// Number of vertices strictly preferring their m1-partner to their m2-partner.
int phi(const PreferenceSystem& ps, const Matching& m1, const Matching& m2);

// m1 gets strictly more votes than m2.
bool is_more_popular(const PreferenceSystem& ps, const Matching& m1, const Matching& m2);

// m1 defeats m2: more votes, or a tied vote with strictly larger size.
bool defeats(const PreferenceSystem& ps, const Matching& m1, const Matching& m2);

}  // namespace popmatch
