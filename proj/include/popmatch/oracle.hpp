// Brute-force ground truth for small instances.
//
// Everything here works from first principles (exhaustive enumeration plus
// the head-to-head vote definition in voting.hpp); nothing depends on the
// polynomial algorithms elsewhere in the library, so these routines can sit
// on the trusted side of every equivalence test.
//
// Vote comparisons are restricted to maximal opponents, which is sound:
// extending an opponent by an edge on two of its unmatched vertices never
// decreases its vote margin (each newly matched vertex either stops
// preferring the candidate or starts preferring the opponent), so if any
// matching beats/defeats a candidate, some maximal one does; and a
// non-maximal candidate is always beaten by itself plus a free edge.
// popular_set_naive skips the pruning for cross-validation.

#pragma once

#include <functional>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch::oracle {

struct EnumerationReport {
    long long total_matchings = 0;  // includes the empty matching
    std::vector<Matching> maximal;
    std::vector<Matching> popular;
    std::vector<Matching> stable;
    std::vector<Matching> dominant;
    int min_popular_size = -1;  // -1 when no popular matching exists... never
    int max_popular_size = -1;  // happens (stable matchings always exist)
};

// Every matching of ps (the empty one included) in a deterministic order:
// depth-first over the sorted edge list, exclude-branch first.  Throws
// HardCaseError once more than `cap` matchings are generated.
std::vector<Matching> enumerate_matchings(const PreferenceSystem& ps, long long cap);

// Streaming form of the above (no storage).
void for_each_matching(const PreferenceSystem& ps, long long cap,
                       const std::function<void(const Matching&)>& fn);

// uv is a blocking pair: not in m, and both endpoints prefer each other to
// their current situation (unmatched counts as worst).
bool has_blocking_pair(const PreferenceSystem& ps, const Matching& m);

// Popular = no matching gets strictly more votes; dominant = no matching
// defeats it (more votes, or tied votes with larger size); stable = no
// blocking pair.  All by definition.
EnumerationReport popular_set(const PreferenceSystem& ps, long long cap);

// As popular_set but compares every matching against every matching.
EnumerationReport popular_set_naive(const PreferenceSystem& ps, long long cap);

// Definition-level popularity of one matching (all opponents, no pruning).
bool is_popular_bruteforce(const PreferenceSystem& ps, const Matching& m, long long cap);

// Stable matchings by blocking-pair scan over the full enumeration.
std::vector<Matching> stable_matchings_bruteforce(const PreferenceSystem& ps, long long cap);

// Checks the covered-vertex containment chain on one instance: every stable
// matching covers the same vertex set V(S), every dominant matching covers
// the same V(D), and V(S) <= V(M) <= V(D) for every popular M.
bool check_coverage_chain(const PreferenceSystem& ps, long long cap);

}  // namespace popmatch::oracle
