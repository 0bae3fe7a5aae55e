// Stable matchings: Gale–Shapley, the rotation poset, constrained stable
// matchings, and max-weight stable matching.
//
// The rotation machinery follows the classic structure theory for stable
// matchings with incomplete lists: starting from the A-optimal matching,
// repeatedly find an exposed rotation (a cycle in the successor graph
// a -> partner(s(a)), where s(a) is the first vertex after a's current
// partner on a's list that is stably matched and prefers a to its current
// partner) and eliminate it, until the B-optimal matching is reached.  The
// recorded elimination sequence is a linear extension of the rotation poset;
// closed down-sets of that poset applied to the A-optimal matching produce
// exactly the stable matchings.  All of this is enforced by brute-force
// cross-checks in the tests rather than trusted.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

struct Rotation {
    // The cycle as (a_i, b_i) pairs; eliminating the rotation re-matches each
    // a_i to b_{i+1} (indices mod size).  First pair starts at the smallest
    // a id for determinism.
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::pair<int, int>> removed;  // (a_i, b_i)
    std::vector<std::pair<int, int>> added;    // (a_i, b_{i+1})
};

struct RotationPoset {
    Matching a_optimal;  // also the result of gale_shapley(ps, Side::A)
    Matching b_optimal;
    std::vector<Rotation> rotations;  // in elimination order (a linear extension)
    // direct_preds[r] = rotations that must be eliminated before r, from the
    // two classic precedence rules (see enumerate_rotations).
    std::vector<std::vector<int>> direct_preds;
    // Edge index -> rotation that adds/removes the edge, or -1.  Any edge is
    // added at most once and removed at most once across the whole sequence.
    std::vector<int> added_by;
    std::vector<int> removed_by;

    // in_set must be closed under direct_preds (checked); applies the chosen
    // rotations to a_optimal in elimination order.
    Matching apply(const std::vector<char>& in_set) const;
    bool is_closed(const std::vector<char>& in_set) const;
};

// Deferred-acceptance from the given proposing side; returns the matching
// optimal for that side.  Linear in the total list length.
Matching gale_shapley(const PreferenceSystem& ps, Side proposing);

// Vertices covered by every (equivalently, any) stable matching.
std::vector<char> stable_node_set(const PreferenceSystem& ps);

// Builds the full rotation poset (see file comment).
RotationPoset enumerate_rotations(const PreferenceSystem& ps);

// All stable matchings via closed down-sets, deterministic order; throws
// HardCaseError past `cap` matchings.
std::vector<Matching> all_stable_matchings(const PreferenceSystem& ps, long long cap);
std::vector<Matching> all_stable_matchings(const RotationPoset& poset, long long cap);

// e = uv belongs to at least one stable matching.
bool is_stable_pair(const PreferenceSystem& ps, int u, int v);
bool is_stable_pair(const RotationPoset& poset, const PreferenceSystem& ps, int u, int v);

// Some stable matching does not contain uv (true unless uv lies in the
// A-optimal matching and is never removed by any rotation).
bool avoided_by_some_stable(const PreferenceSystem& ps, int u, int v);
bool avoided_by_some_stable(const RotationPoset& poset, const PreferenceSystem& ps, int u,
                            int v);

// A stable matching containing every `forced` edge and no `forbidden` edge,
// or nullopt if none exists.  Solved as a minimal Horn closure over rotation
// atoms: forced edges pin their adding rotation in / removing rotation out,
// forbidden edges pin removals in or contribute add=>remove implications, and
// the predecessor-closed least fixpoint decides feasibility.
std::optional<Matching> stable_with(const RotationPoset& poset, const PreferenceSystem& ps,
                                    const std::vector<std::pair<int, int>>& forced,
                                    const std::vector<std::pair<int, int>>& forbidden);

// Maximum-weight stable matching: the A-optimal weight plus the best closed
// down-set of rotation gains, found with a min-cut (max-flow) over the
// precedence network; exact arithmetic throughout.
std::pair<Matching, WeightValue> max_weight_stable(const PreferenceSystem& ps,
                                                   const WeightMap& w);

}  // namespace popmatch
