// Dominant matchings via the two-level duplicated instance.
//
// From G build G' by splitting every A-vertex a into a level-0 copy and a
// level-1 copy plus a private dummy partner d(a) on the B side:
//   - a@0's list is a's list followed by d(a);
//   - a@1's list is d(a) followed by a's list;
//   - d(a)'s list is (a@0, a@1);
//   - every real b ranks all level-1 copies (in b's original order) strictly
//     above all level-0 copies (again in b's original order).
// Every stable matching of G' matches every dummy (otherwise a@1 and d(a)
// would block), so at most one copy of a holds a real partner and the
// projection sigma (a@i b -> ab, dummy edges dropped) is a valid matching of
// G.  sigma maps the stable matchings of G' onto the dominant matchings of
// G, which turns every dominant-side question into a stable-side question on
// G' — pair queries, avoidance, constrained existence, max weight.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"
#include "popmatch/stable.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

class LevelledInstance {
public:
    explicit LevelledInstance(const PreferenceSystem& ps);

    const PreferenceSystem& gprime() const { return *gprime_; }

    // G'-ids of the pieces belonging to original vertices.
    int copy(int a, int level) const { return 2 * a + level; }
    int dummy(int a) const;   // d(a), on G's B side
    int real_b(int b) const;  // the G'-id of original B-vertex b

    // Reverse map: origin vertex of a G'-vertex (for dummies, the A-vertex
    // they belong to) and its kind: 0/1 = A-copy level, 2 = real B, 3 = dummy.
    int origin(int vprime) const { return origin_[vprime]; }
    int kind(int vprime) const { return kind_[vprime]; }

    // sigma: project a matching of G' down to G.
    Matching project(const PreferenceSystem& orig, const Matching& mprime) const;
    // Lift edge weights (dummy edges get 0).
    WeightMap lift(const PreferenceSystem& orig, const WeightMap& w) const;

private:
    std::optional<PreferenceSystem> gprime_;
    int n_a_ = 0, n_b_ = 0;
    std::vector<int> origin_, kind_;
};

LevelledInstance build_levelled_instance(const PreferenceSystem& ps);

// The promotion algorithm run directly on G: A-vertices propose down their
// lists at level 0; a proposer exhausting its list is promoted once to level
// 1 and restarts; B-vertices prefer any level-1 proposer to any level-0 one
// and break ties within a level by their original ranks.  Produces a
// dominant matching (equal to sigma of G'-side Gale–Shapley).
Matching two_level_gale_shapley(const PreferenceSystem& ps);

// Vertices covered by every (equivalently, any) dominant matching.
std::vector<char> dominant_node_set(const PreferenceSystem& ps);

// uv lies in at least one dominant matching (a stable pair of G' at either
// level); throws ValidationError on non-edges.
bool is_dominant_pair(const PreferenceSystem& ps, int u, int v);

// Some dominant matching avoids uv (a stable matching of G' avoids both
// copies of the edge).
bool avoided_by_some_dominant(const PreferenceSystem& ps, int u, int v);

// A dominant matching through all `forced` and around all `forbidden` edges
// of G, or nullopt.  Each forced edge is tried at both levels of G'.
std::optional<Matching> dominant_with(const PreferenceSystem& ps,
                                      const std::vector<std::pair<int, int>>& forced,
                                      const std::vector<std::pair<int, int>>& forbidden);

// Maximum-weight dominant matching: max_weight_stable on G' with lifted
// weights, projected back.
std::pair<Matching, WeightValue> max_weight_dominant(const PreferenceSystem& ps,
                                                     const WeightMap& w);

}  // namespace popmatch
