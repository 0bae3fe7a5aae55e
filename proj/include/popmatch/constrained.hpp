// Constrained popular-matching existence: the pmffe dispatcher.
//
// A ConstraintSet carries four constraint families over one instance:
// forced nodes (must be covered), forbidden nodes (must stay exposed),
// forced edges (must belong to the matching), forbidden edges (must not).
// solve_pmffe answers "is there a popular matching satisfying all of them"
// and returns one when the answer is yes.
//
// Polynomial cases, dispatched by shape of the constraint set:
//   - no constraints          -> any stable matching works
//   - forbidden nodes only    -> feasible iff none of them is covered by the
//                                (shared) stable coverage set; witness: the
//                                A-optimal stable matching
//   - forced nodes only       -> feasible iff all lie in the (shared) dominant
//                                coverage set; witness: the max-size popular
//                                matching from the two-level construction
//   - one forced edge         -> popular-edge test (stable or dominant side),
//                                witness through the rotation machinery
//   - one forbidden edge      -> impopular-edge test, same machinery
// Every other shape is NP-hard in general; a guarded exhaustive search over
// candidate matchings (pruned by the coverage sandwich V(S) <= V(M) <= V(D),
// maximality, and exact target sizes, scanned in nonincreasing size order)
// handles it when explicitly allowed.
//
// Two companion problems reuse the same machinery: exclusive_popular_set
// (popular M with V(M) = U exactly) and bounded_forbidden (popular M with
// |M n F| <= q).

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

// The four pmffe constraint families. Vertices are instance ids; edges are
// indices into ps.edges(). Use normalize() + validate() before solving.
struct ConstraintSet {
    std::vector<int> forced_nodes;     // must be covered by the matching
    std::vector<int> forbidden_nodes;  // must be left exposed
    std::vector<int> forced_edges;     // edge indices that must be in M
    std::vector<int> forbidden_edges;  // edge indices that must not be in M

    bool empty() const {
        return forced_nodes.empty() && forbidden_nodes.empty() &&
               forced_edges.empty() && forbidden_edges.empty();
    }

    // Sorts and deduplicates every field.
    void normalize();

    // Throws ValidationError unless: all ids/indices are in range, the node
    // sets are disjoint, the edge sets are disjoint, and no endpoint of a
    // constrained edge appears in a node constraint.
    void validate(const PreferenceSystem& ps) const;
};

// Per-edge membership/avoidance flags across the popular landscape.
struct EdgeClassification {
    bool in_some_stable = false;
    bool in_some_dominant = false;
    bool in_some_popular = false;  // = in_some_stable || in_some_dominant
    bool avoided_by_some_stable = false;
    bool avoided_by_some_dominant = false;
    bool avoided_by_some_popular = false;  // = stable-avoided || dominant-avoided
};

// Classifies one edge (given by index into ps.edges()) via the rotation
// posets of the instance and of its two-level companion. The "popular"
// flags follow from the decomposition of popular edges into stable and
// dominant ones. Throws ValidationError for an out-of-range index.
EdgeClassification classify_edge(const PreferenceSystem& ps, int edge_index);

// Convenience overload taking endpoint ids (either order). Throws
// ValidationError if (u, v) is not an edge.
EdgeClassification classify_edge(const PreferenceSystem& ps, int u, int v);

enum class PmffeStatus {
    Found,             // polynomial case, matching produced
    Infeasible,        // polynomial case, provably none exists
    HardFallbackUsed,  // exhaustive search ran; see matching for the result
};

struct PmffeOutcome {
    PmffeStatus status = PmffeStatus::Infeasible;
    std::optional<Matching> matching;  // set iff a witness was found
    std::string case_tag;              // which dispatch branch answered

    bool found() const { return matching.has_value(); }
};

// Decides existence of a popular matching satisfying cs. Polynomial shapes
// are answered exactly (status Found/Infeasible); any other shape needs the
// exhaustive fallback, which runs only when allow_exponential is set and
// reports status HardFallbackUsed. Throws HardCaseError when the fallback
// would be needed but is not allowed, ValidationError for an invalid cs.
PmffeOutcome solve_pmffe(const PreferenceSystem& ps, const ConstraintSet& cs,
                         bool allow_exponential);

// Decides existence of a popular matching whose covered set is exactly U
// (vertex ids). Shortcuts: infeasible unless V(S) <= U <= V(D); equality
// with either bound is answered by the corresponding canonical matching.
// The in-between regime is NP-hard and uses the guarded fallback.
PmffeOutcome exclusive_popular_set(const PreferenceSystem& ps,
                                   const std::vector<int>& u,
                                   bool allow_exponential);

// Decides existence of a popular matching using at most q edges of F
// (edge indices). q >= |F| is vacuous; q = 0 with |F| = 1 is the
// impopular-edge case; everything else uses the guarded fallback.
PmffeOutcome bounded_forbidden(const PreferenceSystem& ps,
                               const std::vector<int>& f, int q,
                               bool allow_exponential);

namespace detail {

// Shared exhaustive search: first popular matching (scanning target sizes
// from the dominant size down to the stable size, A-vertices in id order,
// partners in preference order before "leave exposed") satisfying all
// constraints.
struct SearchSpec {
    std::vector<char> must_cover;      // per vertex id
    std::vector<char> must_avoid;      // per vertex id
    std::vector<int> forced_edges;     // edge indices
    std::vector<char> forbidden_edge;  // per edge index
    bool exact_cover = false;          // covered set must equal must_cover set
    std::vector<char> budget_edge;     // per edge index (empty = no budget)
    int budget = -1;                   // max count of budget edges in M
};

std::optional<Matching> exhaustive_popular_search(const PreferenceSystem& ps,
                                                  const SearchSpec& spec);

}  // namespace detail

}  // namespace popmatch
