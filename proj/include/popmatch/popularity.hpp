// Popularity and dominance testing with certificates.
//
// A matching M is popular if no matching M' gets strictly more votes in a
// head-to-head election (see voting.hpp).  The combinatorial test used here:
// label every non-matching edge uv with u's and v's votes ('+' if that
// endpoint prefers the edge to its M-partner, unmatched endpoints always '+'),
// drop the (-,-) edges to get the reduced graph G_M, and look for
//   (i)   an M-alternating cycle containing a (+,+) edge,
//   (ii)  an M-alternating path containing two distinct (+,+) edges,
//   (iii) an M-alternating path from an M-exposed vertex containing a (+,+)
//         edge.
// M is popular iff none exists.  A popular M is dominant iff G_M additionally
// has no M-augmenting path.
//
// The search runs a linear-time alternating-walk reachability screen first;
// only when the screen flags a candidate does it fall back to exact bounded
// backtracking over simple alternating paths, so the common "popular" answer
// never pays the exponential price and every "not popular" answer carries a
// concrete, replayable witness.

#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

enum class Vote : char { Plus = '+', Minus = '-' };

// Edge labels of G relative to a matching M.  Labels exist on non-matching
// edges only and are stored per ordered endpoint (ask for u's vote on uv).
class LabeledGraph {
public:
    LabeledGraph(const PreferenceSystem& ps, Matching m);

    const PreferenceSystem& system() const { return *ps_; }
    const Matching& matching() const { return m_; }

    bool matched_edge(int e) const { return matched_[e]; }
    // Edge of G_M: matched, or non-matching with at least one '+'.
    bool in_reduced(int e) const { return reduced_[e]; }
    // endpoint's vote on non-matching edge e; throws on matched edges.
    Vote vote(int e, int endpoint) const;
    bool plus_plus(int e) const { return pp_[e]; }
    // Indices of (+,+) edges (all lie in G_M by definition).
    const std::vector<int>& plus_plus_edges() const { return pp_list_; }
    // Neighbours of v through non-matching G_M edges.
    const std::vector<int>& reduced_neighbors(int v) const { return radj_[v]; }

private:
    const PreferenceSystem* ps_;
    Matching m_;
    std::vector<char> matched_, reduced_, pp_;
    std::vector<Vote> vote_a_, vote_b_;  // per edge, for the (a, b) orientation
    std::vector<int> pp_list_;
    std::vector<std::vector<int>> radj_;
};

// Which kind of beating structure a witness exhibits.
enum class ViolationKind { AlternatingCycle, TwoPlusPlusPath, ExposedPath };

struct PopularityWitness {
    ViolationKind kind;
    // Ordered vertex walk.  For AlternatingCycle the first vertex is repeated
    // at the end; for paths the walk runs from start to finish (ExposedPath
    // starts at the exposed vertex).
    std::vector<int> walk;
    // The (+,+) edges the witness relies on (1 for (i)/(iii), 2 for (ii)).
    std::vector<std::pair<int, int>> plus_plus;
};

struct PopularityCertificate {
    bool verdict = false;
    std::optional<PopularityWitness> witness;  // present iff verdict is false
};

struct DominanceCertificate {
    bool verdict = false;
    // Present iff verdict is false: vertices of an M-augmenting path in G_M
    // (both ends exposed, first/last edges non-matching).
    std::optional<std::vector<int>> augmenting_path;
};

PopularityCertificate is_popular(const PreferenceSystem& ps, const Matching& m);

// Pre: m is popular; throws PreconditionError otherwise.
DominanceCertificate is_dominant(const PreferenceSystem& ps, const Matching& m);

// Alternating-walk reachability inside G_M.  A state is (vertex, parity):
// parity 0 = entered by a matched edge (the next step must use a non-matching
// edge), parity 1 = entered by a non-matching edge (next step matched).
// Sources start ready-to-take-a-non-matching-edge; the result contains the
// states reached by walks of >= 1 edge, not the sources themselves.
std::set<std::pair<int, int>> alternating_reachability(const LabeledGraph& lg,
                                                       const std::vector<int>& sources);

// Checks that a witness is structurally valid for (ps, m): edges exist and lie
// in G_M, the walk alternates, simplicity holds, and the claimed (+,+) edges
// are labelled (+,+) and lie on the walk.  Used by tests and `verify`.
bool witness_is_valid(const PreferenceSystem& ps, const Matching& m,
                      const PopularityWitness& w);

}  // namespace popmatch
