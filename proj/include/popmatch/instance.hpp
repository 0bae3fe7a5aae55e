// Core types for bipartite preference systems and matchings.
//
// A preference system is a bipartite graph G = (A u B, E) where every vertex
// ranks its neighbours with a strict total order.  Vertices are stored under
// dense integer ids: A-side vertices first (in input order), then B-side.
// All higher-level algorithms work on these ids; names only matter at the
// text-format boundary (parse/render) and in user-facing output.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace popmatch {

// Thrown for malformed textual input; carries a 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Thrown when structurally well-formed input violates a semantic requirement
// (unknown vertex, non-edge, asymmetric preference lists, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an operation's precondition does not hold (e.g. asking whether a
// matching is dominant when it is not even popular).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a worst-case-exponential computation is refused by its guard.
class HardCaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Side { A, B };

class PreferenceSystem {
public:
    // Builds a validated system.  `prefs[i]` is vertex i's neighbour list in
    // strictly decreasing preference order, indexed like `names` (A block
    // first).  Checks: nonempty sides, unique names, lists nonempty and
    // duplicate-free, edges cross-side, and symmetry (u lists v iff v lists u).
    PreferenceSystem(std::vector<std::string> a_names,
                     std::vector<std::string> b_names,
                     std::vector<std::vector<int>> prefs);

    int vertex_count() const { return static_cast<int>(names_.size()); }
    int a_count() const { return a_count_; }
    int b_count() const { return vertex_count() - a_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    Side side_of(int v) const { return v < a_count_ ? Side::A : Side::B; }
    const std::string& name(int v) const { return names_[v]; }

    // Id lookup by name; id_of throws ValidationError on unknown names.
    int id_of(const std::string& name) const;
    std::optional<int> try_id(const std::string& name) const;

    // v's neighbours in strictly decreasing preference order.
    const std::vector<int>& neighbors(int v) const { return prefs_[v]; }
    int degree(int v) const { return static_cast<int>(prefs_[v].size()); }

    // 1-based position of v in u's list; throws ValidationError if uv is not
    // an edge.  rank(u, x) < rank(u, y) means u prefers x to y.
    int rank(int u, int v) const;
    bool adjacent(int u, int v) const { return rank_.count(key(u, v)) != 0; }

    // All edges as (a, b) pairs with a in A, sorted by (a, b).
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    // Index of edge (u, v) in edges() under either orientation; -1 if absent.
    int edge_index(int u, int v) const;

private:
    static std::uint64_t key(int u, int v) {
        return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    }

    int a_count_ = 0;
    std::vector<std::string> names_;
    std::vector<std::vector<int>> prefs_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_map<std::string, int> id_;
    std::unordered_map<std::uint64_t, int> rank_;       // (u,v) -> 1-based rank
    std::unordered_map<std::uint64_t, int> edge_idx_;   // (a,b) -> index in edges_
};

// A matching stored as a partner vector (-1 = unmatched).  Always tied to a
// particular PreferenceSystem's id space by construction.
struct Matching {
    std::vector<int> partner;

    static Matching empty(const PreferenceSystem& ps) {
        return Matching{std::vector<int>(ps.vertex_count(), -1)};
    }
    // Validates: edges exist in ps, no vertex used twice.
    static Matching from_edges(const PreferenceSystem& ps,
                               const std::vector<std::pair<int, int>>& edges);

    bool covers(int v) const { return partner[v] >= 0; }
    int size() const {
        int c = 0;
        for (int p : partner) c += (p >= 0);
        return c / 2;
    }
    bool contains_edge(int u, int v) const { return partner[u] == v; }
    // Edges as (a, b) pairs (A-side first), sorted.  `n_a` = ps.a_count().
    std::vector<std::pair<int, int>> edge_list(int n_a) const;

    bool operator==(const Matching&) const = default;
};

// --- Text formats ----------------------------------------------------------

// Instance format:
//   popmatch-instance v1
//   A: a1 a2 ...
//   B: b1 b2 ...
//   pref a1: b2 b1
//   ...
// '#' starts a comment; blank lines ignored; names are whitespace-free tokens
// not containing ':'.  Every vertex needs a pref line (isolated vertices are
// rejected); lists must be symmetric.
PreferenceSystem parse_instance(std::istream& in);
PreferenceSystem parse_instance_string(const std::string& text);
PreferenceSystem parse_instance_file(const std::string& path);

// Renders in the same format, vertices in id order; parse(render(ps)) == ps.
std::string render_instance(const PreferenceSystem& ps);

// Matching format: one "u v" edge per line; '#' comments and blanks ignored.
Matching parse_matching(const PreferenceSystem& ps, std::istream& in);
Matching parse_matching_file(const PreferenceSystem& ps, const std::string& path);
std::string render_matching(const PreferenceSystem& ps, const Matching& m);

}  // namespace popmatch
