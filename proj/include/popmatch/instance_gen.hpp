// Deterministic fixtures and random generators used by tests and the
// self-test suite. Everything is seeded explicitly (std::mt19937_64) so
// failures reproduce exactly.

#pragma once

#include <random>

#include "popmatch/instance.hpp"
#include "popmatch/reduction.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

// The worked 2x2 example: one stable matching {a2b1} and one dominant
// matching {a1b1, a2b2} of twice its size.
//   a1: b1 | a2: b1 b2 | b1: a2 a1 | b2: a2
PreferenceSystem sample_half_size_instance();

// Two stable matchings linked by a single rotation:
//   a1: b1 b2 | a2: b2 b1 | b1: a2 a1 | b2: a1 a2
PreferenceSystem sample_two_stable_instance();

// One edge a-b; the only popular matching is {ab}.
PreferenceSystem single_edge_instance();

// Path a1 - b1 - a2 with b1 preferring a1; {a1b1} is the unique popular
// matching, so a2 lies outside the dominant node set.
PreferenceSystem path_three_instance();

// Random instance with 1..max_a and 1..max_b vertices per side, every
// vertex covered by at least one edge, at most max_edges edges, and
// independently shuffled preference lists.
PreferenceSystem random_instance(std::mt19937_64& rng, int max_a = 4,
                                 int max_b = 4, int max_edges = 12);

// Uniform random integer edge weights in [0, max_value].
WeightMap random_weights(std::mt19937_64& rng, const PreferenceSystem& ps,
                         int max_value = 9);

// Random monotone formula passed through normalize_monotone, so the result
// satisfies the strict normal form expected by the gadget construction.
CnfFormula random_normalized_formula(std::mt19937_64& rng, int max_vars = 4,
                                     int max_clauses = 4);

}  // namespace popmatch
