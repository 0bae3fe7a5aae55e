// Weighted optimization over popular matchings.
//
// Maximizing edge weight over popular matchings is NP-hard, but every
// popular matching splits into a stable part plus a dominant-side rest, so
// w(M) <= w(best stable) + w(best dominant) for nonnegative weights. Taking
// the better of the two polynomial optima therefore guarantees at least half
// the true optimum. Exact optima (max and min) come from guarded oracle
// enumeration. The node-weighted variant is polynomial outright: coverage is
// the same for all stable matchings (the popular minimum) and for all
// dominant matchings (the popular maximum).
//
// All values are exact scaled decimals (WeightValue); no comparison that
// decides a result ever goes through floating point.

#pragma once

#include <utility>

#include "popmatch/instance.hpp"
#include "popmatch/weights.hpp"

namespace popmatch {

struct ApproxResult {
    Matching matching;
    WeightValue value;           // = max(stable_value, dominant_value)
    WeightValue stable_value;    // max-weight stable matching value
    WeightValue dominant_value;  // max-weight dominant matching value
};

// 1/2-approximation for max-weight popular matching: the better of the
// max-weight stable and max-weight dominant matchings (ties keep the stable
// side). Requires nonnegative weights (ValidationError otherwise); the
// guarantee value >= OPT/2 holds only in that regime.
ApproxResult mwp_half_approx(const PreferenceSystem& ps, const WeightMap& w);

// Exact max-weight popular matching by oracle enumeration. Refuses without
// allow_exponential (HardCaseError); ties resolve to the first optimum in
// enumeration order. Any weight signs are fine.
std::pair<Matching, WeightValue> mwp_exact(const PreferenceSystem& ps,
                                           const WeightMap& w,
                                           bool allow_exponential);

// Exact min-weight popular matching, same contract. There is deliberately no
// approximate variant: the minimization problem cannot be approximated.
std::pair<Matching, WeightValue> miwp_exact(const PreferenceSystem& ps,
                                            const WeightMap& w,
                                            bool allow_exponential);

enum class OptDirection { Min, Max };

// Optimizes total node weight of covered vertices over popular matchings,
// for nonnegative node weights (ValidationError otherwise). Min is achieved
// by any stable matching, max by any dominant matching, since those coverage
// sets bound every popular matching's coverage.
std::pair<Matching, WeightValue> node_weighted_opt(const PreferenceSystem& ps,
                                                   const NodeWeightMap& nw,
                                                   OptDirection direction);

}  // namespace popmatch
