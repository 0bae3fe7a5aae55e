// Weighted popular-matching optimization: the stable/dominant half
// approximation, guarded exact solvers, and the node-weighted variant.

#include "popmatch/weighted.hpp"

#include <stdexcept>

#include "popmatch/dominant.hpp"
#include "popmatch/oracle.hpp"
#include "popmatch/stable.hpp"

namespace popmatch {

ApproxResult mwp_half_approx(const PreferenceSystem& ps, const WeightMap& w) {
    if (!w.all_nonnegative())
        throw ValidationError(
            "half-approximation requires nonnegative edge weights");
    auto [stable_m, stable_v] = max_weight_stable(ps, w);
    auto [dominant_m, dominant_v] = max_weight_dominant(ps, w);
    ApproxResult out{stable_m, stable_v, stable_v, dominant_v};
    if (out.value < dominant_v) {
        out.matching = dominant_m;
        out.value = dominant_v;
    }
    return out;
}

namespace {

std::pair<Matching, WeightValue> exact_opt(const PreferenceSystem& ps,
                                           const WeightMap& w,
                                           bool allow_exponential,
                                           bool maximize) {
    if (!allow_exponential)
        throw HardCaseError(
            "exact weighted optimization enumerates all matchings; enable the "
            "exponential fallback");
    // The enumeration itself guards against runaway instance sizes.
    constexpr long long kCap = 5'000'000;
    oracle::EnumerationReport report = oracle::popular_set(ps, kCap);
    if (report.popular.empty())
        throw std::logic_error("no popular matching found (stable ones always exist)");
    const Matching* best = &report.popular.front();
    WeightValue best_v = w.matching_weight(ps, *best);
    for (const Matching& m : report.popular) {
        WeightValue v = w.matching_weight(ps, m);
        if (maximize ? best_v < v : v < best_v) {
            best = &m;
            best_v = v;
        }
    }
    return {*best, best_v};
}

}  // namespace

std::pair<Matching, WeightValue> mwp_exact(const PreferenceSystem& ps,
                                           const WeightMap& w,
                                           bool allow_exponential) {
    return exact_opt(ps, w, allow_exponential, /*maximize=*/true);
}

std::pair<Matching, WeightValue> miwp_exact(const PreferenceSystem& ps,
                                            const WeightMap& w,
                                            bool allow_exponential) {
    return exact_opt(ps, w, allow_exponential, /*maximize=*/false);
}

std::pair<Matching, WeightValue> node_weighted_opt(const PreferenceSystem& ps,
                                                   const NodeWeightMap& nw,
                                                   OptDirection direction) {
    for (int v = 0; v < ps.vertex_count(); ++v)
        if (nw.scaled(v) < 0)
            throw ValidationError(
                "node-weighted optimization requires nonnegative node weights");
    // Coverage is minimal (V(S)) at every stable matching and maximal (V(D))
    // at every dominant one; with nonnegative weights those extremes are the
    // optima over all popular matchings.
    Matching m = direction == OptDirection::Min ? gale_shapley(ps, Side::A)
                                                : two_level_gale_shapley(ps);
    WeightValue value = nw.covered_weight(ps, m);
    return {std::move(m), value};
}

}  // namespace popmatch
