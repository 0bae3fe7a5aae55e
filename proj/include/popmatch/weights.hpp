// Exact edge and vertex weights.
//
// Weights enter as decimal strings and are stored as arbitrary-precision
// integers under a single power-of-ten scale per map, so every comparison and
// sum downstream is exact integer arithmetic — no floating point anywhere a
// comparison decides correctness.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <iosfwd>
#include <string>
#include <vector>

#include "popmatch/instance.hpp"

namespace popmatch {

using BigInt = boost::multiprecision::cpp_int;

// An exact decimal: scaled / 10^scale.
struct WeightValue {
    BigInt scaled;
    int scale = 0;

    // Canonical decimal rendering ("7", "-3.25"); never goes through double.
    std::string str() const;

    // Three-way comparison across (possibly different) scales, exact.
    static int compare(const WeightValue& x, const WeightValue& y);
    bool operator==(const WeightValue& o) const { return compare(*this, o) == 0; }
    bool operator<(const WeightValue& o) const { return compare(*this, o) < 0; }
    bool operator<=(const WeightValue& o) const { return compare(*this, o) <= 0; }
};

// Edge weights; the domain must be exactly the instance's edge set.
class WeightMap {
public:
    // Format: one "u v <decimal>" line per edge; '#' comments, blank lines ok.
    // Every edge must appear exactly once.
    static WeightMap parse(const PreferenceSystem& ps, std::istream& in);
    static WeightMap parse_file(const PreferenceSystem& ps, const std::string& path);
    // All weights = v (scale 0); handy for tests.
    static WeightMap uniform(const PreferenceSystem& ps, long long v);
    // ints[i] is edges()[i]'s weight (scale 0).
    static WeightMap from_integers(const PreferenceSystem& ps,
                                   const std::vector<long long>& ints);
    // Pre-scaled values, one per edge, under the given scale.
    static WeightMap from_scaled(const PreferenceSystem& ps, std::vector<BigInt> scaled,
                                 int scale);

    int scale() const { return scale_; }
    const BigInt& scaled(int edge_idx) const { return scaled_[edge_idx]; }
    bool all_nonnegative() const;

    WeightValue value(const BigInt& scaled) const { return {scaled, scale_}; }
    WeightValue matching_weight(const PreferenceSystem& ps, const Matching& m) const;

private:
    int scale_ = 0;
    std::vector<BigInt> scaled_;  // by edge index
};

// Vertex weights; the domain must be exactly the vertex set.
class NodeWeightMap {
public:
    // Format: one "v <decimal>" line per vertex.
    static NodeWeightMap parse(const PreferenceSystem& ps, std::istream& in);
    static NodeWeightMap parse_file(const PreferenceSystem& ps, const std::string& path);

    int scale() const { return scale_; }
    const BigInt& scaled(int v) const { return scaled_[v]; }

    WeightValue covered_weight(const PreferenceSystem& ps, const Matching& m) const;

private:
    int scale_ = 0;
    std::vector<BigInt> scaled_;  // by vertex id
};

// Parses a decimal literal (optional sign, optional fraction) into
// (digits-as-integer, number of fraction digits); throws ParseError.
std::pair<BigInt, int> parse_decimal(const std::string& tok);

}  // namespace popmatch
