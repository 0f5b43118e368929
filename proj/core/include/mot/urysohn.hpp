#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mot/structures.hpp"

namespace mot {

// A finitely supported point of the ultrametric space U_S: a map from
// rational support values in (0,1] to nonzero integers. Distance is the
// largest key where two points differ; order is decided by comparing values
// at that key. Integer values suffice: every witness construction only ever
// increments or decrements by 1.
struct USPoint {
    std::map<Rat, long long> support;  // ascending keys; no zero values

    bool operator==(const USPoint& other) const = default;
    long long value_at(const Rat& s) const {
        auto it = support.find(s);
        return it == support.end() ? 0 : it->second;
    }
};

// Validates keys in (0,1], drops zero values.
USPoint us_normalize(std::map<Rat, long long> support);

// sup{ s : f(s) != g(s) }, or 0 when f = g.
Rat us_distance(const USPoint& f, const USPoint& g);

// -1 / 0 / +1: lexicographic comparison at the maximal differing key.
int us_compare(const USPoint& f, const USPoint& g);

enum class Side { below, above };

// Returns g with us_distance(f,g) = s exactly and g on the requested side of
// f: g(s) = f(s) + 1 for above, f(s) - 1 for below (zeros normalized away).
USPoint us_make_at(const USPoint& f, const Rat& s, Side side);

// Deterministic pseudo-random sample: `count` pairwise distinct points
// supported on `grid` with values in [-3,3] (0 = absent), drawn with the
// SplitMix64 seed contract in the listed grid order; colliding points are
// resampled until distinct.
std::vector<USPoint> us_sample(std::uint64_t seed, const std::vector<Rat>& grid,
                               int count);

// The induced finite substructure: lexicographic order, sup-metric. Points
// are named u0..u{n-1} in ascending lexicographic order.
FiniteMetricOrder us_export(const std::vector<USPoint>& points);

// Textual form `{ 1/2:1, 1/8:2 }`; printer emits keys descending, parser
// accepts any order.
std::string us_str(const USPoint& f);
USPoint us_parse(const std::string& text);

}  // namespace mot
