#include "mot/checks.hpp"

#include <algorithm>
#include <numeric>

namespace mot {

namespace {

void check_index(int i, int n) {
    if (i < 0 || i >= n) throw Error("point index out of range");
}

void check_cap(int n, bool allow_large) {
    if (n > kExhaustiveSweepCap && !allow_large)
        throw Error("structure exceeds the exhaustive-sweep cap of 64 points; "
                    "pass allow_large to confirm");
}

template <typename S>
Rat d_delta_impl(const S& s, int i, int j) {
    check_index(i, s.size());
    check_index(j, s.size());
    Rat best(1);
    for (int z = 0; z < s.size(); ++z)
        best = std::min(best, std::max(s.dist(i, z), s.dist(j, z)));
    return best;
}

template <typename S>
Rat ultrametric_defect_impl(const S& s, bool allow_large) {
    check_cap(s.size(), allow_large);
    Rat worst(0);
    for (int x = 0; x < s.size(); ++x)
        for (int y = 0; y < s.size(); ++y)
            for (int z = 0; z < s.size(); ++z)
                worst = std::max(worst, tsub(s.dist(x, z), std::max(s.dist(x, y), s.dist(y, z))));
    return worst;
}

}  // namespace

Rat ray(const FiniteMetricOrder& m, int i, int j) {
    check_index(i, m.size());
    check_index(j, m.size());
    return i <= j ? Rat(0) : m.dist(i, j);
}

Rat d_delta(const FiniteMetricOrder& m, int i, int j) { return d_delta_impl(m, i, j); }
Rat d_delta(const FiniteCyclicOrder& c, int i, int j) { return d_delta_impl(c, i, j); }

Rat d_leq(const FiniteMetricOrder& m, int i, int j) {
    check_index(i, m.size());
    check_index(j, m.size());
    return i <= j ? Rat(0) : d_delta(m, i, j);
}

Rat MloAxiomValues::max() const { return std::max({a1, a2, a3, a4}); }

MloAxiomValues mlo_axiom_values(const FiniteMetricOrder& m, bool allow_large) {
    check_cap(m.size(), allow_large);
    const int n = m.size();
    MloAxiomValues v{Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            v.a1 = std::max(v.a1, rat_abs(ray(m, x, y) + ray(m, y, x) - m.dist(x, y)));
            v.a2 = std::max(v.a2, std::min(ray(m, x, y), ray(m, y, x)));
            for (int z = 0; z < n; ++z)
                v.a3 = std::max(v.a3, tsub(ray(m, x, z), ray(m, x, y) + ray(m, y, z)));
            Rat brute(1);
            for (int z = 0; z < n; ++z)
                brute = std::min(brute, std::max(ray(m, x, z), ray(m, z, y)));
            v.a4 = std::max(v.a4, rat_abs(d_leq(m, x, y) - brute));
        }
    return v;
}

Rat mlo_defect(const FiniteMetricOrder& m, bool allow_large) {
    return mlo_axiom_values(m, allow_large).max();
}

Rat mdlo_defect(const FiniteMetricOrder& m, long resolution, bool allow_large) {
    if (resolution < 1) throw Error("resolution must be >= 1");
    check_cap(m.size(), allow_large);
    Rat worst(0);
    for (int a = 0; a < m.size(); ++a)
        for (long k = 0; k <= resolution; ++k) {
            const Rat p(Int(k), Int(resolution));
            Rat fwd(1), rev(1);
            for (int y = 0; y < m.size(); ++y) {
                fwd = std::min(fwd, rat_abs(ray(m, a, y) - p));
                rev = std::min(rev, rat_abs(ray(m, y, a) - p));
            }
            worst = std::max({worst, fwd, rev});
        }
    return worst;
}

Rat ultrametric_defect(const FiniteMetricOrder& m, bool allow_large) {
    return ultrametric_defect_impl(m, allow_large);
}
Rat ultrametric_defect(const FiniteCyclicOrder& c, bool allow_large) {
    return ultrametric_defect_impl(c, allow_large);
}

Rat ordered_max_rule_defect(const FiniteMetricOrder& m, bool allow_large) {
    if (mlo_defect(m, allow_large) != 0)
        throw Error("ordered_max_rule_defect requires mlo_defect = 0");
    if (ultrametric_defect(m, allow_large) != 0)
        throw Error("ordered_max_rule_defect requires ultrametric_defect = 0");
    Rat worst(0);
    for (int a = 0; a < m.size(); ++a)
        for (int b = a + 1; b < m.size(); ++b)
            for (int c = b + 1; c < m.size(); ++c)
                worst = std::max(worst,
                                 rat_abs(m.dist(a, c) - std::max(m.dist(a, b), m.dist(b, c))));
    return worst;
}

FiniteCyclicOrder roll_up(const FiniteMetricOrder& m, bool allow_large) {
    if (mlo_defect(m, allow_large) != 0) throw Error("roll_up requires mlo_defect = 0");
    const int n = m.size();
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if ((i <= j && j <= k) || (j <= k && k <= i) || (k <= i && i <= j))
                    triples.push_back({i, j, k});
    std::vector<std::vector<Rat>> dist(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dist[i][j] = m.dist(i, j);
    return FiniteCyclicOrder(m.names(), std::move(dist), triples);
}

Rat d_ceq(const FiniteCyclicOrder& c, int i, int j, int k) {
    if (c.ceq(i, j, k)) return Rat(0);
    return std::min({d_delta(c, i, j), d_delta(c, j, k), d_delta(c, k, i)});
}

Rat McoAxiomValues::max() const {
    return std::max({cyclicity, antisym_refl, totality, transitivity, convexity});
}

McoAxiomValues mco_axiom_values(const FiniteCyclicOrder& c, bool allow_large) {
    check_cap(c.size(), allow_large);
    const int n = c.size();
    McoAxiomValues v{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                const Rat xyz = d_ceq(c, x, y, z);
                const Rat yxz = d_ceq(c, y, x, z);
                const Rat delta3 =
                    std::min({d_delta(c, x, y), d_delta(c, y, z), d_delta(c, z, x)});
                v.cyclicity = std::max(v.cyclicity, rat_abs(xyz - d_ceq(c, y, z, x)));
                // The sum is clamped at 1, matching the [0,1]-valued plus
                // connective (irrelevant on valid structures, where one of
                // the two d_ceq values is always 0).
                v.antisym_refl =
                    std::max(v.antisym_refl, rat_abs(std::min(Rat(xyz + yxz), Rat(1)) - delta3));
                v.totality = std::max(v.totality, std::min(xyz, yxz));
            }
    for (int w = 0; w < n; ++w)
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                if (c.ceq(w, x, z)) {
                    for (int y = 0; y < n; ++y)
                        v.transitivity = std::max(
                            v.transitivity, std::min(d_ceq(c, w, x, y), d_ceq(c, w, y, z)));
                }
                for (int y = 0; y < n; ++y)
                    v.convexity = std::max(
                        v.convexity,
                        std::min({d_ceq(c, w, y, x), d_ceq(c, w, z, y),
                                  tsub(std::min(c.dist(w, x), c.dist(w, z)), c.dist(w, y))}));
            }
    return v;
}

Rat mco_defect(const FiniteCyclicOrder& c, bool allow_large) {
    return mco_axiom_values(c, allow_large).max();
}

FiniteMetricOrder unroll(const FiniteCyclicOrder& c, bool allow_large) {
    if (mco_defect(c, allow_large) != 0) throw Error("unroll requires mco_defect = 0");
    if (ultrametric_defect(c, allow_large) != 0)
        throw Error("unroll requires ultrametric_defect = 0 "
                    "(the geodesic circle metric admits no compatible linear order)");
    const int n = c.size();
    if (n == 0) throw Error("unroll requires at least one point");
    // Lexicographically first pair realizing the maximum distance.
    int a = 0, b = 0;
    Rat D(0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (c.dist(i, j) > D) {
                D = c.dist(i, j);
                a = i;
                b = j;
            }
    std::vector<int> order;
    if (D == 0) {
        order.push_back(0);  // single point
    } else {
        std::vector<int> ball, rest;
        for (int i = 0; i < n; ++i)
            (c.dist(a, i) < D ? ball : rest).push_back(i);
        // Within the ball, b is an outside reference point; within the
        // complement, a is. For a valid ultrametric cyclic order these
        // comparators are strict total orders on their pieces.
        std::stable_sort(ball.begin(), ball.end(),
                         [&](int x, int y) { return x != y && c.ceq(x, y, b); });
        std::stable_sort(rest.begin(), rest.end(),
                         [&](int x, int y) { return x != y && c.ceq(x, y, a); });
        order = ball;
        order.insert(order.end(), rest.begin(), rest.end());
    }
    std::vector<std::string> names;
    std::vector<std::vector<Rat>> dist(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        names.push_back(c.name(order[i]));
        for (int j = 0; j < n; ++j) dist[i][j] = c.dist(order[i], order[j]);
    }
    return FiniteMetricOrder(std::move(names), std::move(dist));
}

Rat udco_density_defect(const FiniteCyclicOrder& c, long resolution, bool allow_large) {
    if (resolution < 1) throw Error("resolution must be >= 1");
    if (mco_defect(c, allow_large) != 0)
        throw Error("udco_density_defect requires mco_defect = 0");
    const int n = c.size();
    Rat worst(0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (c.dist(a, b) == 0) continue;
            for (long k = 0; k <= resolution; ++k) {
                const Rat target = Rat(Int(k), Int(resolution)) * c.dist(a, b);
                Rat fwd(1), rev(1);
                for (int z = 0; z < n; ++z) {
                    if (c.ceq(a, b, z)) fwd = std::min(fwd, rat_abs(c.dist(a, z) - target));
                    if (c.ceq(a, z, b)) rev = std::min(rev, rat_abs(c.dist(b, z) - target));
                }
                worst = std::max({worst, fwd, rev});
            }
        }
    return worst;
}

Rat dist_to_interval_complement(const FiniteMetricOrder& m,
                                const std::vector<IntervalSpec>& intervals, int i) {
    check_index(i, m.size());
    const int n = m.size();
    for (const auto& iv : intervals) {
        if ((iv.lower && iv.lower_closed) || (iv.upper && iv.upper_closed))
            throw Error("intervals must be open");
        if (iv.lower && iv.upper && *iv.lower > *iv.upper)
            throw Error("interval lower endpoint above upper endpoint");
        for (auto e : {iv.lower, iv.upper})
            if (e) check_index(*e, n);
    }
    std::vector<char> in_union(n, 0);
    for (const auto& iv : intervals)
        for (int p = 0; p < n; ++p)
            if (iv.contains(p)) {
                if (in_union[p]) throw Error("intervals overlap at point " + m.name(p));
                in_union[p] = 1;
            }
    // The union formula needs every finite endpoint to lie outside the union
    // (the paper's normalization of a disjoint interval family).
    for (const auto& iv : intervals)
        for (auto e : {iv.lower, iv.upper})
            if (e && in_union[*e])
                throw Error("interval endpoint " + m.name(*e) + " lies inside another interval");
    if (std::accumulate(in_union.begin(), in_union.end(), 0) == n)
        throw Error("complement of the interval union is empty");

    Rat sum(0);
    for (const auto& iv : intervals) {
        if (!iv.contains(i)) continue;  // d(i, M \ I) = 0
        Rat best(1);
        for (int p = 0; p < n; ++p)
            if (!iv.contains(p)) best = std::min(best, m.dist(i, p));
        sum += best;
    }
    return sum;
}

bool convexity_check_four_points(const FiniteCyclicOrder& c, int w, int x, int y, int z) {
    for (int v : {w, x, y, z}) check_index(v, c.size());
    // (w,x,y,z) in cyclic order means ceq holds on every ascending index
    // triple (rotations then follow from cyclicity).
    if (!(c.ceq(w, x, y) && c.ceq(w, x, z) && c.ceq(w, y, z) && c.ceq(x, y, z)))
        throw Error("tuple is not in cyclic order");
    const bool side = c.dist(w, y) >= std::min(c.dist(w, x), c.dist(w, z));
    const bool diag = std::max(c.dist(w, y), c.dist(x, z)) >= d_delta(c, y, z);
    return side && diag;
}

}  // namespace mot
