#pragma once

#include <vector>

#include "mot/structures.hpp"

namespace mot {

// Exhaustive axiom sweeps are O(n^3)-O(n^4); past this many points they must
// be requested explicitly via allow_large.
inline constexpr int kExhaustiveSweepCap = 64;

// Distance from point i to the downward ray (-inf, j]: 0 if i <= j in the
// order, else dist(i,j). Satisfies ray(i,j) + ray(j,i) = dist(i,j) and
// min(ray(i,j), ray(j,i)) = 0.
Rat ray(const FiniteMetricOrder& m, int i, int j);

// Distance from the pair (i,j) to the diagonal: min_z max(d(i,z), d(j,z)).
Rat d_delta(const FiniteMetricOrder& m, int i, int j);
Rat d_delta(const FiniteCyclicOrder& c, int i, int j);

// Distance from (i,j) to the order relation: 0 if i <= j, else d_delta(i,j).
Rat d_leq(const FiniteMetricOrder& m, int i, int j);

// The four metric-linear-order axiom values, evaluated exhaustively:
//   a1 = sup |(r(x,y) + r(y,x)) - d(x,y)|
//   a2 = sup min(r(x,y), r(y,x))
//   a3 = sup r(x,z) tsub (r(x,y) + r(y,z))
//   a4 = sup |d_leq(x,y) - inf_z max(r(x,z), r(z,y))|
// a4 compares the closed form against the brute-force inf-max so that it
// measures internal consistency rather than being trivially zero.
struct MloAxiomValues {
    Rat a1, a2, a3, a4;
    Rat max() const;
};
MloAxiomValues mlo_axiom_values(const FiniteMetricOrder& m, bool allow_large = false);

// 0 iff m is a metric linear order (every open ball order-convex).
Rat mlo_defect(const FiniteMetricOrder& m, bool allow_large = false);

// Distance-density defect at a finite resolution: max over points a and grid
// values p = k/resolution of the two one-sided min_y |ray - p| terms. Finite
// structures always have positive defect; this is a measurement, not a
// pass/fail test.
Rat mdlo_defect(const FiniteMetricOrder& m, long resolution, bool allow_large = false);

// sup over triples of d(x,z) tsub max(d(x,y), d(y,z)); 0 iff ultrametric.
Rat ultrametric_defect(const FiniteMetricOrder& m, bool allow_large = false);
Rat ultrametric_defect(const FiniteCyclicOrder& c, bool allow_large = false);

// On ultrametric linear orders, d(a,c) = max(d(a,b), d(b,c)) for a < b < c.
// Requires mlo_defect = 0 and ultrametric_defect = 0 (throws otherwise).
Rat ordered_max_rule_defect(const FiniteMetricOrder& m, bool allow_large = false);

// Interprets the linear order as a cyclic order:
//   ceq(x,y,z) iff some cyclic permutation of (x,y,z) is nondecreasing.
// Requires mlo_defect = 0.
FiniteCyclicOrder roll_up(const FiniteMetricOrder& m, bool allow_large = false);

// Distance from the triple (i,j,k) to the ceq relation: 0 if ceq(i,j,k),
// else min of the three pairwise d_delta values.
Rat d_ceq(const FiniteCyclicOrder& c, int i, int j, int k);

// The metric-cyclic-order axiom values. Axioms (1)-(2) (d_ceq is a distance
// predicate) hold by construction because d_ceq is computed from the ceq
// relation; the values below are the content-bearing axioms (3)-(7):
//   cyclicity     = sup |d_ceq(x,y,z) - d_ceq(y,z,x)|
//   antisym_refl  = sup |(d_ceq(x,y,z) + d_ceq(y,x,z)) - d_delta3(x,y,z)|
//   totality      = sup min(d_ceq(x,y,z), d_ceq(y,x,z))
//   transitivity  = sup over ceq(w,x,z) and all y of
//                   min(d_ceq(w,x,y), d_ceq(w,y,z))
//   convexity     = sup min(d_ceq(w,y,x), d_ceq(w,z,y),
//                           min(d(w,x), d(w,z)) tsub d(w,y))
struct McoAxiomValues {
    Rat cyclicity, antisym_refl, totality, transitivity, convexity;
    Rat max() const;
};
McoAxiomValues mco_axiom_values(const FiniteCyclicOrder& c, bool allow_large = false);

// 0 iff c is a metric cyclic order (every open ball order-convex).
Rat mco_defect(const FiniteCyclicOrder& c, bool allow_large = false);

// Recovers a linear order whose roll-up has the same ceq relation and the
// same metric. Requires mco_defect = 0 and ultrametric_defect = 0 (the
// geodesic-circle metric shows ultrametricity is necessary). Picks the
// lexicographically first pair (a,b) realizing the maximum distance D,
// orders the open ball B_D(a) by x <= y iff ceq(x,y,b), the complement by
// x <= y iff ceq(x,y,a), and concatenates ball-then-complement.
FiniteMetricOrder unroll(const FiniteCyclicOrder& c, bool allow_large = false);

// Cyclic distance-density defect at a finite resolution; measurement
// semantics as in mdlo_defect. Pairs at distance 0 are skipped (vacuous).
Rat udco_density_defect(const FiniteCyclicOrder& c, long resolution,
                        bool allow_large = false);

// Distance from point i to the complement D of a union of open, pairwise
// disjoint order intervals, computed as sum over intervals of
// d(i, M \ I). Interval endpoints must not lie inside any interval (this is
// the normalization the union formula needs); D must be nonempty.
Rat dist_to_interval_complement(const FiniteMetricOrder& m,
                                const std::vector<IntervalSpec>& intervals, int i);

// For (w,x,y,z) in cyclic order checks both quadrilateral inequalities:
//   d(w,y) >= min(d(w,x), d(w,z))
//   max(d(w,y), d(x,z)) >= d_delta(y,z)
// Throws if the tuple is not in cyclic order.
bool convexity_check_four_points(const FiniteCyclicOrder& c, int w, int x, int y, int z);

}  // namespace mot
