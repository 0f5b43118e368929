#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mot/structures.hpp"

namespace mot {

// Truncated generalized power series over Q with rational exponents >= 0 in
// strictly increasing order and nonzero coefficients; the zero series is the
// empty list. Exponent denominators are capped to bound normalization cost;
// exceeding the cap is a hard error, never a silent truncation.
inline constexpr int kExponentDenomCap = 64;

struct TruncSeries {
    std::vector<std::pair<Rat, Rat>> terms;  // (exponent, coefficient)
    bool operator==(const TruncSeries&) const = default;
    bool is_zero() const { return terms.empty(); }
};

// Sorts, merges equal exponents, drops zero coefficients; validates
// exponents >= 0 and the denominator cap.
TruncSeries series_normalize(std::vector<std::pair<Rat, Rat>> terms);

TruncSeries series_from_const(const Rat& c);
TruncSeries series_monomial(const Rat& exponent, const Rat& coeff);

TruncSeries series_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_neg(const TruncSeries& a);
TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b);

// An absolute value represented by its valuation exponent: smaller exponent
// means larger magnitude; the zero magnitude has exponent +inf. Exponents may
// go negative only through signed_norm's inverse case (documented there).
struct Magnitude {
    bool is_zero = true;  // |0|, exponent +inf
    Rat exponent{0};
    static Magnitude zero() { return {}; }
    static Magnitude of(Rat e) { return {false, std::move(e)}; }
    bool operator==(const Magnitude&) const = default;
};

// |a| <= |b| as magnitudes (reversed exponent order, zero smallest).
bool mag_leq(const Magnitude& a, const Magnitude& b);
std::string mag_str(const Magnitude& m);  // "0" or "t^(p/q)"

// Least exponent; zero magnitude for the zero series.
Magnitude valuation(const TruncSeries& a);
// Sign of the leading (smallest-exponent) coefficient; 0 for the zero series.
int sign(const TruncSeries& a);
// a <= b in the ordered field of series: sign(b - a) >= 0.
bool leq(const TruncSeries& a, const TruncSeries& b);

// Divisibility defect D(x,y) = inf_z |y - x z| over the valuation ring:
// zero magnitude when v(x) <= v(y), otherwise |y|.
Magnitude D_pred(const TruncSeries& x, const TruncSeries& y);
// Independent oracle: infimum of |y - x z| over the finite witness family of
// monomials built from exponent differences and coefficient ratios (plus 0).
Magnitude D_pred_bruteforce(const TruncSeries& x, const TruncSeries& y);

// The value order of a finite element set as a core structure: points are
// the distinct valuations in increasing order; d(a,b) depends only on the
// smaller valuation of the pair, remapped monotonically into (0,1] (sorted
// exponents v_1 < ... < v_k map to k/(k+1) > ... > 1/(k+1)). Every core
// axiom depends only on order, max/min and r + rbar = d, which the
// rescaling preserves; this is the single lossy boundary of the module.
FiniteMetricOrder value_order_export(const std::vector<TruncSeries>& elements);

// A point of the projective line in homogeneous coordinates, normalized so
// min(v(x), v(xs)) = 0 and the first valuation-zero coordinate has positive
// leading coefficient.
struct ProjPoint {
    TruncSeries x, xs;
    bool operator==(const ProjPoint&) const = default;
};

ProjPoint proj_normalize(TruncSeries x, TruncSeries xs);
bool proj_is_normalized(const ProjPoint& p);

// |x·y* - x*·y|; the zero magnitude iff the points are equal.
Magnitude proj_distance(const ProjPoint& p, const ProjPoint& q);

// Cyclic order of the projective line: sign of the homogenized product
// (x y* - y x*)(y z* - z y*)(z x* - x z*) >= 0.
bool proj_ceq(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r);

// Distance to the cyclic relation: zero magnitude when in order, otherwise
// the smallest pairwise distance (largest exponent).
Magnitude proj_dceq(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r);
// Geometric mean of the three pairwise distances when out of order, i.e. the
// arithmetic mean of the three exponents; dominates proj_dceq as a value
// since the mean exponent never exceeds the largest one.
Magnitude proj_phi(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r);

// Piecewise signed norm: 0 when u >= 0, |u| when -1 <= u < 0, |u|^{-1}
// (negated exponent) when u < -1. The third case leaves the valuation ring
// and is reachable only through projective coordinates.
Magnitude signed_norm(const TruncSeries& u);

// A point at exactly distance t^target from p, cyclically between p and q:
// c = [x + t^target * xs : xs] after the inversion isometry [x:xs] -> [xs:x]
// when needed to make the second coordinate a unit; the sign of the added
// monomial is chosen so ceq(p,c,q) holds. Requires target strictly greater
// than the distance exponent of (p,q). Postconditions are re-verified.
ProjPoint proj_density_witness(const ProjPoint& p, const ProjPoint& q,
                               const Rat& target_exponent);

// Cyclic structure of distinct projective points with proj_ceq and distances
// remapped as in value_order_export.
FiniteCyclicOrder proj_export(const std::vector<ProjPoint>& points);

// Literals: series `3/1*t^(1/2) + -1/1*t^(1/1)` (zero series prints "0");
// projective point `[<series> : <series>]`.
std::string series_str(const TruncSeries& a);
TruncSeries series_parse(const std::string& text);
std::string proj_str(const ProjPoint& p);
ProjPoint proj_parse(const std::string& text);

}  // namespace mot
