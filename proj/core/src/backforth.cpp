#include "mot/backforth.hpp"

#include <algorithm>

#include "mot/checks.hpp"

namespace mot {

namespace {

// Extension defect of (a + new_a, b + cand) computed against the target's
// real order, regardless of the search orientation.
Rat ext_defect(const Tuple& a, const std::vector<int>& b, const ExtendTarget& t,
               int new_a, int cand, bool ordered) {
    const FiniteMetricOrder& M = *a.structure;
    std::vector<int> ai = a.idx;
    ai.push_back(new_a);
    std::vector<int> bi = b;
    bi.push_back(cand);
    Rat best(0);
    for (std::size_t i = 0; i < ai.size(); ++i)
        for (std::size_t j = i + 1; j < ai.size(); ++j) {
            const Rat dM = M.dist(ai[i], ai[j]);
            const Rat dN = t.dist(bi[i], bi[j]);
            best = std::max(best, rat_abs(dM - dN));
            if (!ordered) continue;
            const Rat rM1 = ai[i] <= ai[j] ? Rat(0) : dM;
            const Rat rM2 = ai[j] <= ai[i] ? Rat(0) : dM;
            const bool eqN = bi[i] == bi[j];
            const Rat rN1 = (eqN || t.less(bi[i], bi[j])) ? Rat(0) : dN;
            const Rat rN2 = (eqN || t.less(bi[j], bi[i])) ? Rat(0) : dN;
            best = std::max({best, rat_abs(rM1 - rN1), rat_abs(rM2 - rN2)});
        }
    return best;
}

bool guard_ok(const Rat& dM, const Rat& dN, const Rat& g) {
    if (dM == 0 && dN == 0) return true;
    if (dM == 0 || dN == 0) return false;
    const Rat ratio = dM / dN;
    return ratio < g && ratio > 1 / g;
}

// A rational strictly inside (lo, hi) intersected with (0,1], avoiding the
// punctures. The right end is closed exactly when the raw window reaches past
// 1. Prefers `preferred`, then 1 when admissible, then subinterval midpoints.
std::optional<Rat> pick_rational(Rat lo, Rat hi, const std::vector<Rat>& punct,
                                 const Rat& preferred) {
    lo = std::max(lo, Rat(0));
    bool hi_closed = false;
    if (hi > 1) {
        hi = 1;
        hi_closed = true;
    }
    if (hi < lo || (hi == lo && !hi_closed)) return std::nullopt;
    auto inside = [&](const Rat& x) {
        if (!(x > lo && (x < hi || (hi_closed && x == hi)))) return false;
        return std::find(punct.begin(), punct.end(), x) == punct.end();
    };
    if (inside(preferred)) return preferred;
    if (hi_closed && inside(hi)) return hi;
    std::vector<Rat> bounds{lo, hi};
    for (const Rat& p : punct)
        if (p > lo && p < hi) bounds.push_back(p);
    std::sort(bounds.begin(), bounds.end());
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        if (bounds[i] < bounds[i + 1]) {
            const Rat mid = (bounds[i] + bounds[i + 1]) / 2;
            if (inside(mid)) return mid;
        }
    return std::nullopt;
}

void check_pre(const Tuple& a, const std::vector<int>& b, const ExtendTarget& t,
               const Rat& eps, bool ordered) {
    if (!a.structure) throw Error("extend_step: tuple has no structure");
    if (a.idx.size() != b.size()) throw Error("extend_step: tuple size mismatch");
    if (eps <= 0) throw Error("extend_step: eps must be positive");
    for (int i : a.idx)
        if (i < 0 || i >= a.structure->size()) throw Error("extend_step: index out of range");
    for (int i : b)
        if (i < 0 || i >= t.point_count()) throw Error("extend_step: target index out of range");
    if (!a.idx.empty()) {
        // seed must already be epsilon-(order-)isometric
        Tuple head{a.structure, {a.idx.begin(), a.idx.end() - 1}};
        std::vector<int> bh(b.begin(), b.end() - 1);
        if (ext_defect(head, bh, t, a.idx.back(), b.back(), ordered) >= eps)
            throw Error("extend_step: seed tuples are not eps-isometric");
    }
}

}  // namespace

std::optional<int> USTarget::create(int anchor, const Rat& rho, Side side) {
    USPoint p = us_make_at(points_[anchor], rho, side);
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] == p) return static_cast<int>(i);
    points_.push_back(std::move(p));
    return static_cast<int>(points_.size()) - 1;
}

std::optional<int> USTarget::any_point() {
    if (points_.empty()) points_.push_back(USPoint{});
    return 0;
}

Rat iso_defect(const Tuple& a, const Tuple& b) {
    if (!a.structure || !b.structure) throw Error("iso_defect: tuple has no structure");
    if (a.idx.size() != b.idx.size()) throw Error("iso_defect: tuple size mismatch");
    Rat best(0);
    for (std::size_t i = 0; i < a.idx.size(); ++i)
        for (std::size_t j = i + 1; j < a.idx.size(); ++j)
            best = std::max(best, rat_abs(a.structure->dist(a.idx[i], a.idx[j]) -
                                          b.structure->dist(b.idx[i], b.idx[j])));
    return best;
}

Rat order_iso_defect(const Tuple& a, const Tuple& b) {
    if (!a.structure || !b.structure)
        throw Error("order_iso_defect: tuple has no structure");
    if (a.idx.size() != b.idx.size()) throw Error("order_iso_defect: tuple size mismatch");
    if (mlo_defect(*a.structure) != 0 || mlo_defect(*b.structure) != 0)
        throw Error("order_iso_defect: structures must satisfy the order axioms exactly");
    FiniteTarget t(*b.structure);
    if (a.idx.empty()) return Rat(0);
    Tuple head{a.structure, {a.idx.begin(), a.idx.end() - 1}};
    std::vector<int> bh(b.idx.begin(), b.idx.end() - 1);
    return ext_defect(head, bh, t, a.idx.back(), b.idx.back(), /*ordered=*/true);
}

ExtendResult extend_step(const Tuple& a, const std::vector<int>& b, ExtendTarget& target,
                         int new_point, const Rat& eps, const Rat* guard) {
    check_pre(a, b, target, eps, /*ordered=*/false);
    const FiniteMetricOrder& M = *a.structure;

    auto accept = [&](int cand) {
        if (ext_defect(a, b, target, new_point, cand, /*ordered=*/false) >= eps)
            return false;
        if (guard)
            for (std::size_t t = 0; t < b.size(); ++t)
                if (!guard_ok(M.dist(a.idx[t], new_point), target.dist(b[t], cand), *guard))
                    return false;
        return true;
    };

    if (a.idx.empty()) {
        if (auto p = target.any_point(); p && accept(*p)) return {*p, {}};
        return {std::nullopt, {"empty", Rat(0), Rat(1), {}}};
    }

    // anchor = nearest tuple entry, smallest index on ties
    int i0 = 0;
    for (std::size_t t = 1; t < a.idx.size(); ++t)
        if (M.dist(a.idx[t], new_point) < M.dist(a.idx[i0], new_point))
            i0 = static_cast<int>(t);
    const Rat dm = M.dist(a.idx[i0], new_point);
    const Rat lo = dm - eps, hi = dm + eps;
    std::vector<Rat> punct;
    for (int bt : b) punct.push_back(target.dist(bt, b[i0]));

    for (int c = 0; c < target.point_count(); ++c) {
        const Rat dc = target.dist(b[i0], c);
        if (dc > lo && dc < hi &&
            std::find(punct.begin(), punct.end(), dc) == punct.end() && accept(c))
            return {c, {}};
    }
    if (target.can_create())
        if (auto rho = pick_rational(lo, hi, punct, dm))
            if (auto c = target.create(b[i0], *rho, Side::above); c && accept(*c))
                return {*c, {}};
    // the punctured window is sufficient, not necessary: post-checked sweep
    for (int c = 0; c < target.point_count(); ++c)
        if (accept(c)) return {c, {}};
    return {std::nullopt,
            {"primary", std::max(lo, Rat(0)), std::min(hi, Rat(1)), punct}};
}

ExtendResult extend_step_ordered(const Tuple& a, const std::vector<int>& b,
                                 ExtendTarget& target, int new_point, const Rat& eps,
                                 const Rat* guard) {
    check_pre(a, b, target, eps, /*ordered=*/true);
    const FiniteMetricOrder& M = *a.structure;

    auto accept = [&](int cand) {
        if (ext_defect(a, b, target, new_point, cand, /*ordered=*/true) >= eps)
            return false;
        if (guard)
            for (std::size_t t = 0; t < b.size(); ++t)
                if (!guard_ok(M.dist(a.idx[t], new_point), target.dist(b[t], cand), *guard))
                    return false;
        return true;
    };

    if (a.idx.empty()) {
        if (auto p = target.any_point(); p && accept(*p)) return {*p, {}};
        return {std::nullopt, {"empty", Rat(0), Rat(1), {}}};
    }

    // repeated point: its existing partner extends with no defect change
    for (std::size_t t = 0; t < a.idx.size(); ++t)
        if (a.idx[t] == new_point && accept(b[t])) return {b[t], {}};

    // anchor = nearest of the two order-adjacent tuple neighbors; by the
    // ultrametric max rule no other tuple entry can be closer
    int pred = -1, succ = -1;
    for (std::size_t t = 0; t < a.idx.size(); ++t) {
        if (a.idx[t] < new_point) {
            if (pred < 0 || a.idx[t] > a.idx[pred]) pred = static_cast<int>(t);
        } else if (a.idx[t] > new_point) {
            if (succ < 0 || a.idx[t] < a.idx[succ]) succ = static_cast<int>(t);
        }
    }
    int i0;
    if (pred >= 0 && succ >= 0) {
        const Rat dp = M.dist(a.idx[pred], new_point);
        const Rat ds = M.dist(a.idx[succ], new_point);
        if (dp < ds)
            i0 = pred;
        else if (ds < dp)
            i0 = succ;
        else
            i0 = std::min(pred, succ);
    } else {
        i0 = pred >= 0 ? pred : succ;
    }
    const bool fwd = a.idx[i0] < new_point;  // orient so the new point is above

    auto lessM = [&](int x, int y) { return fwd ? x < y : y < x; };
    auto lessN = [&](int i, int j) { return fwd ? target.less(i, j) : target.less(j, i); };
    auto rN = [&](int i, int j) {
        return (i == j || lessN(i, j)) ? Rat(0) : target.dist(i, j);
    };
    const int bi0 = b[i0];
    const Rat dm = M.dist(a.idx[i0], new_point);
    const Side side = fwd ? Side::above : Side::below;

    auto try_in = [&](int anchor, const Rat& lo, const Rat& hi,
                      const std::vector<Rat>& punct,
                      const Rat& preferred) -> std::optional<int> {
        for (int c = 0; c < target.point_count(); ++c) {
            if (!lessN(anchor, c)) continue;
            const Rat dc = target.dist(anchor, c);
            if (dc > lo && dc < hi &&
                std::find(punct.begin(), punct.end(), dc) == punct.end() && accept(c))
                return c;
        }
        if (target.can_create())
            if (auto rho = pick_rational(lo, hi, punct, preferred))
                if (auto c = target.create(anchor, *rho, side); c && accept(*c)) return *c;
        return std::nullopt;
    };

    // primary window: distance window cut down by the ray values to the
    // entries below / above the anchor
    Rat L(0), R(2);
    for (std::size_t t = 0; t < a.idx.size(); ++t) {
        if (lessM(a.idx[t], a.idx[i0]))
            L = std::max(L, rN(b[t], bi0));
        else if (lessM(a.idx[i0], a.idx[t]))
            R = std::min(R, rN(b[t], bi0));
    }
    std::vector<Rat> punct0;
    for (int bt : b) punct0.push_back(target.dist(bt, bi0));
    const Rat lo1 = std::max(L, dm - eps), hi1 = std::min(R, dm + eps);
    if (auto c = try_in(bi0, lo1, hi1, punct0, dm)) return {*c, {}};
    ExtendFailure fail{"primary", std::max(lo1, Rat(0)), std::min(hi1, Rat(1)), punct0};

    // the window was empty or blocked; find the extremal entries on each side
    int jt = -1, lt = -1;
    for (std::size_t t = 0; t < a.idx.size(); ++t) {
        if (lessM(a.idx[t], a.idx[i0])) {
            const Rat r = rN(b[t], bi0);
            if (jt < 0 || r > rN(b[jt], bi0) ||
                (r == rN(b[jt], bi0) && lessN(b[jt], b[t])))
                jt = static_cast<int>(t);
        } else if (lessM(a.idx[i0], a.idx[t])) {
            const Rat r = rN(b[t], bi0);
            if (lt < 0 || r < rN(b[lt], bi0) ||
                (r == rN(b[lt], bi0) && lessN(b[t], b[lt])))
                lt = static_cast<int>(t);
        }
    }
    const Rat delta = jt >= 0 ? rN(b[jt], bi0) : Rat(0);
    const Rat rho = lt >= 0 ? rN(b[lt], bi0) : Rat(0);
    const bool reanchor = jt >= 0 && lt >= 0 && delta == rho && delta > 0 &&
                          lessN(b[jt], b[lt]) && dm >= eps;
    if (reanchor) {
        // both extremal rays coincide; anchor at the lower one instead, inside
        // the ball that separates it from the upper one
        const int anchor = b[jt];
        const Rat dmj = M.dist(a.idx[jt], new_point);
        const Rat lo = std::max(Rat(0), dmj - eps);
        const Rat hi = std::min(target.dist(b[jt], b[lt]), dmj + eps);
        std::vector<Rat> punct;
        for (int bt : b) punct.push_back(target.dist(bt, anchor));
        if (auto c = try_in(anchor, lo, hi, punct, dmj)) return {*c, {}};
        fail = {"reanchor", std::max(lo, Rat(0)), std::min(hi, Rat(1)), punct};
    } else {
        // place the witness closer to the anchor than everything else; the
        // order constraints then follow from the ultrametric inequality
        Rat mind(2);
        for (int bt : b) {
            const Rat dc = target.dist(bt, bi0);
            if (dc > 0) mind = std::min(mind, dc);
        }
        const Rat lo = std::max(Rat(0), dm - eps);
        const Rat hi = std::min(mind, dm + eps);
        if (auto c = try_in(bi0, lo, hi, {}, dm)) return {*c, {}};
        fail = {"near-anchor", std::max(lo, Rat(0)), std::min(hi, Rat(1)), {}};
    }
    // post-checked sweep over existing points (windows are sufficient only)
    for (int c = 0; c < target.point_count(); ++c)
        if (accept(c)) return {c, {}};
    return {std::nullopt, fail};
}

ExtendResult extend_step(const Tuple& a, const Tuple& b, int new_point, const Rat& eps) {
    if (!b.structure) throw Error("extend_step: tuple has no structure");
    FiniteTarget t(*b.structure);
    return extend_step(a, b.idx, t, new_point, eps);
}

ExtendResult extend_step_ordered(const Tuple& a, const Tuple& b, int new_point,
                                 const Rat& eps) {
    if (!b.structure) throw Error("extend_step_ordered: tuple has no structure");
    FiniteTarget t(*b.structure);
    return extend_step_ordered(a, b.idx, t, new_point, eps);
}

namespace {

Rat correlation_dis(const Correlation& r, bool ordered) {
    if (!r.M || !r.N) throw Error("correlation has no structures");
    std::vector<char> seenM(r.M->size(), 0), seenN(r.N->size(), 0);
    for (const auto& [i, j] : r.pairs) {
        if (i < 0 || i >= r.M->size() || j < 0 || j >= r.N->size())
            throw Error("correlation pair out of range");
        seenM[i] = seenN[j] = 1;
    }
    if (std::find(seenM.begin(), seenM.end(), 0) != seenM.end() ||
        std::find(seenN.begin(), seenN.end(), 0) != seenN.end())
        throw Error("correlation is not total and surjective");
    if (ordered && (mlo_defect(*r.M) != 0 || mlo_defect(*r.N) != 0))
        throw Error("ordered distortion needs structures satisfying the order axioms");
    Rat best(0);
    for (std::size_t s = 0; s < r.pairs.size(); ++s)
        for (std::size_t t = s + 1; t < r.pairs.size(); ++t) {
            const auto& [i1, j1] = r.pairs[s];
            const auto& [i2, j2] = r.pairs[t];
            const Rat dM = r.M->dist(i1, i2);
            const Rat dN = r.N->dist(j1, j2);
            best = std::max(best, rat_abs(dM - dN));
            if (!ordered) continue;
            const Rat rM1 = i1 <= i2 ? Rat(0) : dM;
            const Rat rM2 = i2 <= i1 ? Rat(0) : dM;
            const Rat rN1 = j1 <= j2 ? Rat(0) : dN;
            const Rat rN2 = j2 <= j1 ? Rat(0) : dN;
            best = std::max({best, rat_abs(rM1 - rN1), rat_abs(rM2 - rN2)});
        }
    return best;
}

}  // namespace

Rat dis_gh(const Correlation& r) { return correlation_dis(r, false); }
Rat dis_ogh(const Correlation& r) { return correlation_dis(r, true); }

CorrelationResult build_correlation(const FiniteMetricOrder& M, const FiniteMetricOrder& N,
                                    const Tuple& seed_a, const Tuple& seed_b,
                                    const Rat& eps, bool ordered) {
    if (seed_a.structure != &M || seed_b.structure != &N)
        throw Error("build_correlation: seed tuples must live in M and N");
    if (seed_a.idx.size() != seed_b.idx.size())
        throw Error("build_correlation: seed size mismatch");
    const Rat seed_defect = ordered ? order_iso_defect(seed_a, seed_b)
                                    : iso_defect(seed_a, seed_b);
    if (seed_defect >= eps)
        throw Error("build_correlation: seed tuples are not eps-isometric");

    // tightest multiplicative bound 1 + 2^-k admitting every seed ratio;
    // capped at k = 16 when all ratios are exactly 1
    Rat dev(1);
    bool feasible = true;
    for (std::size_t s = 0; s < seed_a.idx.size() && feasible; ++s)
        for (std::size_t t = s + 1; t < seed_a.idx.size(); ++t) {
            const Rat dM = M.dist(seed_a.idx[s], seed_a.idx[t]);
            const Rat dN = N.dist(seed_b.idx[s], seed_b.idx[t]);
            if ((dM == 0) != (dN == 0)) {
                feasible = false;
                break;
            }
            if (dM > 0) dev = std::max(dev, std::max(dM / dN, dN / dM));
        }
    Rat g(2);
    if (feasible) {
        int k = 16;
        auto bound = [](int kk) {
            return kk >= 0 ? Rat(1) + Rat(Int(1), Int(1) << kk)
                           : Rat(1) + Rat(Int(1) << (-kk), Int(1));
        };
        while (k > -64 && bound(k) <= dev) --k;
        g = bound(k);
        if (g <= dev) feasible = false;
    }
    if (!feasible)
        return {std::nullopt, {"guard", Rat(0), Rat(0), {}}, g};

    std::vector<int> mu = seed_a.idx, nu = seed_b.idx;
    FiniteTarget tgtM(M), tgtN(N);
    auto contains = [](const std::vector<int>& v, int x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    auto step = [&](const FiniteMetricOrder& src, std::vector<int>& here,
                    std::vector<int>& there, FiniteTarget& tgt, int p,
                    ExtendFailure& fail) {
        Tuple ta{&src, here};
        const ExtendResult r = ordered
                                   ? extend_step_ordered(ta, there, tgt, p, eps, &g)
                                   : extend_step(ta, there, tgt, p, eps, &g);
        if (!r.ok()) {
            fail = r.failure;
            return false;
        }
        here.push_back(p);
        there.push_back(*r.witness);
        return true;
    };

    int pm = 0, pn = 0;
    while (true) {
        while (pm < M.size() && contains(mu, pm)) ++pm;
        while (pn < N.size() && contains(nu, pn)) ++pn;
        if (pm >= M.size() && pn >= N.size()) break;
        ExtendFailure fail;
        if (pm < M.size() && !step(M, mu, nu, tgtN, pm, fail))
            return {std::nullopt, fail, g};
        if (pn < N.size() && !contains(nu, pn) && !step(N, nu, mu, tgtM, pn, fail))
            return {std::nullopt, fail, g};
    }
    Correlation c{&M, &N, {}};
    for (std::size_t i = 0; i < mu.size(); ++i) c.pairs.emplace_back(mu[i], nu[i]);
    return {c, {}, g};
}

Rat type_distance_gh(const Tuple& a, const Tuple& b) { return iso_defect(a, b); }
Rat type_distance_ogh(const Tuple& a, const Tuple& b) { return order_iso_defect(a, b); }

}  // namespace mot
