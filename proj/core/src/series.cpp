#include "mot/series.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mot {

TruncSeries series_normalize(std::vector<std::pair<Rat, Rat>> terms) {
    std::map<Rat, Rat> merged;
    for (auto& [e, c] : terms) {
        if (e < 0) throw Error("series exponent must be >= 0");
        if (denominator(e) > kExponentDenomCap)
            throw Error("series exponent denominator exceeds cap " +
                        std::to_string(kExponentDenomCap));
        merged[e] += c;
    }
    TruncSeries out;
    for (auto& [e, c] : merged)
        if (c != 0) out.terms.emplace_back(e, c);
    return out;
}

TruncSeries series_from_const(const Rat& c) {
    return series_normalize({{Rat(0), c}});
}

TruncSeries series_monomial(const Rat& exponent, const Rat& coeff) {
    return series_normalize({{exponent, coeff}});
}

TruncSeries series_add(const TruncSeries& a, const TruncSeries& b) {
    auto terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return series_normalize(std::move(terms));
}

TruncSeries series_neg(const TruncSeries& a) {
    TruncSeries out = a;
    for (auto& [e, c] : out.terms) c = -c;
    return out;
}

TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b) {
    return series_add(a, series_neg(b));
}

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b) {
    std::vector<std::pair<Rat, Rat>> terms;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) terms.emplace_back(ea + eb, ca * cb);
    return series_normalize(std::move(terms));
}

bool mag_leq(const Magnitude& a, const Magnitude& b) {
    if (a.is_zero) return true;
    if (b.is_zero) return false;
    return a.exponent >= b.exponent;
}

std::string mag_str(const Magnitude& m) {
    return m.is_zero ? "0" : "t^(" + rat_str(m.exponent) + ")";
}

Magnitude valuation(const TruncSeries& a) {
    if (a.is_zero()) return Magnitude::zero();
    return Magnitude::of(a.terms.front().first);
}

int sign(const TruncSeries& a) {
    if (a.is_zero()) return 0;
    return a.terms.front().second > 0 ? 1 : -1;
}

bool leq(const TruncSeries& a, const TruncSeries& b) {
    return sign(series_sub(b, a)) >= 0;
}

Magnitude D_pred(const TruncSeries& x, const TruncSeries& y) {
    const Magnitude vx = valuation(x), vy = valuation(y);
    if (mag_leq(vy, vx)) return Magnitude::zero();  // v(x) <= v(y): x divides y
    return vy;
}

Magnitude D_pred_bruteforce(const TruncSeries& x, const TruncSeries& y) {
    std::vector<TruncSeries> witnesses{TruncSeries{}};
    for (const auto& [ex, cx] : x.terms)
        for (const auto& [ey, cy] : y.terms)
            if (ey >= ex) witnesses.push_back(series_monomial(ey - ex, cy / cx));
    Magnitude best = valuation(y);  // z = 0
    for (const auto& z : witnesses) {
        const Magnitude m = valuation(series_sub(y, series_mul(x, z)));
        if (mag_leq(m, best)) best = m;
    }
    return best;
}

namespace {

std::string exponent_name(const Rat& e) {
    std::string s = "v" + rat_str(e);
    for (char& ch : s)
        if (ch == '/') ch = '_';
        else if (ch == '-') ch = 'm';
    return s;
}

// Monotone decreasing rescale: sorted exponents v_1 < ... < v_k map to
// k/(k+1) > ... > 1/(k+1).
std::map<Rat, Rat> exponent_rescale(std::vector<Rat> exps) {
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    const int k = static_cast<int>(exps.size());
    std::map<Rat, Rat> out;
    for (int i = 0; i < k; ++i) out[exps[i]] = Rat(k - i, k + 1);
    return out;
}

}  // namespace

FiniteMetricOrder value_order_export(const std::vector<TruncSeries>& elements) {
    std::vector<Rat> vals;
    for (const auto& e : elements) {
        if (e.is_zero()) throw Error("value_order_export: zero element");
        vals.push_back(valuation(e).exponent);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    const auto rescale = exponent_rescale(vals);
    const int n = static_cast<int>(vals.size());
    std::vector<std::string> names;
    for (const Rat& v : vals) names.push_back(exponent_name(v));
    std::vector<std::vector<Rat>> dist(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            // D of the pair depends only on the smaller valuation
            dist[i][j] = dist[j][i] = rescale.at(std::min(vals[i], vals[j]));
    return FiniteMetricOrder(std::move(names), std::move(dist));
}

ProjPoint proj_normalize(TruncSeries x, TruncSeries xs) {
    if (x.is_zero() && xs.is_zero())
        throw Error("proj_normalize: both coordinates are zero");
    const Magnitude vx = valuation(x), vxs = valuation(xs);
    Rat shift;
    if (vxs.is_zero() || (!vx.is_zero() && vx.exponent < vxs.exponent))
        shift = vx.exponent;
    else
        shift = vxs.exponent;
    auto shift_series = [&](TruncSeries& s) {
        std::vector<std::pair<Rat, Rat>> terms;
        for (const auto& [e, c] : s.terms) terms.emplace_back(e - shift, c);
        s = series_normalize(std::move(terms));
    };
    shift_series(x);
    shift_series(xs);
    const TruncSeries& lead =
        (!x.is_zero() && x.terms.front().first == 0) ? x : xs;
    if (sign(lead) < 0) {
        x = series_neg(x);
        xs = series_neg(xs);
    }
    return ProjPoint{std::move(x), std::move(xs)};
}

bool proj_is_normalized(const ProjPoint& p) {
    auto at_zero = [](const TruncSeries& s) {
        return !s.is_zero() && s.terms.front().first == 0;
    };
    if (!at_zero(p.x) && !at_zero(p.xs)) return false;
    const TruncSeries& lead = at_zero(p.x) ? p.x : p.xs;
    return sign(lead) > 0;
}

namespace {

void require_normalized(const ProjPoint& p, const char* who) {
    if (!proj_is_normalized(p)) throw Error(std::string(who) + ": point not normalized");
}

TruncSeries cross(const ProjPoint& p, const ProjPoint& q) {
    return series_sub(series_mul(p.x, q.xs), series_mul(p.xs, q.x));
}

}  // namespace

Magnitude proj_distance(const ProjPoint& p, const ProjPoint& q) {
    require_normalized(p, "proj_distance");
    require_normalized(q, "proj_distance");
    return valuation(cross(p, q));
}

bool proj_ceq(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r) {
    return sign(series_mul(series_mul(cross(p, q), cross(q, r)), cross(r, p))) >= 0;
}

Magnitude proj_dceq(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r) {
    if (proj_ceq(p, q, r)) return Magnitude::zero();
    // out of order: all three points are distinct, exponents finite
    const Rat e1 = proj_distance(p, q).exponent;
    const Rat e2 = proj_distance(q, r).exponent;
    const Rat e3 = proj_distance(r, p).exponent;
    return Magnitude::of(std::max({e1, e2, e3}));
}

Magnitude proj_phi(const ProjPoint& p, const ProjPoint& q, const ProjPoint& r) {
    if (proj_ceq(p, q, r)) return Magnitude::zero();
    const Rat e1 = proj_distance(p, q).exponent;
    const Rat e2 = proj_distance(q, r).exponent;
    const Rat e3 = proj_distance(r, p).exponent;
    return Magnitude::of((e1 + e2 + e3) / 3);
}

Magnitude signed_norm(const TruncSeries& u) {
    if (sign(u) >= 0) return Magnitude::zero();
    const TruncSeries minus_one = series_from_const(Rat(-1));
    if (leq(minus_one, u)) return valuation(u);  // -1 <= u < 0
    return Magnitude::of(-valuation(u).exponent);  // u < -1: |u|^{-1}
}

ProjPoint proj_density_witness(const ProjPoint& p, const ProjPoint& q,
                               const Rat& target_exponent) {
    require_normalized(p, "proj_density_witness");
    require_normalized(q, "proj_density_witness");
    const Magnitude d = proj_distance(p, q);
    if (!d.is_zero && target_exponent <= d.exponent)
        throw Error("proj_density_witness: target must be a strictly smaller distance");
    if (d.is_zero) throw Error("proj_density_witness: points coincide");
    // ensure the second coordinate is a unit, inverting both points if needed
    // ([x : xs] -> [xs : x] is an isometry of the projective line)
    const bool invert = valuation(p.xs).is_zero || valuation(p.xs).exponent != 0;
    const ProjPoint pp = invert ? proj_normalize(p.xs, p.x) : p;
    const ProjPoint qq = invert ? proj_normalize(q.xs, q.x) : q;
    for (int s : {1, -1}) {
        const TruncSeries bump = series_mul(series_monomial(target_exponent, Rat(s)), pp.xs);
        ProjPoint cc = proj_normalize(series_add(pp.x, bump), pp.xs);
        ProjPoint c = invert ? proj_normalize(cc.xs, cc.x) : cc;
        if (proj_distance(p, c) == Magnitude::of(target_exponent) && proj_ceq(p, c, q))
            return c;
    }
    throw Error("proj_density_witness: construction failed verification");
}

FiniteCyclicOrder proj_export(const std::vector<ProjPoint>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<Rat> exps;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Magnitude m = proj_distance(points[i], points[j]);
            if (m.is_zero) throw Error("proj_export: duplicate points");
            exps.push_back(m.exponent);
        }
    const auto rescale = exponent_rescale(exps);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("P" + std::to_string(i));
    std::vector<std::vector<Rat>> dist(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] =
                rescale.at(proj_distance(points[i], points[j]).exponent);
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (proj_ceq(points[i], points[j], points[k]))
                    triples.push_back({i, j, k});
    return FiniteCyclicOrder(std::move(names), std::move(dist), triples);
}

std::string series_str(const TruncSeries& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : a.terms) {
        if (!first) out << " + ";
        first = false;
        out << rat_str(c) << "*t^(" << rat_str(e) << ")";
    }
    return out.str();
}

TruncSeries series_parse(const std::string& text) {
    std::string compact;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch))) compact += ch;
    if (compact.empty()) throw Error("series_parse: empty literal");
    if (compact == "0") return TruncSeries{};
    std::vector<std::pair<Rat, Rat>> terms;
    std::size_t pos = 0;
    while (pos < compact.size()) {
        // terms are joined by '+'; negative coefficients carry their own sign
        std::size_t next = compact.find('+', pos + 1);
        if (next == std::string::npos) next = compact.size();
        const std::string piece = compact.substr(pos, next - pos);
        const auto star = piece.find("*t^(");
        Rat coeff, expo;
        if (star == std::string::npos) {
            if (piece.rfind("t^(", 0) == 0 && piece.back() == ')') {
                coeff = 1;
                const auto ev = rat_parse(piece.substr(3, piece.size() - 4));
                if (!ev) throw Error("series_parse: bad exponent in " + piece);
                expo = *ev;
            } else {
                const auto cv = rat_parse(piece);
                if (!cv) throw Error("series_parse: bad term " + piece);
                coeff = *cv;
                expo = 0;
            }
        } else {
            const auto cv = rat_parse(piece.substr(0, star));
            if (!cv) throw Error("series_parse: bad coefficient in " + piece);
            coeff = *cv;
            if (piece.back() != ')') throw Error("series_parse: bad term " + piece);
            const auto ev = rat_parse(piece.substr(star + 4, piece.size() - star - 5));
            if (!ev) throw Error("series_parse: bad exponent in " + piece);
            expo = *ev;
        }
        terms.emplace_back(expo, coeff);
        pos = next + 1;
    }
    return series_normalize(std::move(terms));
}

std::string proj_str(const ProjPoint& p) {
    return "[" + series_str(p.x) + " : " + series_str(p.xs) + "]";
}

ProjPoint proj_parse(const std::string& text) {
    const auto lb = text.find('[');
    const auto rb = text.rfind(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb)
        throw Error("proj_parse: literal must be wrapped in [ ]");
    const std::string body = text.substr(lb + 1, rb - lb - 1);
    const auto colon = body.find(':');
    if (colon == std::string::npos) throw Error("proj_parse: missing ':'");
    return proj_normalize(series_parse(body.substr(0, colon)),
                          series_parse(body.substr(colon + 1)));
}

}  // namespace mot
