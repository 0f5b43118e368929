#include "mot/regulated.hpp"

#include <algorithm>

namespace mot {

namespace {

void check_pred(const SampledPredicate& f, const char* who) {
    if (!f.structure) throw Error(std::string(who) + ": predicate has no structure");
    if (static_cast<int>(f.values.size()) != f.structure->size())
        throw Error(std::string(who) + ": value count does not match structure");
    for (const Rat& v : f.values)
        if (v < 0 || v > 1) throw Error(std::string(who) + ": value outside [0,1]");
}

Int rat_floor_nonneg(const Rat& q) { return numerator(q) / denominator(q); }

}  // namespace

SampledPredicate make_pred(const FiniteMetricOrder& m, std::vector<Rat> values) {
    SampledPredicate f{&m, std::move(values)};
    check_pred(f, "make_pred");
    return f;
}

Partition min_partition(const SampledPredicate& f, const Rat& eps) {
    check_pred(f, "min_partition");
    if (eps < 0) throw Error("min_partition: eps must be nonnegative");
    Partition out;
    const int n = f.structure->size();
    int start = 0;
    while (start < n) {
        Rat lo = f.values[start], hi = f.values[start];
        int end = start;
        while (end + 1 < n) {
            const Rat nlo = std::min(lo, f.values[end + 1]);
            const Rat nhi = std::max(hi, f.values[end + 1]);
            if (nhi - nlo > eps) break;
            lo = nlo;
            hi = nhi;
            ++end;
        }
        out.blocks.emplace_back(start, end);
        start = end + 1;
    }
    return out;
}

SampledPredicate grid_step_approx(const SampledPredicate& f, int n) {
    check_pred(f, "grid_step_approx");
    if (n < 1) throw Error("grid_step_approx: n must be positive");
    SampledPredicate g{f.structure, {}};
    for (const Rat& v : f.values) {
        const Int j = rat_floor_nonneg(v * n + Rat(1, 2));  // nearest grid index
        g.values.push_back(Rat(j, Int(n)));
    }
    return g;
}

MonotoneDecomposition monotone_decomposition(const SampledPredicate& f, int m) {
    check_pred(f, "monotone_decomposition");
    if (m < 0) throw Error("monotone_decomposition: m must be nonnegative");
    const int n = f.structure->size();
    MonotoneDecomposition out;
    SampledPredicate phi = f;
    for (int k = 0; k < m; ++k) {
        SampledPredicate psi{f.structure, std::vector<Rat>(n)};
        Rat running(0);
        for (int i = 0; i < n; ++i) {
            running = i == 0 ? phi.values[0] : std::max(running, phi.values[i]);
            psi.values[i] = running;
        }
        SampledPredicate next{f.structure, std::vector<Rat>(n)};
        for (int i = 0; i < n; ++i) next.values[i] = psi.values[i] - phi.values[i];
        out.psi.push_back(std::move(psi));
        phi = std::move(next);
    }
    out.residual = std::move(phi);
    return out;
}

StepMap modulus_envelope(const SampledPredicate& phi, const SampledPredicate& psi,
                         int a) {
    check_pred(phi, "modulus_envelope");
    check_pred(psi, "modulus_envelope");
    if (phi.structure != psi.structure)
        throw Error("modulus_envelope: predicates on different structures");
    const FiniteMetricOrder& M = *phi.structure;
    if (a < 0 || a >= M.size()) throw Error("modulus_envelope: point out of range");
    if (phi.values[a] != psi.values[a])
        throw Error("modulus_envelope: pieces disagree at the base point");
    std::vector<std::pair<Rat, Rat>> samples;  // (distance, pair deviation)
    for (int x = 0; x < M.size(); ++x)
        samples.emplace_back(M.dist(x, a), rat_abs(phi.values[x] - phi.values[a]) +
                                               rat_abs(psi.values[x] - psi.values[a]));
    std::sort(samples.begin(), samples.end());
    StepMap alpha;
    alpha.knots.emplace_back(Rat(0), Rat(0));
    Rat running(0);
    for (const auto& [t, v] : samples) {
        running = std::max(running, v);
        if (alpha.knots.back().first == t)
            alpha.knots.back().second = running;
        else if (running > alpha.knots.back().second)
            alpha.knots.emplace_back(t, running);
    }
    return alpha;
}

namespace {

StepMap clamp_at_one(StepMap s) {
    for (auto& [t, v] : s.knots) v = std::min(v, Rat(1));
    // collapse knots made redundant by the clamp
    StepMap out;
    for (auto& k : s.knots)
        if (out.knots.empty() || k.second != out.knots.back().second)
            out.knots.push_back(k);
    return out;
}

std::string single_free_var(const FormulaPtr& phi, const FormulaPtr& psi,
                            const char* who) {
    std::set<std::string> vars = phi->free_vars();
    for (const auto& v : psi->free_vars()) vars.insert(v);
    if (vars.size() > 1) throw Error(std::string(who) + ": more than one free variable");
    return vars.empty() ? "x" : *vars.begin();
}

}  // namespace

FormulaPtr glue(const FormulaPtr& phi, const FormulaPtr& psi, const std::string& point,
                const StepMap& alpha, const std::string& mod_name, ModulusTable& moduli,
                const EvalContext& ctx) {
    if (!ctx.linear) throw Error("glue: needs a linear structure");
    if (!phi->quantifier_free() || !psi->quantifier_free())
        throw Error("glue: pieces must be quantifier-free");
    if (!alpha.is_nondecreasing()) throw Error("glue: modulus must be nondecreasing");
    const auto a = ctx.linear->index_of(point);
    if (!a) throw Error("glue: unknown point " + point);
    const std::string var = single_free_var(phi, psi, "glue");
    Env env{{var, *a}};
    if (evaluate(phi, ctx, env) != evaluate(psi, ctx, env))
        throw Error("glue: pieces disagree at " + point);
    auto [it, inserted] = moduli.emplace(mod_name, clamp_at_one(alpha));
    if (!inserted && it->second.knots != clamp_at_one(alpha).knots)
        throw Error("glue: modulus name already bound to a different map");
    auto below = f_mod(mod_name, f_atom(AtomKind::r, {t_var(var), t_param(point)}));
    auto above = f_mod(mod_name, f_atom(AtomKind::r, {t_param(point), t_var(var)}));
    return f_min(f_plus(phi, below), f_plus(psi, above));
}

SynthesisResult qf_synthesis(const SampledPredicate& f, const Rat& eps, bool subdivide) {
    check_pred(f, "qf_synthesis");
    if (eps <= 0) throw Error("qf_synthesis: eps must be positive");
    const FiniteMetricOrder& M = *f.structure;
    SynthesisResult out;
    if (M.size() == 0) {
        out.formula = f_const(Rat(0));
        return out;
    }
    const Partition part = min_partition(f, eps);
    FormulaPtr h = f_const(f.values[part.blocks[0].first]);
    for (std::size_t i = 1; i < part.blocks.size(); ++i) {
        const int b = part.blocks[i].first;
        // threshold = minimal gap distance from the breakpoint downwards, so
        // the selector is exactly 1 below the block and 0 from it onwards
        Rat delta = M.dist(0, b);
        for (int x = 1; x < b; ++x) delta = std::min(delta, M.dist(x, b));
        StepMap sigma;
        sigma.knots.emplace_back(Rat(0), Rat(0));
        if (subdivide)
            for (int k = 1; k < 4; ++k)
                sigma.knots.emplace_back(delta * k / 4, Rat(k, 4));
        sigma.knots.emplace_back(delta, Rat(1));
        const std::string name = "sel" + std::to_string(i);
        out.moduli.emplace(name, std::move(sigma));
        auto u = f_mod(name, f_atom(AtomKind::r, {t_param(M.name(b)), t_var(out.var)}));
        h = f_max(f_min(h, u), f_tsub(f_const(f.values[b]), u));
    }
    out.formula = std::move(h);
    return out;
}

}  // namespace mot
