#include "mot/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "mot/checks.hpp"

namespace mot {

Rat StepMap::operator()(const Rat& t) const {
    if (knots.empty() || knots.front().first != 0)
        throw Error("step map must have a knot at 0");
    Rat out = knots.front().second;
    for (const auto& [threshold, value] : knots) {
        if (threshold > t) break;
        out = value;
    }
    return out;
}

bool StepMap::is_nondecreasing() const {
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (knots[i].first <= knots[i - 1].first || knots[i].second < knots[i - 1].second)
            return false;
    return !knots.empty() && knots.front().first == 0;
}

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    Formula f;
    f.kind = k;
    f.children = {std::move(a), std::move(b)};
    return make(std::move(f));
}

FormulaPtr quantifier(Formula::Kind k, std::string var, FormulaPtr body) {
    Formula f;
    f.kind = k;
    f.name = std::move(var);
    f.children = {std::move(body)};
    return make(std::move(f));
}

}  // namespace

FormulaPtr f_const(const Rat& c) {
    if (c < 0 || c > 1) throw Error("constant outside [0,1]: " + rat_str(c));
    Formula f;
    f.kind = Formula::Kind::Const;
    f.value = c;
    return make(std::move(f));
}

FormulaPtr f_atom(AtomKind k, std::vector<Term> terms) {
    const std::size_t want = (k == AtomKind::dceq) ? 3 : 2;
    if (terms.size() != want) throw Error("atom arity mismatch");
    Formula f;
    f.kind = Formula::Kind::Atom;
    f.atom = k;
    f.terms = std::move(terms);
    return make(std::move(f));
}

FormulaPtr f_max(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Max, a, b); }
FormulaPtr f_min(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Min, a, b); }
FormulaPtr f_plus(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Plus, a, b); }
FormulaPtr f_tsub(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::TSub, a, b); }
FormulaPtr f_absdiff(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::AbsDiff, a, b); }

FormulaPtr f_scale(const Rat& c, FormulaPtr a) {
    if (c < 0 || c > 1) throw Error("scale factor outside [0,1]: " + rat_str(c));
    Formula f;
    f.kind = Formula::Kind::Scale;
    f.value = c;
    f.children = {std::move(a)};
    return make(std::move(f));
}

FormulaPtr f_mod(std::string name, FormulaPtr a) {
    Formula f;
    f.kind = Formula::Kind::Mod;
    f.name = std::move(name);
    f.children = {std::move(a)};
    return make(std::move(f));
}

FormulaPtr f_sup(std::string var, FormulaPtr body) {
    return quantifier(Formula::Kind::Sup, std::move(var), std::move(body));
}
FormulaPtr f_inf(std::string var, FormulaPtr body) {
    return quantifier(Formula::Kind::Inf, std::move(var), std::move(body));
}

std::set<std::string> Formula::free_vars() const {
    std::set<std::string> out;
    switch (kind) {
        case Kind::Atom:
            for (const auto& t : terms)
                if (!t.is_param) out.insert(t.name);
            break;
        case Kind::Sup:
        case Kind::Inf:
            out = children[0]->free_vars();
            out.erase(name);
            break;
        default:
            for (const auto& c : children) {
                auto sub = c->free_vars();
                out.insert(sub.begin(), sub.end());
            }
    }
    return out;
}

bool Formula::quantifier_free() const {
    if (kind == Kind::Sup || kind == Kind::Inf) return false;
    return std::all_of(children.begin(), children.end(),
                       [](const FormulaPtr& c) { return c->quantifier_free(); });
}

// --- Parser ----------------------------------------------------------------

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error("parse error at position " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool try_consume(char ch) {
        skip_ws();
        if (pos < text.size() && text[pos] == ch) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char ch) {
        if (!try_consume(ch)) fail(std::string("expected '") + ch + "'");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail("expected identifier");
        return text.substr(start, pos - start);
    }

    Int integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return Int(text.substr(start, pos - start));
    }

    Rat rational() {
        Int p = integer();
        expect('/');
        Int q = integer();
        if (q == 0) fail("zero denominator");
        return Rat(p, q);
    }

    Term term() {
        skip_ws();
        if (try_consume('@')) return t_param(ident());
        return t_var(ident());
    }

    FormulaPtr atom(AtomKind k) {
        expect('(');
        std::vector<Term> terms;
        terms.push_back(term());
        expect(',');
        terms.push_back(term());
        if (k == AtomKind::dceq) {
            expect(',');
            terms.push_back(term());
        }
        expect(')');
        return f_atom(k, std::move(terms));
    }

    FormulaPtr pair(FormulaPtr (*ctor)(FormulaPtr, FormulaPtr)) {
        expect('(');
        FormulaPtr a = formula();
        expect(',');
        FormulaPtr b = formula();
        expect(')');
        return ctor(std::move(a), std::move(b));
    }

    FormulaPtr formula() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
            Rat c = rational();
            if (c > 1) fail("constant outside [0,1]");
            return f_const(c);
        }
        const std::string head = ident();
        if (head == "sup" || head == "inf") {
            std::string var = ident();
            expect('.');
            FormulaPtr body = formula();
            return head == "sup" ? f_sup(std::move(var), std::move(body))
                                 : f_inf(std::move(var), std::move(body));
        }
        if (head == "max") return pair(f_max);
        if (head == "min") return pair(f_min);
        if (head == "plus") return pair(f_plus);
        if (head == "tsub") return pair(f_tsub);
        if (head == "absdiff") return pair(f_absdiff);
        if (head == "scale") {
            expect('(');
            Rat c = rational();
            if (c > 1) fail("scale factor outside [0,1]");
            expect(',');
            FormulaPtr a = formula();
            expect(')');
            return f_scale(c, std::move(a));
        }
        if (head == "mod") {
            expect('(');
            std::string name = ident();
            expect(',');
            FormulaPtr a = formula();
            expect(')');
            return f_mod(std::move(name), std::move(a));
        }
        if (head == "d") return atom(AtomKind::d);
        if (head == "r") return atom(AtomKind::r);
        if (head == "dleq") return atom(AtomKind::dleq);
        if (head == "dceq") return atom(AtomKind::dceq);
        fail("unknown form '" + head + "'");
    }
};

}  // namespace

FormulaPtr parse(const std::string& text) {
    Parser p{text};
    FormulaPtr f = p.formula();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

std::string print(const FormulaPtr& f) {
    using K = Formula::Kind;
    auto term_str = [](const Term& t) { return t.is_param ? "@" + t.name : t.name; };
    switch (f->kind) {
        case K::Const: return rat_str(f->value);
        case K::Atom: {
            static const std::map<AtomKind, std::string> names{{AtomKind::d, "d"},
                                                               {AtomKind::r, "r"},
                                                               {AtomKind::dleq, "dleq"},
                                                               {AtomKind::dceq, "dceq"}};
            std::string out = names.at(f->atom) + "(";
            for (std::size_t i = 0; i < f->terms.size(); ++i)
                out += (i ? ", " : "") + term_str(f->terms[i]);
            return out + ")";
        }
        case K::Max: return "max(" + print(f->children[0]) + ", " + print(f->children[1]) + ")";
        case K::Min: return "min(" + print(f->children[0]) + ", " + print(f->children[1]) + ")";
        case K::Plus: return "plus(" + print(f->children[0]) + ", " + print(f->children[1]) + ")";
        case K::TSub: return "tsub(" + print(f->children[0]) + ", " + print(f->children[1]) + ")";
        case K::AbsDiff:
            return "absdiff(" + print(f->children[0]) + ", " + print(f->children[1]) + ")";
        case K::Scale: return "scale(" + rat_str(f->value) + ", " + print(f->children[0]) + ")";
        case K::Mod: return "mod(" + f->name + ", " + print(f->children[0]) + ")";
        case K::Sup: return "sup " + f->name + ". " + print(f->children[0]);
        case K::Inf: return "inf " + f->name + ". " + print(f->children[0]);
    }
    throw Error("unreachable formula kind");
}

// --- Evaluation ------------------------------------------------------------

namespace {

int structure_size(const EvalContext& ctx) {
    if (ctx.linear) return ctx.linear->size();
    if (ctx.cyclic) return ctx.cyclic->size();
    throw Error("evaluation context has no structure");
}

int resolve(const Term& t, const EvalContext& ctx, const Env& env) {
    if (t.is_param) {
        std::optional<int> idx =
            ctx.linear ? ctx.linear->index_of(t.name) : ctx.cyclic->index_of(t.name);
        if (!idx) throw Error("unknown parameter '@" + t.name + "'");
        return *idx;
    }
    auto it = env.find(t.name);
    if (it == env.end()) throw Error("unbound variable '" + t.name + "'");
    return it->second;
}

}  // namespace

Rat evaluate(const FormulaPtr& f, const EvalContext& ctx, const Env& env) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Const: return f->value;
        case K::Atom: {
            std::vector<int> p;
            for (const auto& t : f->terms) p.push_back(resolve(t, ctx, env));
            switch (f->atom) {
                case AtomKind::d:
                    return ctx.linear ? ctx.linear->dist(p[0], p[1]) : ctx.cyclic->dist(p[0], p[1]);
                case AtomKind::r:
                    if (!ctx.linear) throw Error("atom r needs a linear-order structure");
                    return ray(*ctx.linear, p[0], p[1]);
                case AtomKind::dleq:
                    if (!ctx.linear) throw Error("atom dleq needs a linear-order structure");
                    return d_leq(*ctx.linear, p[0], p[1]);
                case AtomKind::dceq:
                    if (!ctx.cyclic) throw Error("atom dceq needs a cyclic-order structure");
                    return d_ceq(*ctx.cyclic, p[0], p[1], p[2]);
            }
            throw Error("unreachable atom kind");
        }
        case K::Max:
            return std::max(evaluate(f->children[0], ctx, env), evaluate(f->children[1], ctx, env));
        case K::Min:
            return std::min(evaluate(f->children[0], ctx, env), evaluate(f->children[1], ctx, env));
        case K::Plus:
            return std::min(
                Rat(evaluate(f->children[0], ctx, env) + evaluate(f->children[1], ctx, env)),
                Rat(1));
        case K::TSub:
            return tsub(evaluate(f->children[0], ctx, env), evaluate(f->children[1], ctx, env));
        case K::AbsDiff:
            return rat_abs(evaluate(f->children[0], ctx, env) -
                           evaluate(f->children[1], ctx, env));
        case K::Scale: return f->value * evaluate(f->children[0], ctx, env);
        case K::Mod: {
            if (!ctx.moduli) throw Error("no modulus table in evaluation context");
            auto it = ctx.moduli->find(f->name);
            if (it == ctx.moduli->end()) throw Error("unknown modulus '" + f->name + "'");
            const Rat out = it->second(evaluate(f->children[0], ctx, env));
            if (out < 0 || out > 1) throw Error("modulus '" + f->name + "' left [0,1]");
            return out;
        }
        case K::Sup:
        case K::Inf: {
            const int n = structure_size(ctx);
            if (n == 0) return Rat(0);
            Env inner = env;
            Rat best;
            for (int i = 0; i < n; ++i) {
                inner[f->name] = i;
                const Rat v = evaluate(f->children[0], ctx, inner);
                if (i == 0)
                    best = v;
                else
                    best = f->kind == K::Sup ? std::max(best, v) : std::min(best, v);
            }
            return best;
        }
    }
    throw Error("unreachable formula kind");
}

TheoryReport check_theory(const std::vector<FormulaPtr>& sentences, const EvalContext& ctx) {
    TheoryReport report;
    report.max = Rat(0);
    for (const auto& s : sentences) {
        if (!s->free_vars().empty()) throw Error("theory sentence has free variables");
        report.values.push_back(evaluate(s, ctx));
        report.max = std::max(report.max, report.values.back());
    }
    return report;
}

Rat qf_equiv_defect(const FormulaPtr& phi, const FormulaPtr& psi, const EvalContext& ctx) {
    const auto vars_a = phi->free_vars();
    if (vars_a != psi->free_vars()) throw Error("free-variable sets differ");
    std::vector<std::string> vars(vars_a.begin(), vars_a.end());
    const int n = structure_size(ctx);
    Rat worst(0);
    Env env;
    std::function<void(std::size_t)> sweep = [&](std::size_t k) {
        if (k == vars.size()) {
            worst = std::max(worst, rat_abs(evaluate(phi, ctx, env) - evaluate(psi, ctx, env)));
            return;
        }
        for (int i = 0; i < n; ++i) {
            env[vars[k]] = i;
            sweep(k + 1);
        }
    };
    if (!vars.empty() && n == 0) return Rat(0);
    sweep(0);
    return worst;
}

// --- Built-in axiom systems ------------------------------------------------

namespace {

const std::vector<std::string> kMlo = {
    "sup x. sup y. absdiff(d(x,y), plus(r(x,y), r(y,x)))",
    "sup x. sup y. min(r(x,y), r(y,x))",
    "sup x. sup y. sup z. tsub(r(x,z), plus(r(x,y), r(y,z)))",
    "sup x. sup y. absdiff(dleq(x,y), inf z. max(r(x,z), r(z,y)))",
};

const std::vector<std::string> kUm = {
    "sup x. sup y. sup z. tsub(d(x,z), max(d(x,y), d(y,z)))",
};

// The cyclic-order axioms that are directly expressible in the grammar; the
// transitivity axiom relativizes a quantifier to the ceq relation and is
// checked by the exhaustive sweep instead.
const std::vector<std::string> kMco = {
    "sup x. sup y. sup z. absdiff(dceq(x,y,z), dceq(y,z,x))",
    "sup x. sup y. sup z. absdiff(plus(dceq(x,y,z), dceq(y,x,z)), "
    "min(inf w. max(d(x,w), d(y,w)), min(inf w. max(d(y,w), d(z,w)), "
    "inf w. max(d(z,w), d(x,w)))))",
    "sup x. sup y. sup z. min(dceq(x,y,z), dceq(y,x,z))",
    "sup w. sup x. sup y. sup z. min(dceq(w,y,x), min(dceq(w,z,y), "
    "tsub(min(d(w,x), d(w,z)), d(w,y))))",
};

}  // namespace

const std::vector<std::string>& theory_text(const std::string& name) {
    static const std::map<std::string, std::vector<std::string>> theories = [] {
        std::map<std::string, std::vector<std::string>> t;
        t["mlo"] = kMlo;
        t["um"] = kUm;
        std::vector<std::string> ulo = kMlo;
        ulo.insert(ulo.end(), kUm.begin(), kUm.end());
        t["ulo"] = std::move(ulo);
        t["mco"] = kMco;
        return t;
    }();
    auto it = theories.find(name);
    if (it == theories.end()) throw Error("unknown theory '" + name + "'");
    return it->second;
}

std::vector<FormulaPtr> theory_formulas(const std::string& name) {
    std::vector<FormulaPtr> out;
    for (const auto& text : theory_text(name)) out.push_back(parse(text));
    return out;
}

}  // namespace mot
