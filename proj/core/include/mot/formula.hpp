#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mot/structures.hpp"

namespace mot {

// A right-continuous nondecreasing step map on [0,1], used as a composable
// connective (continuity modulus). value(t) is the value at the largest knot
// <= t; the first knot must be at 0.
struct StepMap {
    std::vector<std::pair<Rat, Rat>> knots;  // ascending thresholds

    Rat operator()(const Rat& t) const;
    bool is_nondecreasing() const;
};

using ModulusTable = std::map<std::string, StepMap>;

// One term of an atomic formula: a bound variable or a '@'-prefixed named
// parameter resolving to a structure point at evaluation time.
struct Term {
    bool is_param = false;
    std::string name;
    bool operator==(const Term&) const = default;
};

enum class AtomKind { d, r, dleq, dceq };

// Continuous-logic formulas over one structure sort, valued in [0,1]. Every
// connective is 1-Lipschitz in each argument; Scale factors and constants are
// restricted to [0,1] so no intermediate value ever leaves [0,1].
class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
  public:
    enum class Kind {
        Const,    // rational constant
        Atom,     // d/r/dleq (binary), dceq (ternary)
        Max, Min, Plus, TSub, AbsDiff,  // binary connectives
        Scale,    // rational factor in [0,1]
        Mod,      // named nondecreasing step map applied to the child
        Sup, Inf  // quantifiers, exact max/min over the finite structure
    };

    Kind kind;
    Rat value;                       // Const / Scale factor
    AtomKind atom = AtomKind::d;     // Atom
    std::vector<Term> terms;         // Atom
    std::string name;                // Mod map name / Sup,Inf variable
    std::vector<FormulaPtr> children;

    std::set<std::string> free_vars() const;
    bool quantifier_free() const;
};

FormulaPtr f_const(const Rat& c);
FormulaPtr f_atom(AtomKind k, std::vector<Term> terms);
FormulaPtr f_max(FormulaPtr a, FormulaPtr b);
FormulaPtr f_min(FormulaPtr a, FormulaPtr b);
FormulaPtr f_plus(FormulaPtr a, FormulaPtr b);     // min(a + b, 1)
FormulaPtr f_tsub(FormulaPtr a, FormulaPtr b);     // max(a - b, 0)
FormulaPtr f_absdiff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_scale(const Rat& c, FormulaPtr a);
FormulaPtr f_mod(std::string name, FormulaPtr a);
FormulaPtr f_sup(std::string var, FormulaPtr body);
FormulaPtr f_inf(std::string var, FormulaPtr body);

inline Term t_var(std::string n) { return Term{false, std::move(n)}; }
inline Term t_param(std::string n) { return Term{true, std::move(n)}; }

// Grammar (whitespace insignificant; '@' prefixes parameters):
//   F ::= 'sup' VAR '.' F | 'inf' VAR '.' F
//       | 'max(' F ',' F ')' | 'min(' F ',' F ')' | 'plus(' F ',' F ')'
//       | 'tsub(' F ',' F ')' | 'absdiff(' F ',' F ')'
//       | 'scale(' RAT ',' F ')' | 'mod(' NAME ',' F ')' | ATOM | RAT
//   ATOM ::= ('d'|'r'|'dleq') '(' T ',' T ')' | 'dceq' '(' T ',' T ',' T ')'
//   T ::= VAR | '@'NAME ; RAT ::= INT '/' INT
// Throws Error with a character position on syntax errors.
FormulaPtr parse(const std::string& text);

// Normalized text; print(parse(x)) == print(parse(print(parse(x)))).
std::string print(const FormulaPtr& f);

// Evaluation structure: exactly one of linear/cyclic must be set. The d atom
// works on both kinds; r and dleq need the linear order, dceq the cyclic one.
struct EvalContext {
    const FiniteMetricOrder* linear = nullptr;
    const FiniteCyclicOrder* cyclic = nullptr;
    const ModulusTable* moduli = nullptr;
};

using Env = std::map<std::string, int>;

Rat evaluate(const FormulaPtr& f, const EvalContext& ctx, const Env& env = {});

struct TheoryReport {
    std::vector<Rat> values;  // one per sentence
    Rat max;
    bool all_pass(const Rat& tol) const { return max <= tol; }
};

// Evaluates closed sentences; throws on open formulas.
TheoryReport check_theory(const std::vector<FormulaPtr>& sentences,
                          const EvalContext& ctx);

// Exact max over all assignments of the shared free variables of |phi - psi|.
Rat qf_equiv_defect(const FormulaPtr& phi, const FormulaPtr& psi,
                    const EvalContext& ctx);

// Built-in axiom systems as formula text, keyed by {"mlo","um","ulo","mco"}.
// "mco" carries the four directly expressible axioms (cyclicity,
// antisymmetry/reflexivity, totality, convexity); the transitivity axiom
// quantifies relativized over the ceq relation, which the grammar has no
// primitive for, so it lives only in the hand-coded checker.
const std::vector<std::string>& theory_text(const std::string& name);
std::vector<FormulaPtr> theory_formulas(const std::string& name);

}  // namespace mot
