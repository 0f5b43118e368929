#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mot/formula.hpp"
#include "mot/structures.hpp"

namespace mot {

// A [0,1]-valued predicate sampled on every point of a finite order. On a
// finite order every function is a step function; the toolkit below measures
// how regulated it is (partition counts, decompositions, synthesis).
struct SampledPredicate {
    const FiniteMetricOrder* structure = nullptr;
    std::vector<Rat> values;  // one per point
};

// Validates one value per point, each in [0,1].
SampledPredicate make_pred(const FiniteMetricOrder& m, std::vector<Rat> values);

// Consecutive order-convex index blocks [first, last], ascending, covering
// the structure.
struct Partition {
    std::vector<std::pair<int, int>> blocks;
};

// Greedy left-to-right partition into fewest blocks on which the value
// oscillation (max - min) stays <= eps. Each block is extended as far as
// possible before a new one starts; for interval covers this is optimal.
Partition min_partition(const SampledPredicate& f, const Rat& eps);

// Step approximation on the 1/n grid: nearest grid value pointwise, so
// sup|f - g| <= 1/(2n) < 1/n.
SampledPredicate grid_step_approx(const SampledPredicate& f, int n);

// phi_0 = f; psi_k(x) = max_{y <= x} phi_k(y); phi_{k+1} = psi_k - phi_k.
// Every psi_k is nondecreasing and the telescoping identity
// f = sum_{k<m} (-1)^k psi_k + (-1)^m phi_m holds pointwise exactly.
struct MonotoneDecomposition {
    std::vector<SampledPredicate> psi;  // psi_0 .. psi_{m-1}
    SampledPredicate residual;          // phi_m
};
MonotoneDecomposition monotone_decomposition(const SampledPredicate& f, int m);

// The minimal exact continuity modulus at a:
//   alpha(t) = max over x with d(x,a) <= t of |phi(x)-phi(a)| + |psi(x)-psi(a)|
// as a right-continuous nondecreasing step map (alpha(0) = 0 since distinct
// points are at positive distance). Values may exceed 1; glue clamps.
// Requires phi(a) = psi(a).
StepMap modulus_envelope(const SampledPredicate& phi, const SampledPredicate& psi, int a);

// The piecewise join min(phi + alpha(r(x,a)), psi + alpha(r(a,x)), 1): equals
// phi on predecessors of a and psi on successors whenever alpha dominates the
// envelope of the two pieces. phi and psi must be quantifier-free with at
// most one shared free variable and must agree at the point. alpha is
// registered (clamped at 1) in `moduli` under `mod_name`.
FormulaPtr glue(const FormulaPtr& phi, const FormulaPtr& psi, const std::string& point,
                const StepMap& alpha, const std::string& mod_name, ModulusTable& moduli,
                const EvalContext& ctx);

struct SynthesisResult {
    FormulaPtr formula;  // quantifier-free, atoms r only plus step-map connectives
    ModulusTable moduli;
    std::string var = "x";
};

// Quantifier-free synthesis: partitions f into oscillation-<=eps blocks,
// fixes the block-start values as constants, and folds one selector per
// breakpoint. The selector is a 0/1 step map applied to r(a_i, x) whose
// threshold is the minimal gap distance below the breakpoint, so it decides
// block membership exactly; the result reproduces the block step function and
// hence stays within 2*eps of f. With `subdivide` the selector maps carry
// interpolation knots at fractions of the gap (no finite point realizes
// them, so evaluations are unchanged).
SynthesisResult qf_synthesis(const SampledPredicate& f, const Rat& eps,
                             bool subdivide = false);

}  // namespace mot
