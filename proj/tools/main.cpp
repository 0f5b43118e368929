// Command-line front end: structure generation, axiom checking, correlation
// building, decomposition, synthesis, formula evaluation, and the valued-field
// sandbox. Exit codes: 0 all checks pass, 1 check failure, 2 usage/IO error.
//
// Reports contain only exact rationals and deterministic content, so runs
// with identical inputs are byte-identical; wall-clock timing is opt-in via
// --timing because it would break that contract.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mot/backforth.hpp"
#include "mot/checks.hpp"
#include "mot/formula.hpp"
#include "mot/gen.hpp"
#include "mot/regulated.hpp"
#include "mot/series.hpp"
#include "mot/structures.hpp"
#include "mot/urysohn.hpp"

using namespace mot;

namespace {

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> fields;
    struct Check {
        std::string name, value, threshold;
        bool pass;
    };
    std::vector<Check> checks;

    void field(std::string name, std::string value) {
        fields.emplace_back(std::move(name), std::move(value));
    }
    void add(std::string name, const Rat& value, const Rat& tol) {
        checks.push_back({std::move(name), rat_str(value), rat_str(tol), value <= tol});
    }
    void add_bool(std::string name, bool ok) {
        checks.push_back({std::move(name), ok ? "1/1" : "0/1", "1/1", ok});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    int emit(bool json, std::optional<double> elapsed_ms) const {
        if (json) {
            nlohmann::json j;
            j["command"] = command;
            for (const auto& [k, v] : fields) j["fields"][k] = v;
            j["checks"] = nlohmann::json::array();
            for (const auto& c : checks)
                j["checks"].push_back({{"name", c.name},
                                       {"value", c.value},
                                       {"threshold", c.threshold},
                                       {"pass", c.pass}});
            j["pass"] = all_pass();
            if (elapsed_ms) j["elapsed_ms"] = *elapsed_ms;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "command: " << command << "\n";
            for (const auto& [k, v] : fields) std::cout << k << ": " << v << "\n";
            for (const auto& c : checks)
                std::cout << "check " << c.name << " value " << c.value << " tol "
                          << c.threshold << (c.pass ? " PASS" : " FAIL") << "\n";
            if (elapsed_ms) std::cout << "elapsed_ms: " << *elapsed_ms << "\n";
            std::cout << "result: " << (all_pass() ? "PASS" : "FAIL") << "\n";
        }
        return all_pass() ? 0 : 1;
    }
};

Rat parse_rat_arg(const std::string& text, const char* what) {
    auto r = rat_parse(text);
    if (!r) throw Error(std::string("bad rational for ") + what + ": " + text);
    return *r;
}

struct LoadedStructure {
    std::optional<FiniteMetricOrder> lin;
    std::optional<FiniteCyclicOrder> cyc;
};

LoadedStructure load_structure(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw Error("cannot open " + path);
    std::string header;
    std::getline(probe, header);
    probe.close();
    std::ifstream in(path);
    LoadedStructure out;
    if (header.rfind("cyclic-order", 0) == 0)
        out.cyc = load_cyclic_order(in);
    else
        out.lin = load_metric_order(in);
    return out;
}

std::vector<FormulaPtr> load_formula_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<FormulaPtr> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(parse(line));
    }
    if (out.empty()) throw Error("no formulas in " + path);
    return out;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path);
        out << content;
    }
}

int run_check(const std::string& structure_path, const std::string& theory,
              const std::string& tol_text, bool json, std::optional<double> elapsed) {
    const Rat tol = parse_rat_arg(tol_text, "--tol");
    Report rep;
    rep.command = "check";
    rep.field("structure", structure_path);
    rep.field("theory", theory);
    const LoadedStructure s = load_structure(structure_path);

    auto oracle = [&](const std::string& name, const std::vector<Rat>& checker,
                      const std::vector<std::string>& names, const EvalContext& ctx) {
        const TheoryReport tr = check_theory(theory_formulas(name), ctx);
        if (tr.values.size() != checker.size())
            throw Error("internal: sentence count mismatch for theory " + name);
        bool agree = true;
        for (std::size_t i = 0; i < checker.size(); ++i) {
            rep.add(names[i], checker[i], tol);
            if (tr.values[i] != checker[i]) agree = false;
        }
        rep.add_bool("oracle-agreement", agree);
    };

    if (theory == "mlo" || theory == "um" || theory == "ulo") {
        if (!s.lin) throw Error("theory " + theory + " needs a metric-order structure");
        EvalContext ctx{&*s.lin, nullptr, nullptr};
        if (theory == "mlo") {
            const MloAxiomValues v = mlo_axiom_values(*s.lin);
            oracle("mlo", {v.a1, v.a2, v.a3, v.a4},
                   {"mlo.additivity", "mlo.disjointness", "mlo.transitivity",
                    "mlo.leq-consistency"},
                   ctx);
        } else if (theory == "um") {
            oracle("um", {ultrametric_defect(*s.lin)}, {"um.strong-triangle"}, ctx);
        } else {
            const MloAxiomValues v = mlo_axiom_values(*s.lin);
            oracle("ulo", {v.a1, v.a2, v.a3, v.a4, ultrametric_defect(*s.lin)},
                   {"mlo.additivity", "mlo.disjointness", "mlo.transitivity",
                    "mlo.leq-consistency", "um.strong-triangle"},
                   ctx);
        }
    } else if (theory == "mco") {
        if (!s.cyc) throw Error("theory mco needs a cyclic-order structure");
        EvalContext ctx{nullptr, &*s.cyc, nullptr};
        const McoAxiomValues v = mco_axiom_values(*s.cyc);
        oracle("mco", {v.cyclicity, v.antisym_refl, v.totality, v.convexity},
               {"mco.cyclicity", "mco.antisym-refl", "mco.totality", "mco.convexity"},
               ctx);
        // the transitivity axiom quantifies relativized to the ceq relation,
        // which the formula grammar cannot express; hand-coded checker only
        rep.add("mco.transitivity", v.transitivity, tol);
    } else if (std::ifstream(theory).good()) {
        EvalContext ctx{s.lin ? &*s.lin : nullptr, s.cyc ? &*s.cyc : nullptr, nullptr};
        const auto sentences = load_formula_file(theory);
        const TheoryReport tr = check_theory(sentences, ctx);
        for (std::size_t i = 0; i < tr.values.size(); ++i)
            rep.add("sentence" + std::to_string(i), tr.values[i], tol);
    } else {
        throw Error("unknown theory (expected mlo/um/ulo/mco or a formula file): " +
                    theory);
    }
    return rep.emit(json, elapsed);
}

int run_gen(const std::string& kind, int size, std::uint64_t seed,
            const std::string& out_path) {
    std::ostringstream content;
    if (kind == "ulo") {
        const FiniteMetricOrder m = gen_ulo(seed, size);
        if (mlo_defect(m) != 0 || ultrametric_defect(m) != 0)
            throw Error("internal: generated structure failed verification");
        save_metric_order(content, m);
    } else if (kind == "cyclic") {
        const FiniteCyclicOrder c = gen_cyclic(seed, size);
        if (mco_defect(c) != 0)
            throw Error("internal: generated structure failed verification");
        save_cyclic_order(content, c);
    } else if (kind == "us-sample") {
        for (const USPoint& p : gen_us_points(seed, size)) content << us_str(p) << "\n";
    } else {
        throw Error("unknown gen kind (expected ulo/cyclic/us-sample): " + kind);
    }
    write_output(out_path, content.str());
    return 0;
}

int run_correlate(const std::string& path_m, const std::string& path_n,
                  const std::string& eps_text, std::uint64_t seed, bool unordered,
                  bool json, std::optional<double> elapsed) {
    const Rat eps = parse_rat_arg(eps_text, "--eps");
    const LoadedStructure sm = load_structure(path_m);
    const LoadedStructure sn = load_structure(path_n);
    if (!sm.lin || !sn.lin) throw Error("correlate needs metric-order structures");
    const FiniteMetricOrder& M = *sm.lin;
    const FiniteMetricOrder& N = *sn.lin;
    Report rep;
    rep.command = "correlate";
    rep.field("M", path_m);
    rep.field("N", path_n);
    rep.field("eps", rat_str(eps));
    rep.field("seed", std::to_string(seed));
    rep.field("mode", unordered ? "unordered" : "ordered");
    const CorrelationResult res =
        build_correlation(M, N, Tuple{&M, {}}, Tuple{&N, {}}, eps, !unordered);
    if (!res.correlation) {
        rep.field("failure-case", res.failure.case_label);
        rep.field("failure-window", "(" + rat_str(res.failure.window_lo) + ", " +
                                        rat_str(res.failure.window_hi) + ")");
        std::string punct;
        for (const Rat& p : res.failure.punctures)
            punct += (punct.empty() ? "" : " ") + rat_str(p);
        rep.field("failure-punctures", punct);
        rep.add_bool("witness-found", false);
        return rep.emit(json, elapsed);
    }
    rep.field("guard", rat_str(res.guard));
    std::string pair_text;
    for (const auto& [i, j] : res.correlation->pairs)
        pair_text += (pair_text.empty() ? "" : " ") + M.name(i) + "<->" + N.name(j);
    rep.field("pairs", pair_text);
    rep.add("dis_gh", dis_gh(*res.correlation), eps);
    if (!unordered) rep.add("dis_ogh", dis_ogh(*res.correlation), eps);
    return rep.emit(json, elapsed);
}

std::string pred_line(const FiniteMetricOrder& m, const std::vector<Rat>& values) {
    std::string out;
    for (int i = 0; i < m.size(); ++i)
        out += (i ? " " : "") + m.name(i) + "=" + rat_str(values[i]);
    return out;
}

int run_decompose(const std::string& structure_path, const std::string& pred_path,
                  int m, bool json, std::optional<double> elapsed) {
    const LoadedStructure s = load_structure(structure_path);
    if (!s.lin) throw Error("decompose needs a metric-order structure");
    std::ifstream pin(pred_path);
    if (!pin) throw Error("cannot open " + pred_path);
    const SampledPredicate f = make_pred(*s.lin, load_pred(pin, *s.lin));
    const MonotoneDecomposition dec = monotone_decomposition(f, m);
    Report rep;
    rep.command = "decompose";
    rep.field("structure", structure_path);
    rep.field("predicate", pred_path);
    rep.field("m", std::to_string(m));
    for (std::size_t k = 0; k < dec.psi.size(); ++k)
        rep.field("psi" + std::to_string(k), pred_line(*s.lin, dec.psi[k].values));
    rep.field("residual", pred_line(*s.lin, dec.residual.values));
    // re-verify the decomposition contract
    bool telescoping = true, monotone = true;
    for (int i = 0; i < s.lin->size(); ++i) {
        Rat acc = (m % 2 == 0 ? dec.residual.values[i] : -dec.residual.values[i]);
        for (int k = 0; k < m; ++k)
            acc += (k % 2 == 0 ? dec.psi[k].values[i] : -dec.psi[k].values[i]);
        if (acc != f.values[i]) telescoping = false;
    }
    for (const auto& psi : dec.psi)
        for (int i = 0; i + 1 < s.lin->size(); ++i)
            if (psi.values[i] > psi.values[i + 1]) monotone = false;
    rep.add_bool("telescoping-exact", telescoping);
    rep.add_bool("psi-nondecreasing", monotone);
    return rep.emit(json, elapsed);
}

int run_synth(const std::string& structure_path, const std::string& pred_path,
              const std::string& eps_text, bool subdivide, bool json,
              std::optional<double> elapsed) {
    const Rat eps = parse_rat_arg(eps_text, "--eps");
    const LoadedStructure s = load_structure(structure_path);
    if (!s.lin) throw Error("synth needs a metric-order structure");
    std::ifstream pin(pred_path);
    if (!pin) throw Error("cannot open " + pred_path);
    const SampledPredicate f = make_pred(*s.lin, load_pred(pin, *s.lin));
    const SynthesisResult syn = qf_synthesis(f, eps, subdivide);
    Report rep;
    rep.command = "synth";
    rep.field("structure", structure_path);
    rep.field("predicate", pred_path);
    rep.field("eps", rat_str(eps));
    rep.field("formula", print(syn.formula));
    for (const auto& [name, map] : syn.moduli) {
        std::string knots;
        for (const auto& [t, v] : map.knots)
            knots += (knots.empty() ? "" : " ") + rat_str(t) + "->" + rat_str(v);
        rep.field("modulus." + name, knots);
    }
    EvalContext ctx{&*s.lin, nullptr, &syn.moduli};
    Rat err(0);
    for (int i = 0; i < s.lin->size(); ++i)
        err = std::max(err,
                       rat_abs(evaluate(syn.formula, ctx, {{syn.var, i}}) - f.values[i]));
    rep.field("sup-error", rat_str(err));
    rep.add_bool("quantifier-free", syn.formula->quantifier_free());
    rep.add("synthesis-error", err, 2 * eps);
    return rep.emit(json, elapsed);
}

int run_eval(const std::string& structure_path, const std::string& formula_text,
             bool json, std::optional<double> elapsed) {
    const LoadedStructure s = load_structure(structure_path);
    EvalContext ctx{s.lin ? &*s.lin : nullptr, s.cyc ? &*s.cyc : nullptr, nullptr};
    FormulaPtr f;
    if (std::ifstream(formula_text).good()) {
        const auto sentences = load_formula_file(formula_text);
        if (sentences.size() != 1) throw Error("eval expects exactly one formula");
        f = sentences[0];
    } else {
        f = parse(formula_text);
    }
    if (!f->free_vars().empty()) throw Error("eval expects a closed sentence");
    Report rep;
    rep.command = "eval";
    rep.field("structure", structure_path);
    rep.field("formula", print(f));
    rep.field("value", rat_str(evaluate(f, ctx)));
    return rep.emit(json, elapsed);
}

int run_mvf_dpred(const std::string& xs, const std::string& ys, bool json,
                  std::optional<double> elapsed) {
    const TruncSeries x = series_parse(xs), y = series_parse(ys);
    const Magnitude closed = D_pred(x, y);
    const Magnitude brute = D_pred_bruteforce(x, y);
    Report rep;
    rep.command = "mvf dpred";
    rep.field("x", series_str(x));
    rep.field("y", series_str(y));
    rep.field("D", mag_str(closed));
    rep.add_bool("witness-agreement", closed == brute);
    return rep.emit(json, elapsed);
}

int run_mvf_valorder(const std::vector<std::string>& elems, const std::string& out_path) {
    std::vector<TruncSeries> parsed;
    for (const auto& e : elems) parsed.push_back(series_parse(e));
    const FiniteMetricOrder m = value_order_export(parsed);
    if (mlo_defect(m) != 0 || ultrametric_defect(m) != 0)
        throw Error("internal: value order failed verification");
    std::ostringstream content;
    save_metric_order(content, m);
    write_output(out_path, content.str());
    return 0;
}

int run_mvf_projdist(const std::string& ps, const std::string& qs, bool json,
                     std::optional<double> elapsed) {
    Report rep;
    rep.command = "mvf projdist";
    const ProjPoint p = proj_parse(ps), q = proj_parse(qs);
    rep.field("P", proj_str(p));
    rep.field("Q", proj_str(q));
    rep.field("distance", mag_str(proj_distance(p, q)));
    return rep.emit(json, elapsed);
}

int run_mvf_ceq(const std::string& ps, const std::string& qs, const std::string& rs,
                bool json, std::optional<double> elapsed) {
    Report rep;
    rep.command = "mvf ceq";
    const ProjPoint p = proj_parse(ps), q = proj_parse(qs), r = proj_parse(rs);
    rep.field("ceq", proj_ceq(p, q, r) ? "true" : "false");
    rep.field("dceq", mag_str(proj_dceq(p, q, r)));
    rep.field("phi", mag_str(proj_phi(p, q, r)));
    return rep.emit(json, elapsed);
}

int run_mvf_density(const std::string& ps, const std::string& qs,
                    const std::string& target_text, bool json,
                    std::optional<double> elapsed) {
    const Rat target = parse_rat_arg(target_text, "target");
    const ProjPoint p = proj_parse(ps), q = proj_parse(qs);
    const ProjPoint c = proj_density_witness(p, q, target);
    Report rep;
    rep.command = "mvf density";
    rep.field("witness", proj_str(c));
    rep.add_bool("distance-exact", proj_distance(p, c) == Magnitude::of(target));
    rep.add_bool("between", proj_ceq(p, c, q));
    return rep.emit(json, elapsed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric order toolkit"};
    app.require_subcommand(1);
    bool json = false, timing = false;
    app.add_flag("--json", json, "structured JSON reports");
    app.add_flag("--timing", timing, "include wall-clock time (breaks byte-identity)");

    std::string structure_path, second_path, theory, tol = "0/1", eps = "1/8";
    std::string out_path, kind, formula_text, arg1, arg2, arg3;
    std::vector<std::string> series_args;
    std::uint64_t seed = 0;
    int size = 0, m_steps = 0;
    bool unordered = false, subdivide = false;

    auto* check = app.add_subcommand("check", "axiom defects of a structure");
    check->add_option("structure", structure_path)->required();
    check->add_option("theory", theory, "mlo/um/ulo/mco or a formula file")->required();
    check->add_option("--tol", tol, "pass threshold (default 0/1)");

    auto* gen = app.add_subcommand("gen", "generate a seeded valid structure");
    gen->add_option("kind", kind, "ulo/cyclic/us-sample")->required();
    gen->add_option("size", size)->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path);

    auto* corr = app.add_subcommand("correlate", "back-and-forth correlation");
    corr->add_option("M", structure_path)->required();
    corr->add_option("N", second_path)->required();
    corr->add_option("--eps", eps);
    corr->add_option("--seed", seed);
    corr->add_flag("--unordered", unordered, "plain isometric mode (ignore the order)");

    auto* dec = app.add_subcommand("decompose", "monotone decomposition of a predicate");
    dec->add_option("structure", structure_path)->required();
    dec->add_option("predicate", second_path)->required();
    dec->add_option("m", m_steps)->required()->check(CLI::NonNegativeNumber);

    auto* synth = app.add_subcommand("synth", "quantifier-free synthesis");
    synth->add_option("structure", structure_path)->required();
    synth->add_option("predicate", second_path)->required();
    synth->add_option("--eps", eps);
    synth->add_flag("--subdivide", subdivide, "interpolation knots in selector maps");

    auto* ev = app.add_subcommand("eval", "evaluate a closed formula");
    ev->add_option("structure", structure_path)->required();
    ev->add_option("formula", formula_text, "formula text or file")->required();

    auto* mvf = app.add_subcommand("mvf", "truncated-series valued-field sandbox");
    mvf->require_subcommand(1);
    auto* dpred = mvf->add_subcommand("dpred", "divisibility defect D(x,y)");
    dpred->add_option("x", arg1)->required();
    dpred->add_option("y", arg2)->required();
    auto* valorder = mvf->add_subcommand("valorder", "value order as a core structure");
    valorder->add_option("elements", series_args)->required();
    valorder->add_option("--out", out_path);
    auto* projdist = mvf->add_subcommand("projdist", "projective distance");
    projdist->add_option("P", arg1)->required();
    projdist->add_option("Q", arg2)->required();
    auto* ceq = mvf->add_subcommand("ceq", "projective cyclic order");
    ceq->add_option("P", arg1)->required();
    ceq->add_option("Q", arg2)->required();
    ceq->add_option("R", arg3)->required();
    auto* density = mvf->add_subcommand("density", "cyclic density witness");
    density->add_option("P", arg1)->required();
    density->add_option("Q", arg2)->required();
    density->add_option("target", formula_text, "target distance exponent p/q")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() -> std::optional<double> {
        if (!timing) return std::nullopt;
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    };

    try {
        if (*check) return run_check(structure_path, theory, tol, json, elapsed());
        if (*gen) return run_gen(kind, size, seed, out_path);
        if (*corr)
            return run_correlate(structure_path, second_path, eps, seed, unordered,
                                 json, elapsed());
        if (*dec) return run_decompose(structure_path, second_path, m_steps, json,
                                       elapsed());
        if (*synth)
            return run_synth(structure_path, second_path, eps, subdivide, json,
                             elapsed());
        if (*ev) return run_eval(structure_path, formula_text, json, elapsed());
        if (*mvf) {
            if (*dpred) return run_mvf_dpred(arg1, arg2, json, elapsed());
            if (*valorder) return run_mvf_valorder(series_args, out_path);
            if (*projdist) return run_mvf_projdist(arg1, arg2, json, elapsed());
            if (*ceq) return run_mvf_ceq(arg1, arg2, arg3, json, elapsed());
            if (*density)
                return run_mvf_density(arg1, arg2, formula_text, json, elapsed());
        }
        throw Error("no subcommand dispatched");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
