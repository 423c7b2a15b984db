// Command-line front end: instance generation, exact analyses, EO sampling and sweeps.

#include "spinelab/cnf.hpp"
#include "spinelab/generators.hpp"
#include "spinelab/harness.hpp"
#include "spinelab/heuristics.hpp"
#include "spinelab/io.hpp"
#include "spinelab/order_params.hpp"
#include "spinelab/solver.hpp"
#include "spinelab/structure.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <sstream>

using namespace spinelab;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    bool seed_set = false;
    int budget_n = -1;
    std::string config;
    std::string out;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-")
        std::cout << text;
    else
        write_file(g.out, text);
}

Formula load_formula(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_instance(in);
}

Graph load_graph(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_graph(in);
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ContractError("'" + s + "' is not a rational of the form p/q");
    }
}

std::string values_line(const Assignment& a) {
    std::string out = "v";
    for (int v : a.values)
        out += fmt::format(" {}", v);
    return out + "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinelab: random CSP order parameters, spines and backbones"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->each([&](const std::string&) { g.seed_set = true; });
    app.add_option("--budget-n", g.budget_n, "Largest n for exact spine/backbone computations");
    app.add_option("--config", g.config, "key=value configuration file");
    app.add_option("--out", g.out, "Output path (default stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    std::string gen_problem = "3-sat";
    int gen_n = 20;
    double gen_c = 4.27;
    std::uint64_t gen_stream = 0;
    std::string gen_format = "gcsp";
    gen->add_option("--problem", gen_problem, "3-sat, 2-sat, 3-xor-sat, 1-in-3-sat, 3col or gbp");
    gen->add_option("--n", gen_n, "Number of variables or vertices");
    gen->add_option("-c,--density", gen_c, "Constraint density m/n, or mean degree for graphs");
    gen->add_option("--stream", gen_stream, "Stream index within the seed");
    gen->add_option("--format", gen_format, "gcsp or cnf (boolean problems)");

    // solve
    auto* solve = app.add_subcommand("solve", "Decide satisfiability with DPLL");
    std::string solve_path;
    std::string solve_branching = "moms";
    bool solve_proof = false;
    std::uint64_t solve_limit = 0;
    solve->add_option("file", solve_path, "gcsp, DIMACS cnf or DIMACS graph (3-colorability)")->required();
    solve->add_option("--branching", solve_branching, "moms or lex");
    solve->add_flag("--proof", solve_proof, "Extract and check a tree-like resolution refutation");
    solve->add_option("--node-limit", solve_limit, "Abort after this many DPLL nodes");

    // opt
    auto* optc = app.add_subcommand("opt", "Minimum number of violated constraints");
    std::string opt_path;
    optc->add_option("file", opt_path, "gcsp instance")->required();

    // spine
    auto* spinec = app.add_subcommand("spine", "Exact spine");
    std::string spine_path;
    std::string spine_problem;
    bool spine_literals = false;
    bool spine_vars_only = false;
    bool spine_no_fast = false;
    std::uint64_t spine_calls = 0;
    spinec->add_option("file", spine_path, "gcsp instance or DIMACS graph")->required();
    spinec->add_option("--problem", spine_problem, "3col or gbp for graph input");
    spinec->add_flag("--literals", spine_literals, "Literal spine instead (boolean instances)");
    spinec->add_flag("--variables-only", spine_vars_only, "Skip the full constraint spine");
    spinec->add_flag("--no-fast-path", spine_no_fast, "Always use the general algorithm");
    spinec->add_option("--max-calls", spine_calls, "SAT-call budget");

    // backbone
    auto* bb = app.add_subcommand("backbone", "Exact backbone");
    std::string bb_path;
    std::string bb_problem;
    bb->add_option("file", bb_path, "gcsp instance or DIMACS graph")->required();
    bb->add_option("--problem", bb_problem, "3col or gbp for graph input");

    // mus
    auto* musc = app.add_subcommand("mus", "Minimally unsatisfiable subformula");
    std::string mus_path;
    musc->add_option("file", mus_path, "gcsp instance")->required();

    // analyze
    auto* an = app.add_subcommand("analyze", "Density, sparsity and implicate analysis");
    std::string an_path;
    std::string an_r = "2";
    std::string an_x;
    std::string an_y;
    int an_len = 2;
    an->add_option("file", an_path, "gcsp instance")->required();
    an->add_option("--r", an_r, "Rational r >= 1 for delta*_r");
    an->add_option("--x", an_x, "Sparsity x (p/q)");
    an->add_option("--y", an_y, "Sparsity y (p/q)");
    an->add_option("--max-len", an_len, "Implicate length bound (1 or 2)");

    // eo
    auto* eo = app.add_subcommand("eo", "Extremal optimization ground-state sampling");
    std::string eo_path;
    std::string eo_problem = "gbp";
    EoConfig eo_cfg;
    eo->add_option("file", eo_path, "DIMACS graph")->required();
    eo->add_option("--problem", eo_problem, "3col or gbp");
    eo->add_option("--tau", eo_cfg.tau, "Power-law exponent");
    eo->add_option("--restarts", eo_cfg.restarts, "Independent restarts");
    eo->add_option("--steps", eo_cfg.steps, "Steps per restart (0: 200 n)");
    eo->add_option("--pool-cap", eo_cfg.pool_cap, "Distinct optima kept");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Density sweep; CSV to --out");
    double sw_eps = 0.1;
    sw->add_option("--eps", sw_eps, "Quantile level for the threshold estimate");

    // plot
    auto* plot = app.add_subcommand("plot", "SVG plot of a sweep CSV");
    std::string plot_csv;
    std::string plot_column = "p_sat";
    std::vector<double> plot_verticals;
    std::string plot_title;
    plot->add_option("csv", plot_csv, "Sweep CSV")->required();
    plot->add_option("--column", plot_column, "Column to plot against c");
    plot->add_option("--vertical", plot_verticals, "Threshold markers");
    plot->add_option("--title", plot_title, "Plot title");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ostringstream out;
        if (gen->parsed()) {
            auto p = parse_problem(gen_problem);
            if (p.graph) {
                write_graph(out, sample_graph(gen_n, gen_c, g.seed, gen_stream));
            } else {
                auto f = sample_formula(p, gen_n, gen_c, g.seed, gen_stream);
                if (gen_format == "cnf")
                    write_dimacs(out, to_cnf(f));
                else if (gen_format == "gcsp")
                    write_instance(out, f);
                else
                    throw ContractError("unknown format '" + gen_format + "'");
            }
        } else if (solve->parsed()) {
            const auto kind = sniff_format(solve_path);
            CnfFormula cnf;
            std::optional<Formula> f;
            if (kind == "cnf") {
                std::istringstream in(read_file(solve_path));
                cnf = read_dimacs(in);
            } else if (kind == "edge") {
                f = coloring_formula(load_graph(solve_path));
            } else {
                f = load_formula(solve_path);
            }
            DpllOptions o;
            o.branching = parse_branching(solve_branching);
            o.build_proof = solve_proof;
            o.node_limit = solve_limit;
            if (f && f->domain() != 2) {
                auto r = decide(*f);
                out << (r.sat ? "s SATISFIABLE\n" : "s UNSATISFIABLE\n");
                if (r.sat)
                    out << values_line(r.witness);
            } else {
                if (f)
                    cnf = to_cnf(*f);
                auto r = dpll_refute(cnf, o);
                out << (r.sat ? "s SATISFIABLE\n" : "s UNSATISFIABLE\n");
                out << "c nodes " << r.trace.nodes << '\n';
                if (r.sat) {
                    out << "v";
                    for (int v = 0; v < cnf.num_vars; ++v)
                        out << ' ' << (r.model[static_cast<std::size_t>(v)] ? v + 1 : -(v + 1));
                    out << " 0\n";
                } else if (solve_proof) {
                    check_proof(cnf, r.trace.proof);
                    auto m = proof_metrics(r.trace.proof);
                    out << "c proof checked size " << m.size << " width " << m.width << '\n';
                }
            }
        } else if (optc->parsed()) {
            auto r = opt(load_formula(opt_path));
            out << "opt " << r.value << '\n' << values_line(r.witness);
        } else if (spinec->parsed()) {
            if (sniff_format(spine_path) == "edge") {
                auto graph = load_graph(spine_path);
                auto gp = parse_graph_problem(spine_problem.empty() ? "3col" : spine_problem);
                const int budget = g.budget_n >= 0 ? g.budget_n : 20;
                SpineOptions o;
                o.max_sat_calls = spine_calls;
                auto pairs = gp == GraphProblem::gbp ? gbp_spine(graph, budget) : col3_spine(graph, o);
                write_pairs(out, pairs, graph.num_vertices(), fmt::format("spine {}", to_string(gp)));
            } else {
                auto f = load_formula(spine_path);
                if (g.budget_n >= 0 && f.num_vars() > g.budget_n)
                    throw BudgetExceeded(fmt::format("n = {} exceeds --budget-n {}", f.num_vars(), g.budget_n));
                SpineOptions o;
                o.constraint_spine = !spine_vars_only;
                o.fast_path = !spine_no_fast;
                o.max_sat_calls = spine_calls;
                if (spine_literals) {
                    out << "literal-spine\n";
                    for (Lit l : literal_spine(f, o))
                        out << "l " << l.dimacs() << '\n';
                } else {
                    auto u = ConstraintUniverse::for_formula(f);
                    write_report(out, u, spine(f, u, o));
                }
            }
        } else if (bb->parsed()) {
            if (sniff_format(bb_path) == "edge") {
                auto graph = load_graph(bb_path);
                auto gp = parse_graph_problem(bb_problem.empty() ? "gbp" : bb_problem);
                if (gp == GraphProblem::gbp) {
                    auto r = gbp_backbone_exact(graph, g.budget_n >= 0 ? g.budget_n : 20);
                    out << "opt " << r.opt << '\n';
                    write_pairs(out, r.pairs, graph.num_vertices(), "backbone gbp");
                } else {
                    auto r = col3_backbone_exact(graph, g.budget_n >= 0 ? g.budget_n : 15);
                    out << "opt " << r.opt << '\n';
                    write_pairs(out, r.pairs, graph.num_vertices(), "backbone 3col");
                }
            } else {
                auto f = load_formula(bb_path);
                if (g.budget_n >= 0 && f.num_vars() > g.budget_n)
                    throw BudgetExceeded(fmt::format("n = {} exceeds --budget-n {}", f.num_vars(), g.budget_n));
                auto u = ConstraintUniverse::for_formula(f);
                write_report(out, u, backbone(f, u));
            }
        } else if (musc->parsed()) {
            auto f = load_formula(mus_path);
            write_instance(out, mus_extract(f).subformula);
        } else if (an->parsed()) {
            auto f = load_formula(an_path);
            auto cs = c_star(f);
            out << "c_star " << format_fraction(cs.c_star) << '\n';
            auto ds = delta_star(f, parse_rational(an_r));
            out << "delta_star r=" << ds.r.numerator() << '/' << ds.r.denominator() << ' ' << format_fraction(ds.delta_star)
                << '\n';
            if (!an_x.empty() && !an_y.empty()) {
                auto v = is_xy_sparse(formula_hypergraph(f), parse_rational(an_x), parse_rational(an_y));
                out << "sparse " << (v.sparse ? "yes" : "no") << " method " << v.method << '\n';
                if (!v.sparse) {
                    out << "violating";
                    for (int x : v.violating_set)
                        out << ' ' << x + 1;
                    out << '\n';
                }
            }
            if (f.domain() == 2)
                for (const auto& tpl : f.templates().templates()) {
                    auto imps = implicate_check(tpl, an_len);
                    out << "template " << tpl.id() << " implicates " << imps.size();
                    for (const auto& clause : imps) {
                        out << " (";
                        for (std::size_t i = 0; i < clause.size(); ++i)
                            out << (i ? " " : "") << clause[i].dimacs();
                        out << ')';
                    }
                    out << '\n';
                }
            auto order = free_private_ordering(f);
            out << "free_private_ordering " << (order ? "yes" : "no") << '\n';
        } else if (eo->parsed()) {
            auto graph = load_graph(eo_path);
            eo_cfg.problem = parse_graph_problem(eo_problem);
            eo_cfg.seed = g.seed;
            auto pool = eo_sample(graph, eo_cfg);
            auto est = backbone_estimate(pool);
            out << fmt::format("estimate f_BC {} pool {} (optima-intersection reconstruction; upper bound{})\n",
                               format_fraction(est.fraction), est.pool_size, est.truncated ? ", pool truncated" : "");
            out << fmt::format("eo tau={} restarts={} steps={}\n", eo_cfg.tau, eo_cfg.restarts,
                               eo_cfg.steps > 0 ? eo_cfg.steps : 200 * static_cast<std::int64_t>(graph.num_vertices()));
            write_pool(out, pool);
        } else if (sw->parsed()) {
            if (g.config.empty())
                throw ContractError("sweep needs --config");
            auto cfg = load_sweep_config(g.config);
            if (g.seed_set)
                cfg.seed = g.seed;
            if (g.budget_n >= 0)
                cfg.budget_n = cfg.spine_budget_n = cfg.backbone_budget_n = g.budget_n;
            auto points = sweep(cfg);
            write_csv(out, points);
            if (g.out.empty() && !cfg.csv.empty())
                g.out = cfg.csv;
            if (!cfg.svg.empty())
                emit_svg(points, PlotSpec{cfg.plot_column, cfg.verticals, ""}, cfg.svg);
            try {
                write_thresholds(std::cerr, threshold_estimate(points, sw_eps), sw_eps);
            } catch (const Error& e) {
                std::cerr << "threshold: " << e.what() << '\n';
            }
            if (cfg.spine && !points.front().f_S_values.empty()) {
                try {
                    write_probe(std::cerr, discontinuity_probe(points, cfg.eta));
                } catch (const Error& e) {
                    std::cerr << "probe: " << e.what() << '\n';
                }
            }
        } else if (plot->parsed()) {
            std::istringstream in(read_file(plot_csv));
            auto points = read_csv(in);
            write_svg(out, points, PlotSpec{plot_column, plot_verticals, plot_title});
        }
        emit(g, out.str());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
