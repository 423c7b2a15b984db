// Acceptance run: one line per criterion, "PASS" or "FAIL" plus the measured
// numbers. Pass criterion numbers as arguments to run a subset.

#include "oracles.hpp"

#include "spinelab/generators.hpp"
#include "spinelab/harness.hpp"
#include "spinelab/heuristics.hpp"
#include "spinelab/io.hpp"
#include "spinelab/order_params.hpp"
#include "spinelab/rng.hpp"
#include "spinelab/solver.hpp"
#include "spinelab/structure.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace spinelab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct MusSample {
    std::string family;
    Formula mus;
};

// Relabels the variables of f to 0..|Var(f)|-1.
Formula compact(const Formula& f) {
    const auto vars = f.variables();
    std::map<int, int> index;
    for (std::size_t i = 0; i < vars.size(); ++i)
        index[vars[i]] = static_cast<int>(i);
    std::vector<Constraint> cs;
    for (auto c : f.constraints()) {
        for (int& v : c.vars)
            v = index[v];
        cs.push_back(std::move(c));
    }
    return Formula(static_cast<int>(vars.size()), f.template_ptr(), std::move(cs));
}

// MUSes of random unsatisfiable 3-SAT and 3-XOR-SAT instances, n in [10, 18].
const std::vector<MusSample>& mus_corpus() {
    static std::vector<MusSample> corpus = [] {
        std::vector<MusSample> out;
        const std::vector<std::pair<std::string, double>> families{{"3-sat", 6.0}, {"3-xor", 1.4}};
        for (const auto& [name, c] : families) {
            auto p = parse_problem(name);
            int found = 0;
            for (std::uint64_t s = 0; found < 110; ++s) {
                const int n = 10 + static_cast<int>(s % 9);
                Formula f = sample_formula(p, n, c, 2024, s);
                if (decide(f).sat)
                    continue;
                out.push_back({name, mus_extract(f).subformula});
                ++found;
            }
        }
        return out;
    }();
    return corpus;
}

Outcome criterion_1() {
    std::size_t ok = 0, total = 0;
    std::size_t spine_ok = 0;
    for (const auto& s : mus_corpus()) {
        ++total;
        const Formula m = compact(s.mus);
        // Minimality is the witness: for D in M containing x, Xi = M - D is
        // satisfiable while Xi + D = M is not, so Var(D) lies in the spine.
        bool good = oracle::minimally_unsat(m);
        ConstraintUniverse u = universe_for(parse_problem(s.family), m.num_vars());
        for (const auto& c : m.constraints())
            good = good && u.find(c).has_value();
        ok += good;

        auto r = spine(s.mus, universe_for(parse_problem(s.family), s.mus.num_vars()), {.constraint_spine = false});
        const auto vars = s.mus.variables();
        spine_ok += std::includes(r.variables.begin(), r.variables.end(), vars.begin(), vars.end());
    }
    return {total >= 200 && ok == total && spine_ok == total,
            fmt::format("{} MUSes; brute-force witness {}/{}; library spine covers Var(MUS) {}/{}", total, ok, total,
                        spine_ok, total)};
}

TemplateSetPtr random_ternary_templates(Rng& rng) {
    std::vector<ConstraintTemplate> tpls;
    const int count = 1 + static_cast<int>(rng.below(2));
    for (int id = 0; id < count; ++id) {
        std::vector<std::uint8_t> table(9);
        do {
            for (auto& b : table)
                b = rng.coin() ? 1 : 0;
        } while (std::count(table.begin(), table.end(), 1) == 0 || std::count(table.begin(), table.end(), 1) == 9);
        tpls.emplace_back(id, 3, 2, std::move(table));
    }
    return std::make_shared<const TemplateSet>(3, 2, std::move(tpls));
}

Outcome criterion_2() {
    const std::vector<std::string> names{"3-sat", "2-sat", "3-xor", "1-in-3", "ternary"};
    const std::vector<Rational> rs{Rational(1), Rational(3, 2), Rational(2), Rational(3)};
    std::map<std::string, int> bad;
    int instances = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        Rng rng(77, s);
        const std::string& name = names[s % names.size()];
        std::optional<Formula> f;
        std::optional<ConstraintUniverse> u;
        const int m = 1 + static_cast<int>(rng.below(14));
        if (name == "ternary") {
            const int n = 3 + static_cast<int>(rng.below(3));
            auto ts = random_ternary_templates(rng);
            f = gen_csp({Model::csp_counting, n, m, ts, 77, s});
            u.emplace(n, ts);
        } else {
            auto p = parse_problem(name);
            const int n = p.k + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(8 - p.k)));
            GenSpec spec{p.signed_model ? Model::sat_neg : Model::csp_counting, n, m, p.templates, 77, s};
            f = p.signed_model ? gen_sat_neg(spec) : gen_csp(spec);
            u.emplace(universe_for(p, n));
        }
        ++instances;

        const auto sc = oracle::spine_constraints(*f, *u);
        auto sp = spine(*f, *u);
        if (sp.constraints != sc)
            ++bad["S_C"];
        if (sp.variables != oracle::vars_of(*u, sc))
            ++bad["S"];
        const auto bc = oracle::backbone_constraints(*f, *u);
        auto bb = backbone(*f, *u);
        if (bb.constraints != bc)
            ++bad["B_C"];
        if (bb.variables != oracle::vars_of(*u, bc))
            ++bad["B"];
        if (c_star(*f).c_star != oracle::c_star(*f))
            ++bad["c*"];
        for (const auto& r : rs)
            if (delta_star(*f, r).delta_star != oracle::delta_star(*f, r)) {
                ++bad["delta*"];
                break;
            }
    }
    std::string detail = fmt::format("{} instances", instances);
    for (const auto& [what, count] : bad)
        detail += fmt::format("; {} mismatches on {}", count, what);
    if (bad.empty())
        detail += "; all outputs equal the oracles";
    return {bad.empty() && instances == 1000, detail};
}

Formula one_in_three_cycle() {
    auto ts = named_family("1-in-k-sat", 3);
    return Formula(6, ts,
                   {Constraint{0, {0, 1, 2}, {0, 0, 0}}, Constraint{0, {2, 3, 0}, {1, 0, 0}},
                    Constraint{0, {0, 4, 2}, {1, 0, 1}}, Constraint{0, {2, 5, 0}, {0, 0, 1}}});
}

// Every model of f satisfies the clause.
bool entails(const Formula& f, const Clause& clause) {
    bool holds = true;
    oracle::for_each_assignment(f.num_vars(), 2, [&](const Assignment& a) {
        if (!holds || !f.satisfied_by(a))
            return;
        bool sat = false;
        for (Lit l : clause)
            sat = sat || l.holds(a[l.var()]);
        holds = sat;
    });
    return holds;
}

Outcome criterion_3() {
    const Formula f = one_in_three_cycle();
    const bool minimal = oracle::minimally_unsat(f) && mus_extract(f).indices.size() == f.size();
    const Rational ratio(static_cast<std::int64_t>(f.size()), static_cast<std::int64_t>(f.variables().size()));
    const bool implicates = entails(f, {Lit::neg(0), Lit::neg(2)}) && entails(f, {Lit::pos(0), Lit::pos(2)});
    // The 2-clauses also follow from proper subformulas, which is the informative reading.
    std::vector<std::size_t> first_two{0, 1};
    const bool from_pair = entails(f.subformula(first_two), {Lit::neg(0), Lit::neg(2)});
    const bool ratio_ok = ratio == Rational(1, 2);
    return {minimal && implicates && ratio_ok,
            fmt::format("minimally unsat {}; |F|/|Var(F)| = {}/{} (expected 1/2); entails x1'+x3' and x1+x3 {}; "
                        "first two constraints alone entail x1'+x3' {}; c* = {}",
                        minimal ? "yes" : "no", ratio.numerator(), ratio.denominator(), implicates ? "yes" : "no",
                        from_pair ? "yes" : "no", fmt::format("{}/{}", c_star(f).c_star.numerator(), c_star(f).c_star.denominator()))};
}

Outcome criterion_4() {
    std::size_t total = 0, ok = 0, delta_ok = 0;
    Rational lowest(100);
    for (const auto& s : mus_corpus()) {
        ++total;
        const auto c = c_star(s.mus).c_star;
        lowest = std::min(lowest, c);
        ok += c >= Rational(2, 3);
        delta_ok += delta_star(s.mus, 3).delta_star >= Rational(0);
    }
    return {total >= 200 && ok == total,
            fmt::format("{} MUSes; c* >= 2/3 on {}; min c* = {}/{}; delta*_3 >= 0 on {}", total, ok, lowest.numerator(),
                        lowest.denominator(), delta_ok)};
}

Outcome criterion_5() {
    const bool sat3 = implicate_check(named_family("k-sat", 3)->at(0), 2).empty();
    const bool xor3 = implicate_check(named_family("k-xor-sat", 3)->at(0), 2).empty();
    const auto one = implicate_check(named_family("1-in-k-sat", 3)->at(0), 2).size();
    const auto two = implicate_check(named_family("2-sat", 2)->at(0), 2).size();
    return {sat3 && xor3 && one > 0 && two > 0,
            fmt::format("3-SAT none {}; 3-XOR none {}; 1-in-3 has {}; 2-SAT has {}", sat3, xor3, one, two)};
}

SweepConfig base_config(const std::string& problem, std::vector<int> n, std::vector<double> c, int samples) {
    SweepConfig cfg;
    cfg.problem = problem;
    cfg.n = std::move(n);
    cfg.c = std::move(c);
    cfg.samples = samples;
    cfg.seed = 11;
    return cfg;
}

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        out.push_back(lo + i * step);
    return out;
}

Outcome criterion_6() {
    auto cfg = base_config("2-sat", {200}, grid(0.5, 2.5, 0.1), 500);
    auto pts = sweep(cfg);
    auto t = threshold_estimate(pts, 0.1);
    const double c = t.front().c_half;
    return {std::abs(c - 1.0) <= 0.15, fmt::format("c_1/2 = {:.4f} at n = 200 (target 1.0 +/- 15%)", c)};
}

Outcome criterion_7() {
    auto cfg = base_config("gbp", {256}, grid(0.8, 2.4, 0.05), 500);
    auto pts = sweep(cfg);
    auto t = threshold_estimate(pts, 0.1);
    const double c = t.front().c_half;
    const double target = 2 * std::log(2.0);
    return {std::abs(c - target) / target <= 0.15,
            fmt::format("c_1/2 = {:.4f} at n = 256 (target {:.4f} +/- 15%)", c, target)};
}

Outcome criterion_8() {
    int ok = 0, nonempty = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(8, s);
        const int n = 8 + 2 * static_cast<int>(rng.below(5));
        const double c = 1.0 + rng.uniform01();
        Graph g = sample_graph(n, c, 8, s);
        auto fast = gbp_spine_fast_path(g);
        auto exact = gbp_spine(g);
        nonempty += !fast.empty();
        ok += std::includes(exact.begin(), exact.end(), fast.begin(), fast.end());
    }
    return {ok == 100, fmt::format("fast path within exact spine on {}/100 graphs ({} with a giant component)", ok, nonempty)};
}

Outcome criterion_9() {
    const std::vector<int> sizes{16, 24, 32};
    const std::vector<std::pair<std::string, std::string>> families{
        {"3-sat", "increasing"}, {"3-xor", "increasing"}, {"2-sat", "decreasing"}};
    bool pass = true;
    std::string detail;
    for (const auto& [name, expected] : families) {
        // Probe density: 5% above the largest empirical c_1/2 over the sizes.
        const auto k = parse_problem(name).k;
        const std::vector<double> pilot_grid = k == 2 ? grid(0.5, 3.0, 0.1) : name == "3-xor" ? grid(0.5, 1.6, 0.05) : grid(3.0, 7.0, 0.1);
        auto pilot = sweep(base_config(name, sizes, pilot_grid, 300));
        double c_half = 0;
        for (const auto& t : threshold_estimate(pilot, 0.1))
            c_half = std::max(c_half, t.c_half);
        const double c = std::round(1.05 * c_half * 100) / 100;

        auto cfg = base_config(name, sizes, {c}, 300);
        cfg.spine = true;
        cfg.spine_budget_n = 32;
        cfg.spine_stop = 0.1;
        auto probe = discontinuity_probe(sweep(cfg), {0.1});
        const std::string trend = probe.trends.front().trend;
        pass = pass && trend == expected;
        detail += fmt::format("{}{} c={:.2f}:", detail.empty() ? "" : "; ", name, c);
        for (const auto& row : probe.rows)
            detail += fmt::format(" {:.3f}", row.fraction);
        detail += fmt::format(" {} (want {})", trend, expected);
    }
    return {pass, detail};
}

Outcome criterion_10() {
    auto cfg = base_config("3-sat", {50}, {3.0, 4.3, 6.0}, 500);
    cfg.dpll = true;
    auto pts = sweep(cfg);
    const double lo = *pts[0].dpll_nodes_median, mid = *pts[1].dpll_nodes_median, hi = *pts[2].dpll_nodes_median;
    return {mid > lo && mid > hi, fmt::format("median nodes {:.1f} / {:.1f} / {:.1f} at c = 3.0 / 4.3 / 6.0", lo, mid, hi)};
}

double pair_fraction(std::size_t pairs, int n) {
    return static_cast<double>(pairs) / static_cast<double>(binomial(n, 2));
}

Outcome criterion_11() {
    bool pass = true;
    std::string detail;
    const int instances = 10;
    for (int n : {64, 128})
        for (double c : {1.2, 1.6}) {
            double bc = 0, fast = 0, giant = 0;
            int truncated = 0, bound_ok = 0;
            std::size_t min_pool = static_cast<std::size_t>(-1), pools = 0;
            for (int s = 0; s < instances; ++s) {
                Graph g = sample_graph(n, c, 11, sample_stream(n, c, s));
                auto pool = eo_sample(g, {.seed = static_cast<std::uint64_t>(s), .problem = GraphProblem::gbp});
                auto est = backbone_estimate(pool);
                bc += boost::rational_cast<double>(est.fraction);
                truncated += est.truncated;
                min_pool = std::min(min_pool, est.pool_size);
                pools += est.pool_size;

                const auto labels = g.component_labels();
                std::map<int, int> sizes;
                for (int l : labels)
                    ++sizes[l];
                int largest = 0;
                for (auto [l, size] : sizes)
                    largest = std::max(largest, size);
                const double gf = largest > n / 2 ? pair_fraction(binomial(largest, 2), n) : 0.0;
                const double ff = pair_fraction(gbp_spine_fast_path(g).size(), n);
                giant += gf;
                fast += ff;
                bound_ok += ff >= gf;
            }
            bc /= instances;
            fast /= instances;
            giant /= instances;
            pass = pass && bc <= 0.05 && bound_ok == instances;
            detail += fmt::format("{}n={} c={:.1f}: f_BC {:.4f}, spine {:.4f} >= giant {:.4f} on {}/{}, pool mean {} min {}, "
                                  "truncated {}",
                                  detail.empty() ? "" : "; ", n, c, bc, fast, giant, bound_ok, instances,
                                  pools / instances, min_pool, truncated);
        }
    return {pass, detail};
}

Outcome criterion_12() {
    int cost_ok = 0, exhaustive = 0, equal = 0, bounded = 0;
    for (int s = 0; s < 20; ++s) {
        Graph g = sample_graph(14, 1.386, 12, static_cast<std::uint64_t>(s));
        auto exact = gbp_backbone_exact(g);
        auto pool = eo_sample(g, {.seed = static_cast<std::uint64_t>(s), .problem = GraphProblem::gbp});
        cost_ok += pool.best_cost == exact.opt;
        if (pool.best_cost != exact.opt)
            continue;
        auto est = backbone_estimate(pool);
        if (!pool.truncated && pool.configs.size() == exact.optimal_partitions) {
            ++exhaustive;
            equal += est.pairs == exact.pairs;
        } else {
            bounded += est.fraction >= exact.fraction &&
                       std::includes(est.pairs.begin(), est.pairs.end(), exact.pairs.begin(), exact.pairs.end());
        }
    }
    const bool pass = cost_ok == 20 && equal == exhaustive && bounded == 20 - exhaustive;
    return {pass, fmt::format("best cost exact {}/20; exhaustive pools {} (equal {}); partial pools {} (never below {})",
                              cost_ok, exhaustive, equal, 20 - exhaustive, bounded)};
}

Outcome criterion_13() {
    using Big = boost::multiprecision::cpp_dec_float_50;
    int ok = 0, points = 0;
    double worst = 0;
    for (int k : {3, 4})
        for (double y : {0.75, 1.0, 1.25, 1.5, 2.0})
            for (double c : {0.5, 1.0, 2.0, 4.27, 6.0}) {
                ++points;
                const Big e = boost::multiprecision::exp(Big(1));
                const Big by(y), bc(c);
                const Big inner = (Big(1) / (2 * e)) * boost::multiprecision::pow(by / (bc * e), by);
                const Big expected = boost::multiprecision::pow(inner, Big(1) / (by * (k - 1) - 1));
                const double got = x_bound(y, c, k);
                const double rel = std::abs(static_cast<double>((Big(got) - expected) / expected));
                worst = std::max(worst, rel);
                ok += rel <= 1e-12;
            }
    const double hand = x_bound(1, 1, 3);
    const double target = 1 / (2 * std::exp(2.0));
    const bool hand_ok = std::abs(hand - target) <= 1e-15;
    return {ok == points && points == 50 && hand_ok,
            fmt::format("{}/{} points within 1e-12 (worst relative error {:.2e}); x(1,1,3) = {:.15f} vs 1/(2e^2) = {:.15f}",
                        ok, points, worst, hand, target)};
}

Outcome criterion_14() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spinelab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = SPINELAB_CLI;
    {
        std::ofstream cfg(dir / "sweep.cfg");
        cfg << "problem = 3-sat\nn = 10\nc = 3:6:1\nsamples = 5\n"
               "analyzers = spine-constraints,backbone,dpll,width,mus\n";
        std::ofstream gcfg(dir / "gbp.cfg");
        gcfg << "problem = gbp\nn = 16\nc = 1, 2\nsamples = 3\nanalyzers = spine-constraints,backbone,eo\n";
    }
    auto run = [&](const std::string& args, const std::string& out) {
        const std::string cmd = cli + " --seed 5 --out " + (dir / out).string() + " " + args + " 2>/dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    bool setup = run("gen --problem 3-sat --n 12 --density 5", "f.gcsp") &&
                 run("gen --problem 3-xor-sat --n 12 --density 1.2", "x.gcsp") &&
                 run("gen --problem gbp --n 14 --density 2", "g.edge");
    const std::vector<std::pair<std::string, std::string>> commands{
        {"gen", "gen --problem 3-sat --n 20 --density 4.2"},
        {"gen-cnf", "gen --problem 3-sat --n 20 --density 4.2 --format cnf"},
        {"solve", "solve --proof " + (dir / "f.gcsp").string()},
        {"opt", "opt " + (dir / "f.gcsp").string()},
        {"spine", "spine " + (dir / "x.gcsp").string()},
        {"spine-literals", "spine --literals " + (dir / "f.gcsp").string()},
        {"spine-gbp", "spine --problem gbp " + (dir / "g.edge").string()},
        {"backbone", "backbone " + (dir / "f.gcsp").string()},
        {"mus", "mus " + (dir / "f.gcsp").string()},
        {"analyze", "analyze --x 1/2 --y 1 " + (dir / "f.gcsp").string()},
        {"eo", "eo --problem gbp " + (dir / "g.edge").string()},
        {"sweep", "--config " + (dir / "sweep.cfg").string() + " sweep"},
        {"sweep-gbp", "--config " + (dir / "gbp.cfg").string() + " sweep"},
    };
    int same = 0, ran = 0;
    std::string failed;
    for (const auto& [name, args] : commands) {
        const bool a = run(args, name + ".1");
        const bool b = run(args, name + ".2");
        if (!a || !b) {
            failed += " " + name + "(exit)";
            continue;
        }
        ++ran;
        if (read_file((dir / (name + ".1")).string()) == read_file((dir / (name + ".2")).string()))
            ++same;
        else
            failed += " " + name;
    }
    const bool plot_a = run("plot " + (dir / "sweep.1").string(), "plot.1");
    const bool plot_b = run("plot " + (dir / "sweep.1").string(), "plot.2");
    const bool plot_same = plot_a && plot_b && read_file((dir / "plot.1").string()) == read_file((dir / "plot.2").string());
    const int total = static_cast<int>(commands.size()) + 1;
    same += plot_same;
    ran += plot_a && plot_b;
    if (!plot_same)
        failed += " plot";
    fs::remove_all(dir);
    return {setup && same == total,
            fmt::format("{}/{} commands byte-identical across reruns{}", same, total, failed.empty() ? "" : "; differing:" + failed)};
}

} // namespace

int main(int argc, char** argv) {
    set_warnings_enabled(false);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"every MUS variable lies in the MUS spine", criterion_1},
        {"spine, backbone, c*, delta* equal brute-force oracles", criterion_2},
        {"1-in-3 four-constraint formula", criterion_3},
        {"c* >= 2/3 on MUSes without short implicates", criterion_4},
        {"implicate classifier", criterion_5},
        {"2-SAT threshold near 1", criterion_6},
        {"GBP threshold near 2 ln 2", criterion_7},
        {"GBP fast path within exact spine", criterion_8},
        {"spine discontinuity signature", criterion_9},
        {"DPLL node-count peak", criterion_10},
        {"GBP backbone small while spine is large", criterion_11},
        {"EO against exact enumeration", criterion_12},
        {"x_bound against high precision", criterion_13},
        {"CLI determinism", criterion_14},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id))
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        fmt::print("{} {:2d} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail, secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
