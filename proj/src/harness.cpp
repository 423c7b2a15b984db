#include "spinelab/harness.hpp"

#include "spinelab/cnf.hpp"
#include "spinelab/generators.hpp"
#include "spinelab/io.hpp"
#include "spinelab/order_params.hpp"
#include "spinelab/rng.hpp"
#include "spinelab/solver.hpp"
#include "spinelab/structure.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

namespace spinelab {

ProblemSpec parse_problem(const std::string& name) {
    ProblemSpec p;
    p.name = name;
    std::smatch m;
    if (name == "3col" || name == "3-col" || name == "gbp") {
        p.graph = true;
        p.graph_problem = parse_graph_problem(name);
        return p;
    }
    if (std::regex_match(name, m, std::regex(R"((\d+)-sat)"))) {
        p.k = std::stoi(m[1]);
        p.templates = named_family("k-sat", p.k);
    } else if (std::regex_match(name, m, std::regex(R"((\d+)-xor(-sat)?)"))) {
        p.k = std::stoi(m[1]);
        p.templates = named_family("k-xor-sat", p.k);
    } else if (std::regex_match(name, m, std::regex(R"(1-in-(\d+)(-sat)?)"))) {
        p.k = std::stoi(m[1]);
        p.templates = named_family("1-in-k-sat", p.k);
    } else {
        throw ContractError("unknown problem '" + name + "'");
    }
    // Families whose signed variants collapse (parity) draw from the closure instead.
    p.signed_model = is_good(*p.templates);
    if (!p.signed_model)
        p.templates = closure(*p.templates);
    return p;
}

Formula sample_formula(const ProblemSpec& p, int n, double c, std::uint64_t seed, std::uint64_t stream) {
    if (p.graph)
        throw ContractError("sample_formula: '" + p.name + "' is a graph problem");
    GenSpec spec;
    spec.n = n;
    spec.m = std::llround(c * n);
    spec.templates = p.templates;
    spec.seed = seed;
    spec.stream = stream;
    if (p.signed_model) {
        spec.model = Model::sat_neg;
        return gen_sat_neg(spec);
    }
    spec.model = Model::csp_counting;
    return gen_csp(spec);
}

Graph sample_graph(int n, double c, std::uint64_t seed, std::uint64_t stream) {
    return gen_graph(n, edges_for_mean_degree(c, n), seed, stream);
}

ConstraintUniverse universe_for(const ProblemSpec& p, int n) {
    return ConstraintUniverse(n, p.templates, p.signed_model);
}

std::uint64_t sample_stream(int n, double c, int sample) {
    std::uint64_t state = static_cast<std::uint64_t>(n);
    std::uint64_t h = splitmix64(state);
    state = h ^ static_cast<std::uint64_t>(std::llround(c * 1e6));
    h = splitmix64(state);
    state = h ^ static_cast<std::uint64_t>(sample);
    return splitmix64(state);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ContractError("config key '" + key + "': '" + v + "' is not a number");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ContractError("config key '" + key + "': '" + v + "' is not an integer");
    }
}

std::vector<double> density_list(const std::string& key, const std::string& v) {
    auto parts = split(v, ':');
    if (parts.size() == 3) {
        const double start = to_double(key, parts[0]);
        const double stop = to_double(key, parts[1]);
        const double step = to_double(key, parts[2]);
        if (!(step > 0))
            throw ContractError("config key '" + key + "': range step must be positive");
        std::vector<double> out;
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long long i = 0; i < count; ++i)
            out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split(v, ','))
        out.push_back(to_double(key, item));
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes")
        return true;
    if (v == "0" || v == "false" || v == "no")
        return false;
    throw ContractError("config key '" + key + "': '" + v + "' is not a boolean");
}

const std::vector<std::string>& plot_columns() {
    static const std::vector<std::string> cols{"p_sat",        "f_S_mean",          "f_B_mean",    "f_SC_mean",
                                               "f_BC_mean",    "dpll_nodes_median", "width_median", "mus_varfrac_mean"};
    return cols;
}

} // namespace

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (key == "problem") {
            cfg.problem = v;
        } else if (key == "n") {
            cfg.n.clear();
            for (const auto& item : split(v, ','))
                cfg.n.push_back(static_cast<int>(to_int(key, item)));
        } else if (key == "c") {
            cfg.c = density_list(key, v);
        } else if (key == "samples") {
            cfg.samples = static_cast<int>(to_int(key, v));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
        } else if (key == "analyzers") {
            cfg.spine = cfg.spine_constraints = cfg.backbone = cfg.dpll = cfg.width = cfg.mus = cfg.eo = false;
            for (const auto& a : split(v, ',')) {
                if (a == "spine")
                    cfg.spine = true;
                else if (a == "spine-constraints")
                    cfg.spine = cfg.spine_constraints = true;
                else if (a == "backbone")
                    cfg.backbone = true;
                else if (a == "dpll")
                    cfg.dpll = true;
                else if (a == "width")
                    cfg.width = true;
                else if (a == "mus")
                    cfg.mus = true;
                else if (a == "eo")
                    cfg.eo = true;
                else if (!a.empty())
                    throw ContractError("unknown analyzer '" + a + "'");
            }
        } else if (key == "budget_n") {
            cfg.budget_n = static_cast<int>(to_int(key, v));
        } else if (key == "spine_budget_n") {
            cfg.spine_budget_n = static_cast<int>(to_int(key, v));
        } else if (key == "backbone_budget_n") {
            cfg.backbone_budget_n = static_cast<int>(to_int(key, v));
        } else if (key == "spine_stop") {
            cfg.spine_stop = to_double(key, v);
        } else if (key == "spine_max_calls") {
            cfg.spine_max_calls = static_cast<std::uint64_t>(to_int(key, v));
        } else if (key == "dpll_node_limit") {
            cfg.dpll_node_limit = static_cast<std::uint64_t>(to_int(key, v));
        } else if (key == "branching") {
            cfg.branching = parse_branching(v);
        } else if (key == "eo_tau") {
            cfg.eo_config.tau = to_double(key, v);
        } else if (key == "eo_restarts") {
            cfg.eo_config.restarts = static_cast<int>(to_int(key, v));
        } else if (key == "eo_steps") {
            cfg.eo_config.steps = to_int(key, v);
        } else if (key == "eo_pool_cap") {
            cfg.eo_config.pool_cap = static_cast<std::size_t>(to_int(key, v));
        } else if (key == "eta") {
            cfg.eta = density_list(key, v);
        } else if (key == "csv") {
            cfg.csv = v;
        } else if (key == "svg") {
            cfg.svg = v;
        } else if (key == "plot_column") {
            cfg.plot_column = v;
        } else if (key == "verticals") {
            cfg.verticals = v.empty() ? std::vector<double>{} : density_list(key, v);
        } else if (key == "spine_exact") {
            if (to_bool(key, v))
                cfg.spine_stop = 0;
        } else {
            throw ContractError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::istringstream in(read_file(path));
    return parse_sweep_config(in);
}

void validate(const SweepConfig& cfg) {
    auto p = parse_problem(cfg.problem);
    if (cfg.samples < 1)
        throw ContractError("samples per cell must be at least 1");
    if (cfg.n.empty() || cfg.c.empty())
        throw ContractError("sweep needs at least one n and one density");
    for (std::size_t i = 1; i < cfg.c.size(); ++i)
        if (!(cfg.c[i] > cfg.c[i - 1]))
            throw ContractError("density grid must be strictly increasing");
    for (double c : cfg.c)
        if (c < 0)
            throw ContractError("densities must be nonnegative");
    for (int n : cfg.n) {
        if (!p.graph && n < p.k)
            throw ContractError("n = " + std::to_string(n) + " is below the arity");
        if (p.graph && p.graph_problem == GraphProblem::gbp && n % 2 != 0)
            throw ContractError("gbp sweeps need even n");
        if (n < 1)
            throw ContractError("n must be positive");
    }
    if (std::find(plot_columns().begin(), plot_columns().end(), cfg.plot_column) == plot_columns().end())
        throw ContractError("unknown plot column '" + cfg.plot_column + "'");
    for (double e : cfg.eta)
        if (!(e > 0 && e <= 1))
            throw ContractError("eta values must lie in (0, 1]");
    if (cfg.spine_stop < 0 || cfg.spine_stop > 1)
        throw ContractError("spine_stop must lie in [0, 1]");
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// Collects per-sample values of one column; the aggregate is absent unless
// every sample that should contribute did.
struct Column {
    std::string name;
    std::vector<double> values;
    std::map<std::string, int> missing;

    void skip(const std::string& code) { ++missing[code]; }

    std::optional<double> aggregate(bool use_median, std::vector<std::string>& reasons, const std::string& empty_code) const {
        for (const auto& [code, count] : missing)
            reasons.push_back(fmt::format("{}:{}({})", name, code, count));
        if (!missing.empty())
            return std::nullopt;
        if (values.empty()) {
            reasons.push_back(name + ":" + empty_code);
            return std::nullopt;
        }
        return use_median ? median(values) : mean(values);
    }
};

double pair_fraction(std::size_t pairs, int n) {
    return n < 2 ? 0.0 : static_cast<double>(pairs) / static_cast<double>(binomial(n, 2));
}

SweepPoint run_graph_cell(const SweepConfig& cfg, const ProblemSpec& p, int n, double c) {
    SweepPoint pt;
    pt.problem = cfg.problem;
    pt.n = n;
    pt.c = c;
    pt.samples = cfg.samples;
    Column sc{"f_SC_mean", {}, {}};
    Column bc{"f_BC_mean", {}, {}};
    int sat = 0;
    bool estimated = false;
    std::size_t min_pool = static_cast<std::size_t>(-1);
    bool any_truncated = false;
    const bool gbp = p.graph_problem == GraphProblem::gbp;
    for (int s = 0; s < cfg.samples; ++s) {
        const auto stream = sample_stream(n, c, s);
        auto g = sample_graph(n, c, cfg.seed, stream);
        sat += (gbp ? gbp_bisectable(g) : decide(coloring_formula(g)).sat) ? 1 : 0;
        if (cfg.spine) {
            if (n <= cfg.spine_budget())
                sc.values.push_back(pair_fraction(gbp ? gbp_spine(g, cfg.spine_budget()).size() : col3_spine(g).size(), n));
            else
                sc.skip("over-budget-n");
        }
        if (cfg.backbone || cfg.eo) {
            if (cfg.backbone && n <= cfg.backbone_budget()) {
                auto frac = gbp ? gbp_backbone_exact(g, cfg.backbone_budget()).fraction
                                : col3_backbone_exact(g, cfg.backbone_budget()).fraction;
                bc.values.push_back(boost::rational_cast<double>(frac));
            } else if (cfg.eo) {
                EoConfig eo = cfg.eo_config;
                eo.problem = p.graph_problem;
                eo.seed = stream ^ cfg.seed;
                auto est = backbone_estimate(eo_sample(g, eo));
                bc.values.push_back(boost::rational_cast<double>(est.fraction));
                estimated = true;
                min_pool = std::min(min_pool, est.pool_size);
                any_truncated = any_truncated || est.truncated;
            } else {
                bc.skip("over-budget-n");
            }
        }
    }
    pt.p_sat = static_cast<double>(sat) / cfg.samples;
    pt.reasons.push_back("f_S_mean:undefined-for-graphs");
    pt.reasons.push_back("f_B_mean:undefined-for-graphs");
    if (cfg.spine)
        pt.f_SC_mean = sc.aggregate(false, pt.reasons, "no-samples");
    else
        pt.reasons.push_back("f_SC_mean:off");
    if (cfg.backbone || cfg.eo) {
        pt.f_BC_mean = bc.aggregate(false, pt.reasons, "no-samples");
        if (estimated)
            pt.reasons.push_back(fmt::format("f_BC_mean:eo-upper-bound(min-pool={}{})", min_pool,
                                             any_truncated ? ",truncated" : ""));
    } else {
        pt.reasons.push_back("f_BC_mean:off");
    }
    pt.reasons.push_back("dpll_nodes_median:unsupported-for-graphs");
    pt.reasons.push_back("width_median:unsupported-for-graphs");
    pt.reasons.push_back("mus_varfrac_mean:unsupported-for-graphs");
    return pt;
}

SweepPoint run_csp_cell(const SweepConfig& cfg, const ProblemSpec& p, int n, double c) {
    SweepPoint pt;
    pt.problem = cfg.problem;
    pt.n = n;
    pt.c = c;
    pt.samples = cfg.samples;
    Column fs{"f_S_mean", {}, {}};
    Column fb{"f_B_mean", {}, {}};
    Column fsc{"f_SC_mean", {}, {}};
    Column fbc{"f_BC_mean", {}, {}};
    Column nodes{"dpll_nodes_median", {}, {}};
    Column width{"width_median", {}, {}};
    Column musf{"mus_varfrac_mean", {}, {}};
    std::optional<ConstraintUniverse> universe;
    const bool spine_on = cfg.spine && n <= cfg.spine_budget();
    const bool backbone_on = cfg.backbone && n <= cfg.backbone_budget();
    if (spine_on || backbone_on)
        universe.emplace(universe_for(p, n));
    int sat = 0;
    for (int s = 0; s < cfg.samples; ++s) {
        const auto stream = sample_stream(n, c, s);
        auto f = sample_formula(p, n, c, cfg.seed, stream);
        auto cnf = to_cnf(f);
        bool is_sat;
        if (cfg.dpll) {
            DpllOptions o;
            o.branching = cfg.branching;
            o.node_limit = cfg.dpll_node_limit;
            try {
                auto r = dpll_refute(cnf, o);
                nodes.values.push_back(static_cast<double>(r.trace.nodes));
                is_sat = r.sat;
            } catch (const BudgetExceeded&) {
                nodes.skip("node-limit");
                is_sat = dpll_refute(cnf, {}).sat;
            }
        } else {
            is_sat = dpll_refute(cnf, {}).sat;
        }
        sat += is_sat ? 1 : 0;
        if (!is_sat && cfg.width) {
            DpllOptions o;
            o.branching = cfg.branching;
            o.build_proof = true;
            o.node_limit = cfg.dpll_node_limit;
            try {
                auto r = dpll_refute(cnf, o);
                width.values.push_back(static_cast<double>(proof_metrics(r.trace.proof).width));
            } catch (const BudgetExceeded&) {
                width.skip("node-limit");
            }
        }
        if (!is_sat && cfg.mus) {
            auto m = mus_extract(f);
            musf.values.push_back(static_cast<double>(m.subformula.variables().size()) / n);
        }
        if (spine_on) {
            SpineOptions o;
            o.constraint_spine = cfg.spine_constraints;
            o.max_sat_calls = cfg.spine_max_calls;
            if (cfg.spine_stop > 0)
                o.stop_at_vars = static_cast<std::size_t>(std::ceil(cfg.spine_stop * n - 1e-9));
            try {
                auto r = spine(f, *universe, o);
                const double value = boost::rational_cast<double>(r.f_S);
                pt.f_S_values.push_back(value);
                pt.f_S_exact.push_back(r.complete ? 1 : 0);
                if (r.complete)
                    fs.values.push_back(value);
                else
                    fs.skip("early-exit");
                if (cfg.spine_constraints) {
                    if (r.constraints_computed)
                        fsc.values.push_back(boost::rational_cast<double>(r.f_SC));
                    else
                        fsc.skip("early-exit");
                }
            } catch (const BudgetExceeded&) {
                fs.skip("call-budget");
                if (cfg.spine_constraints)
                    fsc.skip("call-budget");
            }
        }
        if (backbone_on) {
            auto r = backbone(f, *universe);
            fb.values.push_back(boost::rational_cast<double>(r.f_B));
            fbc.values.push_back(boost::rational_cast<double>(r.f_BC));
        }
    }
    pt.p_sat = static_cast<double>(sat) / cfg.samples;

    auto fill = [&](Column& col, bool requested, bool within_budget, bool use_median, const char* empty_code,
                    std::optional<double>& target) {
        if (!requested)
            pt.reasons.push_back(col.name + ":off");
        else if (!within_budget)
            pt.reasons.push_back(col.name + ":over-budget-n");
        else
            target = col.aggregate(use_median, pt.reasons, empty_code);
    };
    fill(fs, cfg.spine, spine_on, false, "no-samples", pt.f_S_mean);
    fill(fb, cfg.backbone, backbone_on, false, "no-samples", pt.f_B_mean);
    fill(fsc, cfg.spine_constraints, spine_on, false, "no-samples", pt.f_SC_mean);
    fill(fbc, cfg.backbone, backbone_on, false, "no-samples", pt.f_BC_mean);
    fill(nodes, cfg.dpll, true, true, "no-samples", pt.dpll_nodes_median);
    fill(width, cfg.width, true, true, "no-unsat-samples", pt.width_median);
    fill(musf, cfg.mus, true, false, "no-unsat-samples", pt.mus_varfrac_mean);
    return pt;
}

} // namespace

std::vector<SweepPoint> sweep(const SweepConfig& cfg) {
    validate(cfg);
    const auto p = parse_problem(cfg.problem);
    std::vector<SweepPoint> out;
    for (int n : cfg.n)
        for (double c : cfg.c)
            out.push_back(p.graph ? run_graph_cell(cfg, p, n, c) : run_csp_cell(cfg, p, n, c));
    return out;
}

namespace {

std::map<int, std::vector<const SweepPoint*>> by_n(const std::vector<SweepPoint>& points) {
    std::map<int, std::vector<const SweepPoint*>> groups;
    for (const auto& pt : points)
        groups[pt.n].push_back(&pt);
    for (auto& [n, g] : groups)
        std::stable_sort(g.begin(), g.end(), [](const SweepPoint* a, const SweepPoint* b) { return a->c < b->c; });
    return groups;
}

} // namespace

std::vector<ThresholdEstimate> threshold_estimate(const std::vector<SweepPoint>& points, double eps) {
    if (!(eps > 0 && eps < 0.5))
        throw ContractError("threshold_estimate: eps must lie in (0, 1/2)");
    if (points.empty())
        throw ContractError("threshold_estimate: empty table");
    std::vector<ThresholdEstimate> out;
    for (const auto& [n, group] : by_n(points)) {
        auto crossing = [&, n = n](double level) {
            const auto& g = group;
            if (1.0 - g.front()->p_sat >= level)
                throw Error(fmt::format("threshold_estimate: n = {}: grid starts above unsat level {:.3f}; "
                                        "extend the density grid on the low side",
                                        n, level));
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                const double a = 1.0 - g[i]->p_sat;
                const double b = 1.0 - g[i + 1]->p_sat;
                if (a < level && b >= level)
                    return g[i]->c + (level - a) / (b - a) * (g[i + 1]->c - g[i]->c);
            }
            throw Error(fmt::format("threshold_estimate: n = {}: unsat fraction never reaches {:.3f}; "
                                    "extend the density grid on the high side",
                                    n, level));
        };
        ThresholdEstimate t;
        t.n = n;
        t.c_eps = crossing(eps);
        t.c_half = crossing(0.5);
        t.c_one_minus_eps = crossing(1.0 - eps);
        t.sharpness = (t.c_one_minus_eps - t.c_eps) / t.c_half;
        out.push_back(t);
    }
    return out;
}

ProbeReport discontinuity_probe(const std::vector<SweepPoint>& points, const std::vector<double>& etas) {
    if (points.empty())
        throw ContractError("discontinuity_probe: empty table");
    ProbeReport report;
    std::map<std::pair<double, double>, std::vector<double>> series;
    for (const auto& pt : points) {
        if (pt.f_S_values.empty())
            throw ContractError(fmt::format("discontinuity_probe: cell n = {}, c = {:.4f} has no f_S samples", pt.n, pt.c));
        for (double eta : etas) {
            int hits = 0;
            for (std::size_t i = 0; i < pt.f_S_values.size(); ++i) {
                const double v = pt.f_S_values[i];
                if (!pt.f_S_exact[i] && v < eta)
                    throw ContractError(fmt::format("discontinuity_probe: eta {:.3f} exceeds the early-exit level used "
                                                    "for cell n = {}, c = {:.4f}",
                                                    eta, pt.n, pt.c));
                hits += v >= eta - 1e-12 ? 1 : 0;
            }
            ProbeRow row{pt.n, pt.c, eta, static_cast<double>(hits) / static_cast<double>(pt.f_S_values.size()),
                         static_cast<int>(pt.f_S_values.size())};
            report.rows.push_back(row);
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const ProbeRow& a, const ProbeRow& b) {
        return std::tie(a.c, a.eta, a.n) < std::tie(b.c, b.eta, b.n);
    });
    for (const auto& row : report.rows)
        series[{row.c, row.eta}].push_back(row.fraction);
    for (const auto& [key, values] : series) {
        bool up = true;
        bool down = true;
        for (std::size_t i = 1; i < values.size(); ++i) {
            up = up && values[i] > values[i - 1];
            down = down && values[i] < values[i - 1];
        }
        std::string trend = values.size() < 2 ? "single-size" : up ? "increasing" : down ? "decreasing" : "non-monotone";
        report.trends.push_back({key.first, key.second, trend});
    }
    return report;
}

const char* const kCsvHeader =
    "problem,n,c,samples,p_sat,f_S_mean,f_B_mean,f_SC_mean,f_BC_mean,dpll_nodes_median,width_median,mus_varfrac_mean,reason";

namespace {

std::string opt_field(const std::optional<double>& v, int precision) {
    return v ? fmt::format("{:.{}f}", *v, precision) : std::string();
}

std::optional<double> column_value(const SweepPoint& pt, const std::string& col) {
    if (col == "p_sat")
        return pt.p_sat;
    if (col == "f_S_mean")
        return pt.f_S_mean;
    if (col == "f_B_mean")
        return pt.f_B_mean;
    if (col == "f_SC_mean")
        return pt.f_SC_mean;
    if (col == "f_BC_mean")
        return pt.f_BC_mean;
    if (col == "dpll_nodes_median")
        return pt.dpll_nodes_median;
    if (col == "width_median")
        return pt.width_median;
    if (col == "mus_varfrac_mean")
        return pt.mus_varfrac_mean;
    throw ContractError("unknown column '" + col + "'");
}

} // namespace

void write_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    if (points.empty())
        throw ContractError("emit_csv: empty table");
    out << kCsvHeader << '\n';
    for (const auto& pt : points) {
        std::string reason;
        for (std::size_t i = 0; i < pt.reasons.size(); ++i)
            reason += (i ? ";" : "") + pt.reasons[i];
        out << fmt::format("{},{},{:.4f},{},{:.6f},{},{},{},{},{},{},{},{}\n", pt.problem, pt.n, pt.c, pt.samples, pt.p_sat,
                           opt_field(pt.f_S_mean, 6), opt_field(pt.f_B_mean, 6), opt_field(pt.f_SC_mean, 6),
                           opt_field(pt.f_BC_mean, 6), opt_field(pt.dpll_nodes_median, 1), opt_field(pt.width_median, 1),
                           opt_field(pt.mus_varfrac_mean, 6), reason);
    }
}

void emit_csv(const std::vector<SweepPoint>& points, const std::string& path) {
    std::ostringstream ss;
    write_csv(ss, points);
    write_file(path, ss.str());
}

std::vector<SweepPoint> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader)
        throw Error("CSV header does not match the sweep format");
    std::vector<SweepPoint> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        std::vector<std::string> f;
        std::string item;
        std::istringstream ls(line);
        while (std::getline(ls, item, ','))
            f.push_back(item);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 13)
            throw Error(fmt::format("CSV line {}: expected 13 fields, found {}", line_no, f.size()));
        auto opt = [&](const std::string& s) -> std::optional<double> {
            if (s.empty())
                return std::nullopt;
            return to_double("csv", s);
        };
        SweepPoint pt;
        pt.problem = f[0];
        pt.n = static_cast<int>(to_int("csv", f[1]));
        pt.c = to_double("csv", f[2]);
        pt.samples = static_cast<int>(to_int("csv", f[3]));
        pt.p_sat = to_double("csv", f[4]);
        pt.f_S_mean = opt(f[5]);
        pt.f_B_mean = opt(f[6]);
        pt.f_SC_mean = opt(f[7]);
        pt.f_BC_mean = opt(f[8]);
        pt.dpll_nodes_median = opt(f[9]);
        pt.width_median = opt(f[10]);
        pt.mus_varfrac_mean = opt(f[11]);
        if (!f[12].empty())
            pt.reasons = split(f[12], ';');
        out.push_back(std::move(pt));
    }
    return out;
}

void write_svg(std::ostream& out, const std::vector<SweepPoint>& points, const PlotSpec& spec) {
    if (points.empty())
        throw ContractError("emit_svg: empty table");
    const double width = 720, height = 480, left = 70, right = 130, top = 40, bottom = 60;
    double xmin = points.front().c, xmax = points.front().c, ymax = 0;
    for (const auto& pt : points) {
        xmin = std::min(xmin, pt.c);
        xmax = std::max(xmax, pt.c);
        if (auto v = column_value(pt, spec.column))
            ymax = std::max(ymax, *v);
    }
    for (double v : spec.verticals) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    if (xmax - xmin < 1e-9) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    ymax = ymax <= 1.0 ? 1.0 : ymax * 1.05;
    const double pw = width - left - right, ph = height - top - bottom;
    auto X = [&](double c) { return left + (c - xmin) / (xmax - xmin) * pw; };
    auto Y = [&](double y) { return top + ph - y / ymax * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
                       "font-family=\"sans-serif\" font-size=\"12\">\n",
                       width, height);
    out << fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
    const std::string title = spec.title.empty() ? points.front().problem + ": " + spec.column : spec.title;
    out << fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", left + pw / 2,
                       title);
    out << fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
                       left, top, pw, ph);
    for (int i = 0; i <= 5; ++i) {
        const double cx = xmin + (xmax - xmin) * i / 5.0;
        const double cy = ymax * i / 5.0;
        out << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", X(cx),
                           top + ph, top + ph + 5);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.2f}</text>\n", X(cx), top + ph + 20, cx);
        out << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n", left - 5,
                           Y(cy), left);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n", left - 8, Y(cy) + 4, cy);
    }
    out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">c</text>\n", left + pw / 2, height - 15);
    out << fmt::format("<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
                       top + ph / 2, top + ph / 2, spec.column);
    for (double v : spec.verticals) {
        out << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"gray\" "
                           "stroke-dasharray=\"5,4\"/>\n",
                           X(v), top, top + ph);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" fill=\"gray\" text-anchor=\"middle\">{:.3f}</text>\n", X(v),
                           top - 4, v);
    }
    int series = 0;
    for (const auto& [n, group] : by_n(points)) {
        const char* color = palette[series % 8];
        std::string poly;
        std::string dots;
        for (const auto* pt : group) {
            auto v = column_value(*pt, spec.column);
            if (!v)
                continue;
            poly += fmt::format("{:.1f},{:.1f} ", X(pt->c), Y(*v));
            dots += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", X(pt->c), Y(*v), color);
        }
        if (!poly.empty()) {
            poly.pop_back();
            out << fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, poly);
        }
        out << dots;
        const double ly = top + 16 + 18 * series;
        out << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                           "stroke-width=\"2\"/>\n",
                           left + pw + 12, ly, left + pw + 32, color);
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">n = {}</text>\n", left + pw + 38, ly + 4, n);
        ++series;
    }
    out << "</svg>\n";
}

void emit_svg(const std::vector<SweepPoint>& points, const PlotSpec& spec, const std::string& path) {
    std::ostringstream ss;
    write_svg(ss, points, spec);
    write_file(path, ss.str());
}

void write_thresholds(std::ostream& out, const std::vector<ThresholdEstimate>& t, double eps) {
    out << fmt::format("threshold eps={:.3f}\n", eps);
    for (const auto& e : t)
        out << fmt::format("n={} c_eps={:.4f} c_half={:.4f} c_1-eps={:.4f} sharpness={:.4f}\n", e.n, e.c_eps, e.c_half,
                           e.c_one_minus_eps, e.sharpness);
}

void write_probe(std::ostream& out, const ProbeReport& r) {
    out << "spine probe (finite-size evidence, not a verdict)\n";
    for (const auto& row : r.rows)
        out << fmt::format("n={} c={:.4f} eta={:.3f} fraction={:.4f} samples={}\n", row.n, row.c, row.eta, row.fraction,
                           row.samples);
    for (const auto& t : r.trends)
        out << fmt::format("trend c={:.4f} eta={:.3f} {}\n", t.c, t.eta, t.trend);
}

} // namespace spinelab
