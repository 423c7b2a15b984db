#pragma once

#include "spinelab/core.hpp"
#include "spinelab/dpll.hpp"
#include "spinelab/heuristics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spinelab {

/// Problem family by name: "k-sat", "k-xor-sat", "1-in-k-sat" (k a digit,
/// e.g. "3-sat"), "3col" or "gbp".
struct ProblemSpec {
    std::string name;
    bool graph = false;
    GraphProblem graph_problem = GraphProblem::col3;
    int k = 0;
    TemplateSetPtr templates;
    /// Signs drawn per occurrence (gen_sat_neg) rather than closure templates.
    bool signed_model = false;
};

ProblemSpec parse_problem(const std::string& name);

/// One random instance of a boolean family: m = round(c n) constraints.
Formula sample_formula(const ProblemSpec& p, int n, double c, std::uint64_t seed, std::uint64_t stream);
/// One random graph: round(c n / 2) edges.
Graph sample_graph(int n, double c, std::uint64_t seed, std::uint64_t stream);
/// Universe matching the generation model of a family.
ConstraintUniverse universe_for(const ProblemSpec& p, int n);

/// Stream index of sample s in cell (n, c); independent of the grid layout.
std::uint64_t sample_stream(int n, double c, int sample);

struct SweepConfig {
    std::string problem = "3-sat";
    std::vector<int> n{20};
    std::vector<double> c{4.27};
    int samples = 10;
    std::uint64_t seed = 1;

    bool spine = false;
    bool spine_constraints = false;
    bool backbone = false;
    bool dpll = false;
    bool width = false;
    bool mus = false;
    bool eo = false;

    int budget_n = 20;
    int spine_budget_n = -1;
    int backbone_budget_n = -1;
    /// Early exit for the spine once f_S reaches this fraction (0: exact f_S).
    double spine_stop = 0.0;
    std::uint64_t spine_max_calls = 0;
    std::uint64_t dpll_node_limit = 0;
    Branching branching = Branching::moms;
    EoConfig eo_config;

    std::vector<double> eta{0.1};
    std::string csv;
    std::string svg;
    std::string plot_column = "p_sat";
    std::vector<double> verticals;

    int spine_budget() const { return spine_budget_n >= 0 ? spine_budget_n : budget_n; }
    int backbone_budget() const { return backbone_budget_n >= 0 ? backbone_budget_n : budget_n; }
};

/// key = value lines; '#' starts a comment. Lists are comma separated; a
/// density list may also be "start:stop:step".
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);
void validate(const SweepConfig& cfg);

struct SweepPoint {
    std::string problem;
    int n = 0;
    double c = 0;
    int samples = 0;
    double p_sat = 0;
    std::optional<double> f_S_mean;
    std::optional<double> f_B_mean;
    std::optional<double> f_SC_mean;
    std::optional<double> f_BC_mean;
    std::optional<double> dpll_nodes_median;
    std::optional<double> width_median;
    std::optional<double> mus_varfrac_mean;
    /// "column:code" entries explaining absent or estimated values.
    std::vector<std::string> reasons;

    /// Per-sample f_S (lower bound where f_S_exact is 0); empty if not measured.
    std::vector<double> f_S_values;
    std::vector<std::uint8_t> f_S_exact;
};

std::vector<SweepPoint> sweep(const SweepConfig& cfg);

struct ThresholdEstimate {
    int n = 0;
    double c_eps = 0;
    double c_half = 0;
    double c_one_minus_eps = 0;
    /// (c_{1-eps} - c_eps) / c_{1/2}
    double sharpness = 0;
};

/// Interpolated densities where the unsatisfiable fraction first reaches eps, 1/2 and 1 - eps.
std::vector<ThresholdEstimate> threshold_estimate(const std::vector<SweepPoint>& points, double eps);

struct ProbeRow {
    int n = 0;
    double c = 0;
    double eta = 0;
    double fraction = 0;
    int samples = 0;
};

struct ProbeTrend {
    double c = 0;
    double eta = 0;
    /// "increasing", "decreasing" or "non-monotone" across n.
    std::string trend;
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
    std::vector<ProbeTrend> trends;
};

/// Fraction of samples with f_S >= eta per cell; finite-size evidence only.
ProbeReport discontinuity_probe(const std::vector<SweepPoint>& points, const std::vector<double>& etas);

extern const char* const kCsvHeader;

void write_csv(std::ostream& out, const std::vector<SweepPoint>& points);
void emit_csv(const std::vector<SweepPoint>& points, const std::string& path);
std::vector<SweepPoint> read_csv(std::istream& in);

struct PlotSpec {
    std::string column = "p_sat";
    std::vector<double> verticals;
    std::string title;
};

void write_svg(std::ostream& out, const std::vector<SweepPoint>& points, const PlotSpec& spec);
void emit_svg(const std::vector<SweepPoint>& points, const PlotSpec& spec, const std::string& path);

void write_thresholds(std::ostream& out, const std::vector<ThresholdEstimate>& t, double eps);
void write_probe(std::ostream& out, const ProbeReport& r);

} // namespace spinelab
