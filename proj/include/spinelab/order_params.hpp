#pragma once

#include "spinelab/cnf.hpp"
#include "spinelab/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace spinelab {

struct BackboneOptions {
    /// Cap on exact opt calls over the universe; 0 means unlimited.
    std::uint64_t max_opt_calls = 0;
};

struct BackboneReport {
    std::size_t opt = 0;
    /// B(Φ): union of the variables of the constraint backbone.
    std::vector<int> variables;
    /// B_C(Φ): indices into the universe, ascending.
    std::vector<std::size_t> constraints;
    Rational f_B{0};
    Rational f_BC{0};
    std::uint64_t opt_calls = 0;
};

/// B_C = {C in universe : opt(Φ ∪ C) > opt(Φ)}.
BackboneReport backbone(const Formula& f, const ConstraintUniverse& u, const BackboneOptions& options = {});

struct SpineOptions {
    /// Compute S_C in full. When false only the variable spine is guaranteed.
    bool constraint_spine = true;
    /// Stop once the variable spine reaches this many variables (0: never).
    std::size_t stop_at_vars = 0;
    /// Cap on SAT calls; 0 means unlimited.
    std::uint64_t max_sat_calls = 0;
    /// Exact shortcut for universes made of all signed k-clauses.
    bool fast_path = true;
};

struct SpineReport {
    bool formula_sat = false;
    /// S(Φ): union of Var(C) over C in S_C.
    std::vector<int> variables;
    /// S_C(Φ) as universe indices; meaningful only when constraints_computed.
    std::vector<std::size_t> constraints;
    bool constraints_computed = false;
    /// False when the run stopped early at stop_at_vars.
    bool complete = true;
    Rational f_S{0};
    Rational f_SC{0};
    /// "general" or "clause-fast-path".
    std::string method;
    std::uint64_t sat_calls = 0;
};

SpineReport spine(const Formula& f, const ConstraintUniverse& u, const SpineOptions& options = {});

/// Literals W with some satisfiable Ξ ⊆ Φ such that Ξ ∧ W is unsatisfiable (t = 2).
std::vector<Lit> literal_spine(const Formula& f, const SpineOptions& options = {});

using VertexPair = std::pair<int, int>;

/// Pairs (x, y) such that some 3-colorable H ⊆ G has H + (x, y) not 3-colorable.
std::vector<VertexPair> col3_spine(const Graph& g, const SpineOptions& options = {});

/// Zero-cut balanced bipartition exists (component sizes can be packed into n/2).
bool gbp_bisectable(const Graph& g);

/// Pairs inside a connected component larger than n/2.
std::vector<VertexPair> gbp_spine_fast_path(const Graph& g);

/// Exact constraint spine of GBP by enumeration of balanced bipartitions.
std::vector<VertexPair> gbp_spine(const Graph& g, int budget_n = 20);

struct GbpBackbone {
    std::size_t opt = 0;
    std::vector<VertexPair> pairs;
    Rational fraction{0};
    std::uint64_t optimal_partitions = 0;
};

/// Pairs separated by every minimum balanced cut; fraction over C(n, 2).
GbpBackbone gbp_backbone_exact(const Graph& g, int budget_n = 20);

/// One member per line, then the fraction lines. Vertices and variables are 1-indexed.
void write_report(std::ostream& out, const ConstraintUniverse& u, const BackboneReport& r);
void write_report(std::ostream& out, const ConstraintUniverse& u, const SpineReport& r);
void write_pairs(std::ostream& out, const std::vector<VertexPair>& pairs, int n, const std::string& label);

/// "p/q decimal" with the decimal at 6 places.
std::string format_fraction(Rational r);

} // namespace spinelab
