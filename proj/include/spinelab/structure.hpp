#pragma once

#include "spinelab/cnf.hpp"
#include "spinelab/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spinelab {

struct MusResult {
    /// Indices into the input formula, ascending.
    std::vector<std::size_t> indices;
    Formula subformula;
    /// certificates[j] satisfies the MUS without its j-th constraint.
    std::vector<Assignment> certificates;
};

/// Deletion-based minimization scanning constraints in ascending index order.
MusResult mus_extract(const Formula& f);

struct DensityReport {
    Rational c_star{0};
    std::vector<std::size_t> c_star_witness;
    Rational delta_star{0};
    Rational r{0};
    std::vector<std::size_t> delta_star_witness;
};

/// max |H| / |Var(H)| over nonempty subformulas H (exact).
DensityReport c_star(const Formula& f);

/// max r|G| - 2|Var(G)| over nonempty subformulas G (exact).
DensityReport delta_star(const Formula& f, Rational r);

/// k-uniform hypergraph with possibly repeated edges.
struct Hypergraph {
    int n = 0;
    std::vector<std::vector<int>> edges;
};

Hypergraph formula_hypergraph(const Formula& f);

struct SparsityVerdict {
    Rational x{0};
    Rational y{0};
    bool sparse = true;
    /// Present when not sparse: s <= x n vertices spanning more than y s edges.
    std::vector<int> violating_set;
    /// "min-cut" or "exhaustive": the path that settled the verdict.
    std::string method;
};

/// Is every vertex set of size s <= x n spanning at most y s edges?
/// Throws BudgetExceeded when neither the flow search nor bounded enumeration
/// can settle the verdict within `enumeration_budget` candidate sets.
SparsityVerdict is_xy_sparse(const Hypergraph& h, Rational x, Rational y,
                             std::uint64_t enumeration_budget = 5'000'000);

/// Closed form x = ((1/(2e)) (y/(c e))^y)^(1/(y(k-1)-1)); needs y > 1/(k-1), c > 0.
double x_bound(double y, double c, int k);

/// Non-tautological clauses of at most max_len literals over the template's
/// coordinates (variable i is coordinate i) entailed by the relation.
std::vector<Clause> implicate_check(const ConstraintTemplate& tpl, int max_len);

struct PeelingOrder {
    /// Constraint indices C_1..C_m: each C_i has at least k-2 variables unused by C_1..C_{i-1}.
    std::vector<std::size_t> order;
};

struct VariableRoles {
    /// Per constraint: variables occurring in no other constraint.
    std::vector<std::vector<int>> private_vars;
};

VariableRoles variable_roles(const Formula& f);

/// Greedy peel of constraints with >= k-2 private variables; absent if it stalls.
std::optional<PeelingOrder> free_private_ordering(const Formula& f);

/// Free variables of each constraint under an ordering (not used by earlier constraints).
std::vector<std::vector<int>> free_variables(const Formula& f, const PeelingOrder& order);

/// Satisfies constraints in order by setting only their free variables.
/// Needs templates without implicates of length <= 2 and at most two bound
/// variables per constraint; returns nullopt only if the construction fails.
std::optional<Assignment> greedy_witness(const Formula& f, const PeelingOrder& order);

inline constexpr std::size_t kMuInfinity = static_cast<std::size_t>(-1);

/// min |Xi| over subformulas entailing `clause` (kMuInfinity if none). Brute force, m <= 20.
std::size_t mu(const Formula& f, const Clause& clause);

} // namespace spinelab
