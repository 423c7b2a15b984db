#pragma once

#include "spinelab/core.hpp"
#include "spinelab/order_params.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace spinelab {

enum class GraphProblem { col3, gbp };

std::string_view to_string(GraphProblem p);
GraphProblem parse_graph_problem(std::string_view name);

struct EoConfig {
    double tau = 1.4;
    int restarts = 20;
    /// Steps per restart; 0 means 200 n.
    std::int64_t steps = 0;
    std::uint64_t seed = 0;
    GraphProblem problem = GraphProblem::col3;
    /// Distinct optima kept; further ones only set `truncated`.
    std::size_t pool_cap = 4096;
};

struct GroundStatePool {
    GraphProblem problem = GraphProblem::col3;
    int n = 0;
    std::size_t best_cost = 0;
    /// Canonical configurations (colors relabeled by first use / vertex 0 on side 0), sorted.
    std::vector<std::vector<std::uint8_t>> configs;
    bool truncated = false;
};

/// Extremal optimization: each step updates a vertex picked by fitness rank
/// r with probability proportional to r^-tau.
GroundStatePool eo_sample(const Graph& g, const EoConfig& cfg);

std::size_t cost_of(const Graph& g, GraphProblem p, const std::vector<std::uint8_t>& config);

struct BackboneEstimate {
    std::vector<VertexPair> pairs;
    Rational fraction{0};
    std::size_t pool_size = 0;
    bool truncated = false;
};

/// Pairs frozen across the pool: monochromatic in every coloring (3-COL) or
/// separated in every bipartition (GBP). An upper bound when optima are missing.
BackboneEstimate backbone_estimate(const GroundStatePool& pool);

struct Col3Backbone {
    std::size_t opt = 0;
    std::vector<VertexPair> pairs;
    Rational fraction{0};
    /// Optimal colorings up to color permutation.
    std::uint64_t optimal_colorings = 0;
};

/// Exhaustive enumeration of colorings up to color permutation.
Col3Backbone col3_backbone_exact(const Graph& g, int budget_n = 15);

/// Cost header followed by one configuration string per line.
void write_pool(std::ostream& out, const GroundStatePool& pool);

} // namespace spinelab
