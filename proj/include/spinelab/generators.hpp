#pragma once

#include "spinelab/core.hpp"

#include <cstdint>
#include <string_view>

namespace spinelab {

enum class Model { csp_counting, sat_neg, graph };

struct GenSpec {
    Model model = Model::csp_counting;
    int n = 0;
    std::int64_t m = 0;
    TemplateSetPtr templates;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Counting model: m constraints drawn with replacement. Each draw picks a
/// uniform k-set of variables, a uniform ordering of it, and a uniform template.
Formula gen_csp(const GenSpec& spec);

/// gen_csp plus an independent fair-coin negation on every variable occurrence (t = 2).
Formula gen_sat_neg(const GenSpec& spec);

/// All sign-pattern variants of the templates, deduplicated by relation (t = 2).
TemplateSetPtr closure(const TemplateSet& ts);

/// True iff all |ts| * 2^k signed variants are pairwise distinct relations.
bool is_good(const TemplateSet& ts);

/// "k-sat", "1-in-k-sat", "k-xor-sat" or "2-sat".
TemplateSetPtr named_family(std::string_view name, int k);

/// Uniform simple graph with exactly m edges.
Graph gen_graph(int n, std::int64_t m, std::uint64_t seed, std::uint64_t stream = 0);

/// Edge count for mean degree c: round(c * n / 2).
std::int64_t edges_for_mean_degree(double c, int n);

} // namespace spinelab
