#include "spinelab/generators.hpp"

#include "spinelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spinelab {

namespace {

void check_counting_spec(const GenSpec& spec) {
    if (!spec.templates)
        throw ContractError("generator spec needs a template set");
    if (spec.m < 0)
        throw ContractError("constraint count must be nonnegative");
    if (spec.n < spec.templates->arity())
        throw ContractError("invalid spec: n < k");
}

// Uniform ordered k-tuple of distinct variables == uniform k-set then uniform ordering.
void draw_tuple(Rng& rng, int n, std::vector<int>& out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        int v;
        do {
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        } while (std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i), v) !=
                 out.begin() + static_cast<std::ptrdiff_t>(i));
        out[i] = v;
    }
}

Formula generate(const GenSpec& spec, bool with_signs) {
    check_counting_spec(spec);
    const auto& ts = *spec.templates;
    const auto k = static_cast<std::size_t>(ts.arity());
    Rng rng(spec.seed, spec.stream);
    std::vector<Constraint> cs;
    cs.reserve(static_cast<std::size_t>(spec.m));
    std::vector<int> tuple(k);
    for (std::int64_t j = 0; j < spec.m; ++j) {
        draw_tuple(rng, spec.n, tuple);
        const auto& tpl = ts.at(static_cast<std::size_t>(rng.below(ts.size())));
        Constraint c{tpl.id(), tuple, {}};
        if (with_signs) {
            c.negated.resize(k);
            for (auto& s : c.negated)
                s = rng.coin() ? 1 : 0;
        }
        cs.push_back(std::move(c));
    }
    return Formula(spec.n, spec.templates, std::move(cs));
}

} // namespace

Formula gen_csp(const GenSpec& spec) {
    if (spec.model != Model::csp_counting)
        throw ContractError("gen_csp expects the counting model");
    return generate(spec, false);
}

Formula gen_sat_neg(const GenSpec& spec) {
    if (spec.model != Model::sat_neg)
        throw ContractError("gen_sat_neg expects the sat-neg model");
    if (!spec.templates || spec.templates->domain() != 2)
        throw ContractError("model mismatch: SAT(neg) requires t = 2");
    if (!is_good(*spec.templates))
        warn("template set is not good; SAT(neg) generation proceeds anyway");
    return generate(spec, true);
}

TemplateSetPtr closure(const TemplateSet& ts) {
    if (ts.domain() != 2)
        throw UnsupportedError("closure is only defined for t = 2");
    const int k = ts.arity();
    std::vector<ConstraintTemplate> out;
    std::set<std::vector<std::uint8_t>> seen;
    std::vector<std::uint8_t> flips(static_cast<std::size_t>(k));
    for (const auto& tpl : ts.templates()) {
        for (unsigned p = 0; p < (1U << k); ++p) {
            for (int i = 0; i < k; ++i)
                flips[static_cast<std::size_t>(i)] = (p >> (k - 1 - i)) & 1U;
            auto variant = tpl.negated(static_cast<int>(out.size()), flips);
            if (seen.insert(variant.table()).second)
                out.push_back(std::move(variant));
        }
    }
    return std::make_shared<const TemplateSet>(2, k, std::move(out));
}

bool is_good(const TemplateSet& ts) {
    if (ts.domain() != 2)
        throw UnsupportedError("goodness is only defined for t = 2");
    const std::size_t expected = ts.size() << ts.arity();
    return closure(ts)->size() == expected;
}

TemplateSetPtr named_family(std::string_view name, int k) {
    if (k < 2)
        throw ContractError("named families need k >= 2");
    auto make = [k](auto pred) {
        std::vector<ConstraintTemplate> one{ConstraintTemplate::from_predicate(0, 2, k, pred)};
        return std::make_shared<const TemplateSet>(2, k, std::move(one));
    };
    auto ones = [](std::span<const int> t) { return static_cast<int>(std::count(t.begin(), t.end(), 1)); };
    if (name == "k-sat")
        return make([&](std::span<const int> t) { return ones(t) >= 1; });
    if (name == "2-sat") {
        if (k != 2)
            throw ContractError("2-sat requires k = 2");
        return make([&](std::span<const int> t) { return ones(t) >= 1; });
    }
    if (name == "1-in-k-sat")
        return make([&](std::span<const int> t) { return ones(t) == 1; });
    if (name == "k-xor-sat")
        return make([&](std::span<const int> t) { return ones(t) % 2 == 0; });
    throw ContractError("unknown template family '" + std::string(name) + "'");
}

Graph gen_graph(int n, std::int64_t m, std::uint64_t seed, std::uint64_t stream) {
    const std::int64_t pairs = binomial(n, 2);
    if (m < 0 || m > pairs)
        throw ContractError("edge count " + std::to_string(m) + " exceeds C(n,2) = " + std::to_string(pairs));
    Rng rng(seed, stream);
    // Dense requests sample the complement so rejection stays cheap.
    const bool complement = 2 * m > pairs;
    const std::int64_t draws = complement ? pairs - m : m;
    std::set<std::pair<int, int>> picked;
    while (static_cast<std::int64_t>(picked.size()) < draws) {
        int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        if (u == v)
            continue;
        picked.emplace(std::min(u, v), std::max(u, v));
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    if (!complement) {
        edges.assign(picked.begin(), picked.end());
    } else {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (!picked.count({u, v}))
                    edges.emplace_back(u, v);
    }
    return Graph(n, std::move(edges));
}

std::int64_t edges_for_mean_degree(double c, int n) { return std::llround(c * n / 2.0); }

} // namespace spinelab
