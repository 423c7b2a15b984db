#include "spinelab/core.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <numeric>

namespace spinelab {

namespace {
std::atomic<bool> g_warnings{true};
}

void warn(const std::string& message) {
    if (g_warnings.load(std::memory_order_relaxed))
        std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled, std::memory_order_relaxed); }

ConstraintTemplate::ConstraintTemplate(int id, int t, int k, std::vector<std::uint8_t> table)
    : id_(id), t_(t), k_(k), table_(std::move(table)) {
    if (t < 2 || k < 1)
        throw ContractError("template needs t >= 2 and k >= 1");
    std::size_t expected = 1;
    for (int i = 0; i < k; ++i)
        expected *= static_cast<std::size_t>(t);
    if (table_.size() != expected)
        throw ContractError("template table length must be t^k");
    for (auto& bit : table_) {
        bit = bit ? 1 : 0;
        satisfying_ += bit;
    }
}

std::size_t ConstraintTemplate::index_of(std::span<const int> tuple) const {
    std::size_t idx = 0;
    for (int d : tuple)
        idx = idx * static_cast<std::size_t>(t_) + static_cast<std::size_t>(d);
    return idx;
}

void ConstraintTemplate::decode(std::size_t index, int t, std::span<int> out) {
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<int>(index % static_cast<std::size_t>(t));
        index /= static_cast<std::size_t>(t);
    }
}

std::vector<int> ConstraintTemplate::tuple_at(std::size_t index) const {
    std::vector<int> tuple(static_cast<std::size_t>(k_));
    decode(index, t_, tuple);
    return tuple;
}

ConstraintTemplate ConstraintTemplate::negated(int new_id, std::span<const std::uint8_t> flips) const {
    if (t_ != 2)
        throw UnsupportedError("negation is only defined for boolean templates");
    std::vector<int> tuple(static_cast<std::size_t>(k_));
    std::vector<std::uint8_t> table(table_.size());
    for (std::size_t idx = 0; idx < table_.size(); ++idx) {
        decode(idx, 2, tuple);
        for (std::size_t i = 0; i < tuple.size(); ++i)
            if (flips[i])
                tuple[i] ^= 1;
        table[idx] = table_[index_of(tuple)];
    }
    return ConstraintTemplate(new_id, 2, k_, std::move(table));
}

TemplateSet::TemplateSet(int t, int k, std::vector<ConstraintTemplate> templates)
    : t_(t), k_(k), templates_(std::move(templates)) {
    if (t < 2)
        throw ContractError("template set needs domain size t >= 2");
    if (k < 2)
        throw ContractError("template set needs arity k >= 2");
    if (templates_.empty())
        throw ContractError("template set must be nonempty");
    for (std::size_t i = 0; i < templates_.size(); ++i) {
        const auto& tpl = templates_[i];
        if (tpl.domain() != t || tpl.arity() != k)
            throw ContractError("template " + std::to_string(tpl.id()) + " does not match (t, k) of its set");
        if (!by_id_.emplace(tpl.id(), i).second)
            throw ContractError("duplicate template id " + std::to_string(tpl.id()));
    }
    for (int id : degenerate_ids())
        warn("template " + std::to_string(id) + " has an empty or full relation");
}

std::size_t TemplateSet::position_of(int id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw ContractError("unknown template id " + std::to_string(id));
    return it->second;
}

std::vector<int> TemplateSet::degenerate_ids() const {
    std::vector<int> ids;
    for (const auto& tpl : templates_)
        if (tpl.is_empty() || tpl.is_full())
            ids.push_back(tpl.id());
    return ids;
}

std::size_t tuple_index(const ConstraintTemplate& tpl, const Constraint& c, const Assignment& a) {
    const auto t = static_cast<std::size_t>(tpl.domain());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < c.vars.size(); ++i) {
        int value = a[c.vars[i]];
        if (value == kUnassigned)
            throw ContractError("constraint variable " + std::to_string(c.vars[i]) + " is unassigned");
        if (c.neg(i))
            value ^= 1;
        idx = idx * t + static_cast<std::size_t>(value);
    }
    return idx;
}

bool constraint_satisfied(const TemplateSet& ts, const Constraint& c, const Assignment& a) {
    const auto& tpl = ts.by_id(c.template_id);
    return tpl.accepts(tuple_index(tpl, c, a));
}

Formula::Formula(int n, TemplateSetPtr templates, std::vector<Constraint> constraints)
    : n_(n), templates_(std::move(templates)), constraints_(std::move(constraints)) {
    if (!templates_)
        throw ContractError("formula needs a template set");
    if (n < 0)
        throw ContractError("negative variable count");
    const int k = templates_->arity();
    relations_.reserve(constraints_.size());
    for (const auto& c : constraints_) {
        if (static_cast<int>(c.vars.size()) != k)
            throw ContractError("constraint arity differs from template arity");
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            if (c.vars[i] < 0 || c.vars[i] >= n)
                throw ContractError("constraint variable out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (c.vars[i] == c.vars[j])
                    throw ContractError("constraint variables must be pairwise distinct");
        }
        if (c.is_signed()) {
            if (templates_->domain() != 2)
                throw ContractError("signed constraints require t = 2");
            if (c.negated.size() != c.vars.size())
                throw ContractError("sign vector length differs from arity");
        }
        relations_.push_back(&templates_->by_id(c.template_id));
    }
}

bool Formula::satisfied(std::size_t i, const Assignment& a) const {
    return relations_[i]->accepts(tuple_index(*relations_[i], constraints_[i], a));
}

bool Formula::satisfied_by(const Assignment& a) const {
    for (std::size_t i = 0; i < constraints_.size(); ++i)
        if (!satisfied(i, a))
            return false;
    return true;
}

std::size_t Formula::violations(const Assignment& a) const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < constraints_.size(); ++i)
        count += satisfied(i, a) ? 0 : 1;
    return count;
}

std::vector<int> Formula::variables() const {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
    for (const auto& c : constraints_)
        for (int v : c.vars)
            seen[static_cast<std::size_t>(v)] = 1;
    std::vector<int> vars;
    for (int v = 0; v < n_; ++v)
        if (seen[static_cast<std::size_t>(v)])
            vars.push_back(v);
    return vars;
}

Formula Formula::subformula(std::span<const std::size_t> indices) const {
    std::vector<Constraint> picked;
    picked.reserve(indices.size());
    for (auto i : indices)
        picked.push_back(constraints_.at(i));
    return Formula(n_, templates_, std::move(picked));
}

Formula Formula::with(const Constraint& c) const {
    auto all = constraints_;
    all.push_back(c);
    return Formula(n_, templates_, std::move(all));
}

SemanticKey semantic_key(const TemplateSet& ts, const Constraint& c) {
    const auto& tpl = ts.by_id(c.template_id);
    const std::size_t k = c.vars.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.vars[a] < c.vars[b]; });

    SemanticKey key;
    key.vars.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        key.vars[i] = c.vars[order[i]];

    std::vector<int> sorted_tuple(k);
    std::vector<int> tuple(k);
    key.table.resize(tpl.tuple_count());
    for (std::size_t idx = 0; idx < tpl.tuple_count(); ++idx) {
        ConstraintTemplate::decode(idx, tpl.domain(), sorted_tuple);
        for (std::size_t i = 0; i < k; ++i) {
            int value = sorted_tuple[i];
            if (c.neg(order[i]))
                value ^= 1;
            tuple[order[i]] = value;
        }
        key.table[idx] = tpl.accepts(tuple) ? 1 : 0;
    }
    return key;
}

ConstraintUniverse::ConstraintUniverse(int n, TemplateSetPtr templates, bool all_sign_patterns)
    : n_(n), templates_(std::move(templates)), signed_(all_sign_patterns) {
    const int k = templates_->arity();
    if (n < k)
        throw ContractError("invalid universe: n = " + std::to_string(n) + " < k = " + std::to_string(k));
    if (signed_ && templates_->domain() != 2)
        throw UnsupportedError("sign patterns require t = 2");

    const std::size_t patterns = signed_ ? (std::size_t{1} << k) : 1;
    std::vector<int> tuple(static_cast<std::size_t>(k));
    std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);

    auto emit = [&](const ConstraintTemplate& tpl) {
        for (std::size_t p = 0; p < patterns; ++p) {
            Constraint c{tpl.id(), tuple, {}};
            if (signed_) {
                c.negated.resize(static_cast<std::size_t>(k));
                for (int i = 0; i < k; ++i)
                    c.negated[static_cast<std::size_t>(i)] = (p >> (k - 1 - i)) & 1U;
            }
            auto key = semantic_key(*templates_, c);
            if (index_.emplace(std::move(key), members_.size()).second)
                members_.push_back(std::move(c));
        }
    };

    for (const auto& tpl : templates_->templates()) {
        // Lexicographic ordered tuples of distinct variables.
        auto recurse = [&](auto&& self, int depth) -> void {
            if (depth == k) {
                emit(tpl);
                return;
            }
            for (int v = 0; v < n; ++v) {
                if (used[static_cast<std::size_t>(v)])
                    continue;
                used[static_cast<std::size_t>(v)] = 1;
                tuple[static_cast<std::size_t>(depth)] = v;
                self(self, depth + 1);
                used[static_cast<std::size_t>(v)] = 0;
            }
        };
        recurse(recurse, 0);
    }
}

ConstraintUniverse ConstraintUniverse::for_formula(const Formula& f) {
    bool any_signed = std::any_of(f.constraints().begin(), f.constraints().end(),
                                  [](const Constraint& c) { return c.is_signed(); });
    return ConstraintUniverse(f.num_vars(), f.template_ptr(), any_signed && f.domain() == 2);
}

std::optional<std::size_t> ConstraintUniverse::find(const Constraint& c) const {
    return find(semantic_key(*templates_, c));
}

std::optional<std::size_t> ConstraintUniverse::find(const SemanticKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0)
        throw ContractError("negative vertex count");
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ContractError("edge endpoint out of range");
        if (u == v)
            throw ContractError("self-loops are not allowed");
        edges_.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw ContractError("duplicate edge");
}

bool Graph::has_edge(int u, int v) const {
    std::pair<int, int> e{std::min(u, v), std::max(u, v)};
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (auto [u, v] : edges_) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

std::vector<int> Graph::component_labels() const {
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    };
    for (auto [u, v] : edges_) {
        int a = find(u), b = find(v);
        if (a != b)
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<int> label(static_cast<std::size_t>(n_), -1);
    std::vector<int> root_label(static_cast<std::size_t>(n_), -1);
    int next = 0;
    for (int v = 0; v < n_; ++v) {
        int r = find(v);
        auto& rl = root_label[static_cast<std::size_t>(r)];
        if (rl < 0)
            rl = next++;
        label[static_cast<std::size_t>(v)] = rl;
    }
    return label;
}

Formula coloring_formula(const Graph& g, int colors) {
    auto neq = ConstraintTemplate::from_predicate(0, colors, 2, [](std::span<const int> t) { return t[0] != t[1]; });
    auto ts = std::make_shared<const TemplateSet>(colors, 2, std::vector<ConstraintTemplate>{neq});
    std::vector<Constraint> cs;
    cs.reserve(g.num_edges());
    for (auto [u, v] : g.edges())
        cs.push_back(Constraint{0, {u, v}, {}});
    return Formula(g.num_vertices(), ts, std::move(cs));
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace spinelab
