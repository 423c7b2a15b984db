#include "spinelab/heuristics.hpp"

#include "spinelab/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace spinelab {

std::string_view to_string(GraphProblem p) { return p == GraphProblem::col3 ? "3col" : "gbp"; }

GraphProblem parse_graph_problem(std::string_view name) {
    if (name == "3col" || name == "3-col")
        return GraphProblem::col3;
    if (name == "gbp")
        return GraphProblem::gbp;
    throw ContractError("unknown graph problem '" + std::string(name) + "'");
}

std::size_t cost_of(const Graph& g, GraphProblem p, const std::vector<std::uint8_t>& config) {
    std::size_t cost = 0;
    for (auto [u, v] : g.edges()) {
        const bool same = config[static_cast<std::size_t>(u)] == config[static_cast<std::size_t>(v)];
        cost += (p == GraphProblem::col3) == same ? 1 : 0;
    }
    return cost;
}

namespace {

std::vector<std::uint8_t> canonical(GraphProblem p, const std::vector<std::uint8_t>& config) {
    std::vector<std::uint8_t> out(config.size());
    if (p == GraphProblem::gbp) {
        const std::uint8_t flip = config.empty() ? 0 : config[0];
        for (std::size_t i = 0; i < config.size(); ++i)
            out[i] = config[i] ^ flip;
        return out;
    }
    std::uint8_t relabel[3] = {255, 255, 255};
    std::uint8_t next = 0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        auto& r = relabel[config[i]];
        if (r == 255)
            r = next++;
        out[i] = r;
    }
    return out;
}

// Cumulative r^-tau weights for ranks 1..size.
std::vector<double> rank_table(std::size_t size, double tau) {
    std::vector<double> cum(size);
    double total = 0;
    for (std::size_t r = 0; r < size; ++r) {
        total += std::pow(static_cast<double>(r + 1), -tau);
        cum[r] = total;
    }
    return cum;
}

std::size_t draw_rank(const std::vector<double>& cum, Rng& rng) {
    const double x = rng.uniform01() * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

class EoRun {
  public:
    EoRun(const Graph& g, const EoConfig& cfg) : cfg_(cfg), adj_(g.adjacency()), n_(g.num_vertices()) {
        std::size_t max_degree = 0;
        for (const auto& a : adj_)
            max_degree = std::max(max_degree, a.size());
        levels_ = max_degree + 1;
    }

    GroundStatePool run() {
        GroundStatePool pool;
        pool.problem = cfg_.problem;
        pool.n = n_;
        pool.best_cost = static_cast<std::size_t>(-1);
        const std::int64_t steps = cfg_.steps > 0 ? cfg_.steps : 200 * static_cast<std::int64_t>(n_);
        const bool gbp = cfg_.problem == GraphProblem::gbp;
        auto all_ranks = rank_table(static_cast<std::size_t>(std::max(n_, 1)), cfg_.tau);
        auto half_ranks = rank_table(static_cast<std::size_t>(std::max(n_ / 2, 1)), cfg_.tau);

        for (int restart = 0; restart < cfg_.restarts; ++restart) {
            Rng rng(cfg_.seed, static_cast<std::uint64_t>(restart));
            initialize(rng);
            offer(pool);
            for (std::int64_t step = 0; step < steps && n_ > 0; ++step) {
                const int v = pick(draw_rank(all_ranks, rng), -1, rng);
                if (gbp) {
                    const int other = 1 - config_[static_cast<std::size_t>(v)];
                    const int w = pick(draw_rank(half_ranks, rng), other, rng);
                    set_value(v, static_cast<std::uint8_t>(other));
                    set_value(w, static_cast<std::uint8_t>(1 - other));
                } else {
                    const auto shift = static_cast<std::uint8_t>(1 + rng.below(2));
                    set_value(v, static_cast<std::uint8_t>((config_[static_cast<std::size_t>(v)] + shift) % 3));
                }
                offer(pool);
            }
        }
        pool.configs.assign(found_.begin(), found_.end());
        return pool;
    }

  private:
    bool violates(int u, int v) const {
        const bool same = config_[static_cast<std::size_t>(u)] == config_[static_cast<std::size_t>(v)];
        return cfg_.problem == GraphProblem::col3 ? same : !same;
    }

    std::size_t fitness_of(int v) const {
        std::size_t bad = 0;
        for (int w : adj_[static_cast<std::size_t>(v)])
            bad += violates(v, w) ? 1 : 0;
        return bad;
    }

    std::size_t side_of(int v) const {
        return cfg_.problem == GraphProblem::gbp ? config_[static_cast<std::size_t>(v)] : 0;
    }

    void initialize(Rng& rng) {
        config_.assign(static_cast<std::size_t>(n_), 0);
        if (cfg_.problem == GraphProblem::gbp) {
            std::vector<int> order(static_cast<std::size_t>(n_));
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(std::span<int>(order));
            for (int i = n_ / 2; i < n_; ++i)
                config_[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
        } else {
            for (auto& c : config_)
                c = static_cast<std::uint8_t>(rng.below(3));
        }
        fitness_.assign(static_cast<std::size_t>(n_), 0);
        counts_.assign(2 * levels_, 0);
        cost_ = 0;
        for (int v = 0; v < n_; ++v) {
            fitness_[static_cast<std::size_t>(v)] = fitness_of(v);
            ++counts_[side_of(v) * levels_ + fitness_[static_cast<std::size_t>(v)]];
            cost_ += fitness_[static_cast<std::size_t>(v)];
        }
        cost_ /= 2;
    }

    void refresh(int v) {
        auto& f = fitness_[static_cast<std::size_t>(v)];
        --counts_[side_of(v) * levels_ + f];
        f = fitness_of(v);
        ++counts_[side_of(v) * levels_ + f];
    }

    void set_value(int v, std::uint8_t value) {
        auto& slot = config_[static_cast<std::size_t>(v)];
        if (slot == value)
            return;
        std::size_t before = 0;
        for (int w : adj_[static_cast<std::size_t>(v)])
            before += violates(v, w) ? 1 : 0;
        --counts_[side_of(v) * levels_ + fitness_[static_cast<std::size_t>(v)]];
        slot = value;
        ++counts_[side_of(v) * levels_ + fitness_[static_cast<std::size_t>(v)]];
        std::size_t after = 0;
        for (int w : adj_[static_cast<std::size_t>(v)])
            after += violates(v, w) ? 1 : 0;
        cost_ = cost_ + after - before;
        refresh(v);
        for (int w : adj_[static_cast<std::size_t>(v)])
            refresh(w);
    }

    // Vertex at 0-based rank `rank` in fitness-descending order, restricted to
    // one side when side >= 0. Vertices sharing a fitness level are equivalent
    // in the ranking, so the choice among them is uniform.
    int pick(std::size_t rank, int side, Rng& rng) const {
        const std::size_t lo = side < 0 ? 0 : static_cast<std::size_t>(side);
        const std::size_t hi = side < 0 ? (cfg_.problem == GraphProblem::gbp ? 2 : 1) : lo + 1;
        std::size_t level = levels_;
        std::size_t here = 0;
        std::size_t skip = rank;
        while (level > 0) {
            --level;
            here = 0;
            for (std::size_t s = lo; s < hi; ++s)
                here += counts_[s * levels_ + level];
            if (skip < here)
                break;
            skip -= here;
        }
        skip = rng.below(here);
        for (int v = 0; v < n_; ++v) {
            if (fitness_[static_cast<std::size_t>(v)] != level)
                continue;
            if (side >= 0 && config_[static_cast<std::size_t>(v)] != side)
                continue;
            if (skip == 0)
                return v;
            --skip;
        }
        throw Error("internal: EO rank selection out of range");
    }

    void offer(GroundStatePool& pool) {
        if (cost_ < pool.best_cost) {
            pool.best_cost = cost_;
            pool.truncated = false;
            found_.clear();
        }
        if (cost_ != pool.best_cost)
            return;
        if (found_.size() >= cfg_.pool_cap) {
            if (!found_.count(canonical(cfg_.problem, config_)))
                pool.truncated = true;
            return;
        }
        found_.insert(canonical(cfg_.problem, config_));
    }

    const EoConfig& cfg_;
    std::vector<std::vector<int>> adj_;
    int n_;
    std::size_t levels_ = 1;
    std::vector<std::uint8_t> config_;
    std::vector<std::size_t> fitness_;
    std::vector<std::size_t> counts_;
    std::size_t cost_ = 0;
    std::set<std::vector<std::uint8_t>> found_;
};

} // namespace

GroundStatePool eo_sample(const Graph& g, const EoConfig& cfg) {
    if (!(cfg.tau > 1.0))
        throw ContractError("eo_sample: tau must exceed 1");
    if (cfg.restarts < 1)
        throw ContractError("eo_sample: restarts must be positive");
    if (cfg.steps < 0)
        throw ContractError("eo_sample: steps must be positive");
    if (cfg.problem == GraphProblem::gbp && g.num_vertices() % 2 != 0)
        throw ContractError("eo_sample: graph bisection needs an even number of vertices");
    return EoRun(g, cfg).run();
}

BackboneEstimate backbone_estimate(const GroundStatePool& pool) {
    if (pool.configs.empty())
        throw ContractError("backbone_estimate: empty pool");
    const int n = pool.n;
    BackboneEstimate out;
    out.pool_size = pool.configs.size();
    out.truncated = pool.truncated;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            bool frozen = std::all_of(pool.configs.begin(), pool.configs.end(), [&](const std::vector<std::uint8_t>& c) {
                const bool same = c[static_cast<std::size_t>(u)] == c[static_cast<std::size_t>(v)];
                return pool.problem == GraphProblem::col3 ? same : !same;
            });
            if (frozen)
                out.pairs.emplace_back(u, v);
        }
    if (n >= 2)
        out.fraction = Rational(static_cast<std::int64_t>(out.pairs.size()), binomial(n, 2));
    return out;
}

Col3Backbone col3_backbone_exact(const Graph& g, int budget_n) {
    const int n = g.num_vertices();
    if (n > budget_n)
        throw BudgetExceeded(fmt::format("col3_backbone_exact: n = {} exceeds the enumeration budget {}", n, budget_n));
    Col3Backbone out;
    if (n == 0)
        return out;
    auto adj = g.adjacency();
    std::vector<std::uint8_t> color(static_cast<std::size_t>(n), 0);
    std::vector<std::uint8_t> mono(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    std::size_t best = static_cast<std::size_t>(-1);

    // Restricted growth strings: each coloring up to color permutation once.
    auto rec = [&](auto&& self, int v, int used, std::size_t cost) -> void {
        if (cost > best)
            return;
        if (v == n) {
            const auto idx = [&](int a, int b) { return static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b); };
            if (cost < best) {
                best = cost;
                out.optimal_colorings = 0;
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b)
                        mono[idx(a, b)] = color[static_cast<std::size_t>(a)] == color[static_cast<std::size_t>(b)];
            } else {
                for (int a = 0; a < n; ++a)
                    for (int b = a + 1; b < n; ++b)
                        if (color[static_cast<std::size_t>(a)] != color[static_cast<std::size_t>(b)])
                            mono[idx(a, b)] = 0;
            }
            ++out.optimal_colorings;
            return;
        }
        const int limit = std::min(3, used + 1);
        for (int c = 0; c < limit; ++c) {
            color[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(c);
            std::size_t added = 0;
            for (int w : adj[static_cast<std::size_t>(v)])
                if (w < v && color[static_cast<std::size_t>(w)] == c)
                    ++added;
            self(self, v + 1, std::max(used, c + 1), cost + added);
        }
    };
    rec(rec, 0, 0, 0);
    out.opt = best;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (mono[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)])
                out.pairs.emplace_back(a, b);
    if (n >= 2)
        out.fraction = Rational(static_cast<std::int64_t>(out.pairs.size()), binomial(n, 2));
    return out;
}

void write_pool(std::ostream& out, const GroundStatePool& pool) {
    out << "cost " << pool.best_cost << " problem " << to_string(pool.problem) << " configs " << pool.configs.size()
        << (pool.truncated ? " truncated" : "") << '\n';
    for (const auto& c : pool.configs) {
        std::string line(c.size(), '0');
        for (std::size_t i = 0; i < c.size(); ++i)
            line[i] = static_cast<char>('0' + c[i]);
        out << line << '\n';
    }
}

} // namespace spinelab
