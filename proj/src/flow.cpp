#include "flow.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include <deque>
#include <numeric>

namespace spinelab::detail {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, std::int64_t,
                    boost::property<boost::edge_residual_capacity_t, std::int64_t,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

} // namespace

ClosureSolution max_closure(const ClosureProblem& p) {
    const auto items = p.item_profit.size();
    const auto resources = p.resource_cost.size();
    const std::size_t source = items + resources;
    const std::size_t sink = source + 1;

    std::int64_t infinity = 1;
    for (auto v : p.item_profit)
        infinity += v;
    for (auto v : p.resource_cost)
        infinity += v;

    std::vector<std::uint8_t> is_forced(items, 0);
    for (int i : p.forced)
        is_forced[static_cast<std::size_t>(i)] = 1;

    FlowGraph g(sink + 1);
    auto capacity = boost::get(boost::edge_capacity, g);
    auto reverse = boost::get(boost::edge_reverse, g);
    auto residual = boost::get(boost::edge_residual_capacity, g);

    auto add_edge = [&](std::size_t u, std::size_t v, std::int64_t cap) {
        auto e = boost::add_edge(u, v, g).first;
        auto r = boost::add_edge(v, u, g).first;
        capacity[e] = cap;
        capacity[r] = 0;
        reverse[e] = r;
        reverse[r] = e;
    };

    for (std::size_t i = 0; i < items; ++i) {
        add_edge(source, i, is_forced[i] ? infinity : p.item_profit[i]);
        for (int need : p.item_needs[i])
            add_edge(i, items + static_cast<std::size_t>(need), infinity);
    }
    for (std::size_t r = 0; r < resources; ++r)
        add_edge(items + r, sink, p.resource_cost[r]);

    boost::push_relabel_max_flow(g, source, sink);

    // Source side of the min cut: vertices reachable through positive residual capacity.
    std::vector<std::uint8_t> reached(sink + 1, 0);
    std::deque<std::size_t> queue{source};
    reached[source] = 1;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        for (auto [it, end] = boost::out_edges(u, g); it != end; ++it) {
            auto v = boost::target(*it, g);
            if (!reached[v] && residual[*it] > 0) {
                reached[v] = 1;
                queue.push_back(v);
            }
        }
    }

    ClosureSolution out;
    for (std::size_t i = 0; i < items; ++i)
        if (reached[i]) {
            out.items.push_back(static_cast<int>(i));
            out.value += p.item_profit[i];
        }
    for (std::size_t r = 0; r < resources; ++r)
        if (reached[items + r]) {
            out.resources.push_back(static_cast<int>(r));
            out.value -= p.resource_cost[r];
        }
    return out;
}

} // namespace spinelab::detail
