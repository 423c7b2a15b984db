#include "oracles.hpp"

#include "spinelab/generators.hpp"
#include "spinelab/heuristics.hpp"
#include "spinelab/order_params.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace spinelab;

namespace {

Graph two_cliques(int half) {
    std::vector<std::pair<int, int>> edges;
    for (int b = 0; b < 2; ++b)
        for (int x = 0; x < half; ++x)
            for (int y = x + 1; y < half; ++y)
                edges.emplace_back(b * half + x, b * half + y);
    return Graph(2 * half, edges);
}

} // namespace

TEST_CASE("EO on trivial graphs") {
    auto pool = eo_sample(Graph(6), {.restarts = 2, .seed = 1, .problem = GraphProblem::gbp});
    CHECK(pool.best_cost == 0);

    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    auto col = eo_sample(k3, {.restarts = 3, .seed = 2, .problem = GraphProblem::col3});
    CHECK(col.best_cost == 0);
    REQUIRE(col.configs.size() == 1);
    CHECK(col.configs[0] == std::vector<std::uint8_t>{0, 1, 2});
}

TEST_CASE("EO finds the block bipartition of two K4") {
    Graph g = two_cliques(4);
    auto pool = eo_sample(g, {.restarts = 5, .seed = 3, .problem = GraphProblem::gbp});
    CHECK(pool.best_cost == 0);
    REQUIRE(pool.configs.size() == 1);
    CHECK(pool.configs[0] == std::vector<std::uint8_t>{0, 0, 0, 0, 1, 1, 1, 1});
    CHECK(cost_of(g, GraphProblem::gbp, pool.configs[0]) == 0);

    auto est = backbone_estimate(pool);
    CHECK(est.fraction == Rational(16, 28));
    CHECK(est.pool_size == 1);
}

TEST_CASE("EO is deterministic and validates its config") {
    Graph g = gen_graph(20, 16, 4);
    EoConfig cfg{.restarts = 4, .seed = 9, .problem = GraphProblem::gbp};
    auto a = eo_sample(g, cfg);
    auto b = eo_sample(g, cfg);
    CHECK(a.configs == b.configs);
    CHECK(a.best_cost == b.best_cost);

    cfg.tau = 1.0;
    CHECK_THROWS_AS(eo_sample(g, cfg), ContractError);
    CHECK_THROWS_AS(eo_sample(Graph(5), {.problem = GraphProblem::gbp}), ContractError);
    CHECK_THROWS_AS(backbone_estimate(GroundStatePool{}), ContractError);
}

TEST_CASE("pool cap sets the truncation flag") {
    auto pool = eo_sample(Graph(10), {.restarts = 2, .seed = 1, .problem = GraphProblem::gbp, .pool_cap = 5});
    CHECK(pool.configs.size() == 5);
    CHECK(pool.truncated);
}

TEST_CASE("single configuration gives the degenerate upper bound") {
    GroundStatePool pool{GraphProblem::gbp, 4, 0, {{0, 0, 1, 1}}, false};
    auto est = backbone_estimate(pool);
    CHECK(est.pairs.size() == 4);
    CHECK(est.fraction == Rational(4, 6));
}

TEST_CASE("exhaustive pools reproduce the exact GBP backbone") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = gen_graph(10, 8 + static_cast<int>(seed), seed);
        auto exact = gbp_backbone_exact(g);
        auto pool = eo_sample(g, {.restarts = 10, .seed = seed, .problem = GraphProblem::gbp});
        REQUIRE(pool.best_cost >= exact.opt);
        if (pool.best_cost != exact.opt)
            continue;
        auto est = backbone_estimate(pool);
        CHECK(est.fraction >= exact.fraction);
        if (pool.configs.size() == exact.optimal_partitions)
            CHECK(est.pairs == exact.pairs);
    }
}

TEST_CASE("exact 3-COL backbone") {
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    auto t = col3_backbone_exact(k3);
    CHECK(t.opt == 0);
    CHECK(t.pairs.empty());
    CHECK(t.optimal_colorings == 1);

    Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    auto b = col3_backbone_exact(k4);
    CHECK(b.opt == 1);
    // Every pair is the monochromatic one in some optimal coloring.
    CHECK(b.pairs.empty());
    CHECK(b.optimal_colorings == 6);

    CHECK(col3_backbone_exact(Graph(5)).pairs.empty());
    CHECK_THROWS_AS(col3_backbone_exact(Graph(16)), BudgetExceeded);

    // Two triangles sharing an edge force the tips to the same color.
    Graph diamond(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
    auto d = col3_backbone_exact(diamond);
    CHECK(d.pairs == std::vector<VertexPair>{{0, 3}});
}

TEST_CASE("pool output") {
    GroundStatePool pool{GraphProblem::col3, 3, 0, {{0, 1, 2}}, true};
    std::ostringstream out;
    write_pool(out, pool);
    CHECK(out.str() == "cost 0 problem 3col configs 1 truncated\n012\n");
}
