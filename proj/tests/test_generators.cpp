#include "spinelab/generators.hpp"
#include "spinelab/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

using namespace spinelab;

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(7, 1), b(7, 1), c(7, 2);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        differs |= x != c.next();
    }
    CHECK(differs);
    Rng r(1);
    for (int i = 0; i < 1000; ++i)
        CHECK(r.below(7) < 7);
}

TEST_CASE("named families") {
    CHECK(named_family("k-sat", 3)->at(0).satisfying_count() == 7);
    CHECK(named_family("1-in-k-sat", 3)->at(0).satisfying_count() == 3);
    CHECK(named_family("k-xor-sat", 3)->at(0).satisfying_count() == 4);
    CHECK(named_family("2-sat", 2)->at(0).satisfying_count() == 3);
    CHECK_THROWS_AS(named_family("2-sat", 3), ContractError);
    CHECK_THROWS_AS(named_family("nope", 3), ContractError);
}

TEST_CASE("closure and goodness") {
    CHECK(closure(*named_family("k-xor-sat", 3))->size() == 2);
    CHECK(closure(*named_family("k-sat", 3))->size() == 8);
    std::vector<ConstraintTemplate> taut{ConstraintTemplate(0, 2, 3, std::vector<std::uint8_t>(8, 1))};
    CHECK(closure(TemplateSet(2, 3, taut))->size() == 1);

    CHECK(is_good(*named_family("k-sat", 3)));
    CHECK_FALSE(is_good(*named_family("k-xor-sat", 3)));
    CHECK(is_good(*named_family("1-in-k-sat", 3)));
}

TEST_CASE("gen_csp contracts") {
    GenSpec spec{Model::csp_counting, 5, 10, closure(*named_family("k-sat", 3)), 42, 0};
    Formula f = gen_csp(spec);
    CHECK(f.size() == 10);
    for (const auto& c : f.constraints()) {
        std::set<int> vars(c.vars.begin(), c.vars.end());
        CHECK(vars.size() == 3);
    }
    Formula g = gen_csp(spec);
    CHECK(f.constraints() == g.constraints());

    spec.m = 0;
    CHECK(gen_csp(spec).variables().empty());
    spec.n = 2;
    CHECK_THROWS_AS(gen_csp(spec), ContractError);
}

TEST_CASE("gen_sat_neg negates each occurrence with probability 1/2") {
    GenSpec spec{Model::sat_neg, 30, 4000, named_family("k-sat", 3), 9, 3};
    Formula f = gen_sat_neg(spec);
    std::size_t neg = 0, total = 0;
    for (const auto& c : f.constraints())
        for (std::size_t i = 0; i < c.vars.size(); ++i) {
            neg += c.neg(i);
            ++total;
        }
    const double sigma = std::sqrt(total * 0.25);
    CHECK(std::abs(static_cast<double>(neg) - total / 2.0) <= 3 * sigma);

    spec.m = 0;
    CHECK(gen_sat_neg(spec).empty());

    GenSpec colors{Model::sat_neg, 5, 3, nullptr, 1, 0};
    std::vector<ConstraintTemplate> ne{ConstraintTemplate::from_predicate(0, 3, 2, [](std::span<const int> t) { return t[0] != t[1]; })};
    colors.templates = std::make_shared<const TemplateSet>(3, 2, ne);
    CHECK_THROWS_AS(gen_sat_neg(colors), ContractError);
}

TEST_CASE("gen_graph") {
    CHECK(gen_graph(6, 0, 1).num_edges() == 0);
    Graph k = gen_graph(6, 15, 1);
    CHECK(k.num_edges() == 15);
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            CHECK(k.has_edge(u, v));
    CHECK(gen_graph(20, 17, 5, 2).edges() == gen_graph(20, 17, 5, 2).edges());
    CHECK_THROWS_AS(gen_graph(4, 7, 1), ContractError);
    CHECK(edges_for_mean_degree(1.386, 256) == 177);
}
