#include "spinelab/generators.hpp"
#include "spinelab/harness.hpp"
#include "spinelab/io.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sstream>

using namespace spinelab;

namespace {

SweepConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_sweep_config(in);
}

SweepPoint cell(int n, double c, double p_sat) {
    SweepPoint pt;
    pt.problem = "3-sat";
    pt.n = n;
    pt.c = c;
    pt.samples = 10;
    pt.p_sat = p_sat;
    return pt;
}

std::string csv_of(const std::vector<SweepPoint>& pts) {
    std::ostringstream out;
    write_csv(out, pts);
    return out.str();
}

} // namespace

TEST_CASE("problem names") {
    auto p = parse_problem("3-sat");
    CHECK(p.k == 3);
    CHECK(p.signed_model);
    auto x = parse_problem("3-xor-sat");
    CHECK_FALSE(x.signed_model);
    CHECK(x.templates->size() == 2);
    CHECK(parse_problem("1-in-3-sat").signed_model);
    CHECK(parse_problem("gbp").graph);
    CHECK_THROWS_AS(parse_problem("4-col"), ContractError);
}

TEST_CASE("samples are keyed by cell and index") {
    auto p = parse_problem("3-sat");
    const auto s = sample_stream(20, 4.2, 3);
    CHECK(s == sample_stream(20, 4.2, 3));
    CHECK(s != sample_stream(20, 4.2, 4));
    CHECK(s != sample_stream(22, 4.2, 3));
    Formula f = sample_formula(p, 20, 4.2, 1, s);
    CHECK(f.size() == 84);
    CHECK(sample_graph(10, 2.0, 1, 0).num_edges() == 10);
}

TEST_CASE("config parsing") {
    auto cfg = parse("# comment\nproblem = 2-sat\nn = 10, 20\nc = 0.5:1.5:0.25\nsamples = 7\n"
                     "analyzers = spine-constraints,dpll\neta = 0.1,0.3\nspine_stop = 0.1\n");
    CHECK(cfg.problem == "2-sat");
    CHECK(cfg.n == std::vector<int>{10, 20});
    REQUIRE(cfg.c.size() == 5);
    CHECK(cfg.c.back() == Catch::Approx(1.5));
    CHECK(cfg.samples == 7);
    CHECK(cfg.spine);
    CHECK(cfg.spine_constraints);
    CHECK(cfg.dpll);
    CHECK_FALSE(cfg.backbone);
    CHECK(cfg.eta.size() == 2);
    CHECK_NOTHROW(validate(cfg));

    CHECK_THROWS_AS(parse("bogus = 1\n"), ContractError);
    CHECK_THROWS_AS(parse("samples = many\n"), ContractError);
    CHECK_THROWS_AS(parse("analyzers = magic\n"), ContractError);
    CHECK_THROWS_AS(parse("just text\n"), ContractError);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(parse("samples = 0\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("c = 2, 1\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("n = 2\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("problem = gbp\nn = 9\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("plot_column = nope\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("eta = 1.5\n")), ContractError);
    CHECK_THROWS_AS(validate(parse("problem = 7-magic\n")), ContractError);
}

TEST_CASE("sweep is deterministic and fills the requested columns") {
    auto cfg = parse("problem = 3-sat\nn = 8\nc = 3, 6\nsamples = 6\nseed = 5\n"
                     "analyzers = spine-constraints,backbone,dpll,width,mus\n");
    auto a = sweep(cfg);
    auto b = sweep(cfg);
    CHECK(csv_of(a) == csv_of(b));
    REQUIRE(a.size() == 2);
    for (const auto& pt : a) {
        CHECK(pt.f_S_mean.has_value());
        CHECK(pt.f_SC_mean.has_value());
        CHECK(pt.f_B_mean.has_value());
        CHECK(pt.dpll_nodes_median.has_value());
        CHECK(pt.f_S_values.size() == 6);
    }
    CHECK(a[1].p_sat < a[0].p_sat);
}

TEST_CASE("over-budget cells explain missing values") {
    auto cfg = parse("problem = 3-sat\nn = 12\nc = 2\nsamples = 2\nanalyzers = spine,backbone\nbudget_n = 10\n");
    auto pts = sweep(cfg);
    REQUIRE(pts.size() == 1);
    CHECK_FALSE(pts[0].f_S_mean.has_value());
    CHECK_FALSE(pts[0].f_B_mean.has_value());
    const std::string text = csv_of(pts);
    CHECK(text.find("f_S_mean:over-budget-n") != std::string::npos);
    CHECK(text.find("dpll_nodes_median:off") != std::string::npos);
}

TEST_CASE("graph sweep") {
    auto cfg = parse("problem = gbp\nn = 10\nc = 1, 2\nsamples = 3\nanalyzers = spine-constraints,backbone\n");
    auto pts = sweep(cfg);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].f_SC_mean.has_value());
    CHECK(pts[0].f_BC_mean.has_value());
    CHECK_FALSE(pts[0].f_S_mean.has_value());
    CHECK(csv_of(pts).find("f_S_mean:undefined-for-graphs") != std::string::npos);
}

TEST_CASE("csv header, round trip and empty table") {
    std::vector<SweepPoint> one{cell(10, 4.25, 0.5)};
    const std::string text = csv_of(one);
    CHECK(text.substr(0, text.find('\n')) == kCsvHeader);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    std::istringstream in(text);
    auto back = read_csv(in);
    REQUIRE(back.size() == 1);
    CHECK(back[0].c == Catch::Approx(4.25));
    CHECK(back[0].p_sat == Catch::Approx(0.5));
    CHECK(csv_of(back) == text);
    CHECK_THROWS_AS(emit_csv({}, "unused.csv"), ContractError);
    CHECK_THROWS_AS(emit_svg({}, PlotSpec{}, "unused.svg"), ContractError);

    std::ostringstream svg;
    write_svg(svg, one, PlotSpec{"p_sat", {4.27}, "t"});
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("<circle") != std::string::npos);
}

TEST_CASE("threshold estimate") {
    std::vector<SweepPoint> step{cell(10, 1.0, 1.0), cell(10, 2.0, 0.0), cell(10, 3.0, 0.0)};
    auto t = threshold_estimate(step, 0.1);
    REQUIRE(t.size() == 1);
    CHECK(t[0].c_eps > 1.0);
    CHECK(t[0].c_one_minus_eps <= 2.0);
    CHECK(t[0].c_half == Catch::Approx(1.5));

    std::vector<SweepPoint> high{cell(10, 1.0, 0.2), cell(10, 2.0, 0.0)};
    CHECK_THROWS_WITH(threshold_estimate(high, 0.1), Catch::Matchers::ContainsSubstring("low side"));
    std::vector<SweepPoint> low{cell(10, 1.0, 1.0), cell(10, 2.0, 0.8)};
    CHECK_THROWS_WITH(threshold_estimate(low, 0.1), Catch::Matchers::ContainsSubstring("high side"));
}

TEST_CASE("discontinuity probe trends") {
    std::vector<SweepPoint> pts;
    for (int n : {10, 20, 30}) {
        auto pt = cell(n, 5.0, 0.2);
        for (int i = 0; i < 10; ++i) {
            pt.f_S_values.push_back(i < n / 5 ? 0.5 : 0.0);
            pt.f_S_exact.push_back(1);
        }
        pts.push_back(pt);
    }
    auto r = discontinuity_probe(pts, {0.1});
    REQUIRE(r.trends.size() == 1);
    CHECK(r.trends[0].trend == "increasing");
    CHECK(r.rows.size() == 3);

    pts[0].f_S_exact[0] = 0;
    pts[0].f_S_values[0] = 0.2;
    CHECK_THROWS_AS(discontinuity_probe(pts, {0.3}), ContractError);
}

TEST_CASE("instance and graph files round trip") {
    auto p = parse_problem("3-xor");
    Formula f = sample_formula(p, 9, 1.5, 3, 1);
    std::stringstream ss;
    write_instance(ss, f);
    Formula back = read_instance(ss);
    CHECK(back.constraints() == f.constraints());
    CHECK(back.num_vars() == 9);

    auto q = parse_problem("3-sat");
    Formula g = sample_formula(q, 9, 2.0, 3, 1);
    std::stringstream gs;
    write_instance(gs, g);
    CHECK(read_instance(gs).constraints() == g.constraints());

    Graph h = gen_graph(12, 15, 2);
    std::stringstream hs;
    write_graph(hs, h);
    CHECK(read_graph(hs).edges() == h.edges());

    std::istringstream bad("p gcsp 3 1 3 2\nt 0 111\ne 0 1 2 9\n");
    CHECK_THROWS_WITH(read_instance(bad), Catch::Matchers::ContainsSubstring("line 3"));
}

TEST_CASE("cli runs are byte-identical") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "spinelab_cli_test";
    fs::create_directories(dir);
    const std::string cli = SPINELAB_CLI;
    {
        std::ofstream cfg(dir / "sweep.cfg");
        cfg << "problem = 3-sat\nn = 8\nc = 3, 5\nsamples = 4\nanalyzers = spine,dpll\n";
    }
    for (const char* name : {"a.csv", "b.csv"}) {
        const std::string cmd = cli + " --seed 4 --config " + (dir / "sweep.cfg").string() + " --out " +
                                (dir / name).string() + " sweep 2>/dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
    }
    CHECK(read_file((dir / "a.csv").string()) == read_file((dir / "b.csv").string()));
    CHECK(std::system((cli + " solve /nonexistent 2>/dev/null").c_str()) != 0);
    fs::remove_all(dir);
}
