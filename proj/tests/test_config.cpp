#include <doctest.h>

#include "zol/config.hpp"

using namespace zol;

TEST_SUITE("config") {
  TEST_CASE("minimal config fills the documented defaults") {
    const Config c = parse_config(R"({"arch": "gcn", "dims": [8, 8], "sizes": [10, 100]})");
    const ExperimentSpec& s = c.spec;
    CHECK(s.arch == Architecture::gcn);
    CHECK(s.dims == std::vector<Index>{8, 8});
    CHECK(s.sizes == std::vector<std::size_t>{10, 100});
    CHECK(s.init_lo == -1.0);
    CHECK(s.init_hi == 1.0);
    CHECK(s.features == FeatureDistribution::uniform01(8));
    CHECK(s.graph == GraphPolicy::er(EdgeProbPolicy::fixed(0.5)));
    CHECK(s.samples_per_size == 32);
    CHECK(s.num_models == 10);
    CHECK(s.sigma == Nonlinearity::clipped_identity());
    CHECK(s.pooling == Pooling::mean);
    CHECK(s.classifier.hidden == 0);
    CHECK(s.classifier.lo == -1.0);
    CHECK(s.classifier.hi == 1.0);
    CHECK(s.eps == 0.05);
    CHECK(s.k == 3);
    CHECK(s.tol == 1e-9);
    CHECK(c.axes == Axes::log_x);
    CHECK(c.csv_name == "curves.csv");
    CHECK(c.svg_name == "curves.svg");
  }

  TEST_CASE("errors name the offending key") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [100, 50]})"),
                         doctest::Contains("sizes must be ascending"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"archh": "gcn", "dims": [2], "sizes": [1]})"), doctest::Contains("archh"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [1], "graph": {"kind": "er", "rr": 1}})"),
                         doctest::Contains("graph.rr"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [1], "samples_per_size": "many"})"),
                         doctest::Contains("samples_per_size"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [1], "num_models": 0})"),
                         doctest::Contains("num_models"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gnn", "dims": [2], "sizes": [1]})"), doctest::Contains("arch"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"dims": [2], "sizes": [1]})"), doctest::Contains("arch"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2, -1], "sizes": [1]})"), doctest::Contains("dims[1]"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [1], "graph": {"kind": "er", "r": 2}})"),
                         doctest::Contains("graph.r"), Error);
    CHECK_THROWS_AS(parse_config("{not json"), Error);
  }

  TEST_CASE("full config round-trips") {
    const Config c = parse_config(R"({
      "arch": "sum_plus", "dims": [4, 6, 2], "size_grid": {"min": 10, "max": 20000, "count": 12},
      "sigma": {"kind": "clipped_relu", "cap": 2.5}, "pooling": "max", "weight_range": [-0.5, 0.75],
      "classifier": {"hidden": 5, "range": [-2, 2]},
      "features": {"kind": "normal", "mean": 0.5, "stddev": 1},
      "graph": {"kind": "ba", "m": 3}, "samples_per_size": 16, "num_models": 7, "master_seed": 99,
      "convergence": {"eps": 0.1, "k": 2}, "tol": 1e-8, "axes": "linear",
      "outputs": {"csv": "a.csv", "svg": "b.svg"}})");
    CHECK(c.spec.sizes.size() == 12);
    CHECK(c.spec.sizes.back() == 20000);
    CHECK(c.spec.graph == GraphPolicy::ba(3));
    CHECK(parse_config(render_config(c)) == c);
    CHECK(render_config(parse_config(render_config(c))) == render_config(c));

    for (const char* graph : {R"({"kind": "sparse_log"})", R"({"kind": "er", "r": 0.25})"}) {
      const Config g = parse_config(std::string(R"({"arch": "gcn", "dims": [2], "sizes": [2, 3], "graph": )") + graph + "}");
      CHECK(parse_config(render_config(g)) == g);
    }
    const Config minimal = parse_config(R"({"arch": "mean", "dims": [3, 3], "sizes": [5]})");
    CHECK(parse_config(render_config(minimal)) == minimal);
  }

  TEST_CASE("sigma accepts the short string form") {
    const Config c = parse_config(R"({"arch": "gcn", "dims": [2], "sizes": [4], "sigma": "tanh"})");
    CHECK(c.spec.sigma == Nonlinearity::tanh());
  }
}
