#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "zol/sampling.hpp"

using namespace zol;

namespace {

std::size_t max_degree(const Graph& g) {
  const auto d = g.degrees();
  return *std::max_element(d.begin(), d.end());
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("er extremes") {
    const Graph none = sample_er(5, EdgeProbPolicy::fixed(0.0), derive_rng(1, {0}));
    CHECK(none.num_edges() == 0);
    const Graph all = sample_er(5, EdgeProbPolicy::fixed(1.0), derive_rng(1, {0}));
    CHECK(all.num_edges() == 10);
    CHECK(all == complete_graph(5));
    CHECK(sample_er(1, EdgeProbPolicy::fixed(0.5), derive_rng(1, {0})).num_nodes() == 1);
  }

  TEST_CASE("er graphs are valid and deterministic") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Graph g = sample_er(40 + s, EdgeProbPolicy::fixed(0.3), derive_rng(2, {s}));
      CHECK_NOTHROW(g.validate());
      CHECK(g == sample_er(40 + s, EdgeProbPolicy::fixed(0.3), derive_rng(2, {s})));
      const auto deg = g.degrees();
      for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        CHECK(deg[v] == g.neighbors(v).size());
        for (NodeId u : g.neighbors(v)) CHECK(g.has_edge(u, v));
      }
    }
  }

  TEST_CASE("er mean edge count at n=1000 within 3 sigma of the binomial mean") {
    const double m = 499500.0;
    double total = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      total += double(sample_er(1000, EdgeProbPolicy::fixed(0.5), derive_rng(3, {s})).num_edges());
    }
    const double sigma_mean = std::sqrt(m * 0.25) / 10.0;
    CHECK(std::abs(total / 100.0 - m * 0.5) <= 3.0 * sigma_mean);
  }

  TEST_CASE("er edge counts pass a chi-square goodness-of-fit test at n=50") {
    const unsigned pairs = 50 * 49 / 2;
    const int samples = 1000;
    std::vector<unsigned> counts;
    for (int s = 0; s < samples; ++s) {
      counts.push_back(sample_er(50, EdgeProbPolicy::fixed(0.5), derive_rng(4, {std::uint64_t(s)})).num_edges());
    }
    const boost::math::binomial_distribution<> law(pairs, 0.5);
    // Bins: (-inf, lo], (lo, lo+w], ..., (hi, inf) with every expected count >= 5.
    std::vector<double> edges;
    for (int k = 584; k <= 640; k += 8) edges.push_back(k);
    std::vector<double> expected, observed(edges.size() + 1, 0.0);
    double prev = 0.0;
    for (double e : edges) {
      const double c = boost::math::cdf(law, e);
      expected.push_back((c - prev) * samples);
      prev = c;
    }
    expected.push_back((1.0 - prev) * samples);
    for (unsigned c : counts) {
      const auto it = std::lower_bound(edges.begin(), edges.end(), double(c));
      observed[it - edges.begin()] += 1.0;
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      REQUIRE(expected[i] >= 5.0);
      stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    }
    const boost::math::chi_squared_distribution<> chi(double(expected.size() - 1));
    const double p = boost::math::cdf(boost::math::complement(chi, stat));
    INFO("chi2 = " << stat << ", p = " << p);
    CHECK(p > 0.001);
  }

  TEST_CASE("er rows regenerate the sampled graph") {
    for (double r : {0.0, 0.3, 0.5, 1.0}) {
      const std::size_t n = 57;
      const RngState rng = derive_rng(10, {std::uint64_t(r * 10)});
      const Graph g = sample_er(n, EdgeProbPolicy::fixed(r), rng);
      std::vector<NodeId> row;
      for (std::size_t v = 0; v < n; ++v) {
        er_neighbors(n, EdgeProbPolicy::fixed(r), rng, v, row);
        const auto expected = g.neighbors(v);
        CHECK(std::equal(row.begin(), row.end(), expected.begin(), expected.end()));
      }
    }
  }

  TEST_CASE("random access draws match the sequential stream") {
    const RngState s = derive_rng(4, {5, 6});
    Rng gen(s);
    for (std::uint64_t i = 0; i < 100; ++i) CHECK(gen() == draw_at(s, i));
  }

  TEST_CASE("sparse_log policy") {
    CHECK(EdgeProbPolicy::sparse_log().at(100) == doctest::Approx(std::log(100.0) / 100.0));
    CHECK(EdgeProbPolicy::sparse_log().at(2) <= 1.0);
    CHECK_THROWS_WITH_AS(sample_er(1, EdgeProbPolicy::sparse_log(), derive_rng(0, {0})),
                         doctest::Contains("undefined edge probability"), Error);
    const Graph g = sample_er(500, EdgeProbPolicy::sparse_log(), derive_rng(5, {0}));
    CHECK_NOTHROW(g.validate());
  }

  TEST_CASE("ba edge counts and validity") {
    CHECK(sample_ba(2, 1, derive_rng(0, {0})).num_edges() == 1);
    CHECK(sample_ba(10, 2, derive_rng(0, {0})).num_edges() == 16);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = sample_ba(300, 3, derive_rng(6, {s}));
      CHECK_NOTHROW(g.validate());
      CHECK(g.num_edges() == 3u * 297u);
    }
    CHECK_THROWS_WITH_AS(sample_ba(3, 3, derive_rng(0, {0})), doctest::Contains("invalid attachment count"), Error);
    CHECK_THROWS_WITH_AS(sample_ba(3, 0, derive_rng(0, {0})), doctest::Contains("invalid attachment count"), Error);
  }

  TEST_CASE("ba degree tail is heavier than paired er") {
    const std::size_t n = 2000, m = 2;
    const double r = double(m * (n - m)) / (double(n) * double(n - 1) / 2.0);
    int heavier = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Graph ba = sample_ba(n, m, derive_rng(7, {s, 0}));
      const Graph er = sample_er(n, EdgeProbPolicy::fixed(r), derive_rng(7, {s, 1}));
      heavier += max_degree(ba) > max_degree(er);
    }
    CHECK(heavier >= 90);
  }

  TEST_CASE("feature support and moments") {
    const FeatureMatrix small = sample_features(3, FeatureDistribution::uniform01(2), derive_rng(8, {0}));
    CHECK(small.rows() == 2);
    CHECK(small.cols() == 3);
    CHECK(small.minCoeff() >= 0.0);
    CHECK(small.maxCoeff() < 1.0);

    const FeatureMatrix u = sample_features(10000, FeatureDistribution::uniform01(1), derive_rng(8, {1}));
    CHECK(std::abs(u.mean() - 0.5) <= 3.0 * (1.0 / std::sqrt(12.0)) / 100.0);
    const FeatureMatrix z = sample_features(10000, FeatureDistribution::normal(1, 0.5, 1.0), derive_rng(8, {2}));
    CHECK(std::abs(z.mean() - 0.5) <= 3.0 / 100.0);

    CHECK(FeatureDistribution::uniform01(3).mean_vector().isApproxToConstant(0.5));
    CHECK(FeatureDistribution::normal(2, -0.25, 2.0).mean_vector().isApproxToConstant(-0.25));
    CHECK_THROWS_AS(sample_features(3, FeatureDistribution::normal(1, 0.0, 0.0), derive_rng(0, {0})), Error);
    CHECK(sample_features(50, FeatureDistribution::normal(3, 0.0, 1.0), derive_rng(9, {1})) ==
          sample_features(50, FeatureDistribution::normal(3, 0.0, 1.0), derive_rng(9, {1})));
  }
}
