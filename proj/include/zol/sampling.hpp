#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zol/graph.hpp"
#include "zol/rng.hpp"
#include "zol/types.hpp"

namespace zol {

struct FeatureDistribution {
  enum class Kind { uniform01, normal };

  Kind kind = Kind::uniform01;
  Index dim = 1;
  double mean = 0.5;    // normal only
  double stddev = 1.0;  // normal only

  static FeatureDistribution uniform01(Index dim) { return {Kind::uniform01, dim, 0.5, 1.0}; }
  static FeatureDistribution normal(Index dim, double mean, double stddev) {
    return {Kind::normal, dim, mean, stddev};
  }

  /// Exact per-entry mean and standard deviation.
  double entry_mean() const { return kind == Kind::uniform01 ? 0.5 : mean; }
  double entry_stddev() const;

  /// The mean vector of one node feature.
  Vector mean_vector() const { return Vector::Constant(dim, entry_mean()); }

  friend bool operator==(const FeatureDistribution&, const FeatureDistribution&) = default;
};

struct EdgeProbPolicy {
  enum class Kind { fixed, sparse_log };

  Kind kind = Kind::fixed;
  double r = 0.5;

  static EdgeProbPolicy fixed(double r) { return {Kind::fixed, r}; }
  static EdgeProbPolicy sparse_log() { return {Kind::sparse_log, 0.0}; }

  /// Edge probability at size n. sparse_log gives ln(n)/n clamped to [0,1]
  /// and throws for n < 2.
  double at(std::size_t n) const;

  friend bool operator==(const EdgeProbPolicy&, const EdgeProbPolicy&) = default;
};

/// G(n, r): every unordered pair independently with probability r.
Graph sample_er(std::size_t n, const EdgeProbPolicy& policy, const RngState& rng);

/// Barabasi-Albert: m isolated seed nodes, then every new node attaches to m
/// distinct existing nodes chosen proportionally to degree (uniform over the
/// seeds for the first new node). Produces m * (n - m) edges.
/// Neighbors of v, ascending, in the graph sample_er(n, policy, rng) would
/// return; O(n) time and no graph storage.
void er_neighbors(std::size_t n, const EdgeProbPolicy& policy, const RngState& rng, std::size_t v,
                  std::vector<NodeId>& out);

Graph sample_ba(std::size_t n, std::size_t m, const RngState& rng);

/// d x n matrix of i.i.d. entries, drawn column by column.
FeatureMatrix sample_features(std::size_t n, const FeatureDistribution& dist, const RngState& rng);

}  // namespace zol
