#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "zol/types.hpp"

namespace zol {

using NodeId = std::uint32_t;

/// Simple undirected graph stored as sorted neighbor lists in CSR layout.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list; pairs may be in any order but must describe a
  /// simple graph (no loops, no duplicates). Throws zol::Error otherwise.
  static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

  /// Adopts prebuilt CSR arrays. Each row must be sorted ascending.
  static Graph from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> neighbors);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::uint64_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  std::vector<std::size_t> degrees() const;

  bool has_edge(std::size_t u, std::size_t v) const;

  /// Edges with u < v, ascending lexicographically.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

  /// Returns the graph with node v relabeled perm[v].
  Graph permuted(std::span<const NodeId> perm) const;

  /// Checks symmetry, absence of loops/duplicates, sortedness and index range.
  /// Throws zol::Error describing the first violation.
  void validate() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> neighbors_;
};

Graph complete_graph(std::size_t n);
Graph empty_graph(std::size_t n);
Graph path_graph(std::size_t n);
/// Node 0 is the center.
Graph star_graph(std::size_t leaves);

}  // namespace zol
