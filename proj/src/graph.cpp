#include "zol/graph.hpp"

#include <algorithm>
#include <string>

namespace zol {

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loop at node " + std::to_string(u));
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<NodeId> neighbors(offsets[n]);
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (auto [u, v] : edges) {
    neighbors[cursor[u]++] = v;
    neighbors[cursor[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) {
      throw Error("duplicate edge at node " + std::to_string(v));
    }
  }
  return from_csr(std::move(offsets), std::move(neighbors));
}

Graph Graph::from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> neighbors) {
  if (offsets.empty() || offsets.back() != neighbors.size()) {
    throw Error("inconsistent CSR arrays");
  }
  Graph g;
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(neighbors);
  return g;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> out(num_nodes());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = degree(v);
  return out;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<NodeId>(v));
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges());
  for (std::size_t u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (v > u) out.emplace_back(static_cast<NodeId>(u), v);
    }
  }
  return out;
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
  const std::size_t n = num_nodes();
  if (perm.size() != n) throw Error("permutation size mismatch");
  auto edges = edge_list();
  for (auto& [u, v] : edges) {
    u = perm[u];
    v = perm[v];
  }
  return from_edges(n, edges);
}

void Graph::validate() const {
  const std::size_t n = num_nodes();
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = neighbors(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const NodeId u = nb[k];
      if (u >= n) throw Error("neighbor index out of range at node " + std::to_string(v));
      if (u == v) throw Error("self-loop at node " + std::to_string(v));
      if (k > 0 && nb[k - 1] >= u) {
        throw Error("neighbor list of node " + std::to_string(v) + " not strictly ascending");
      }
      if (!has_edge(u, v)) {
        throw Error("asymmetric edge " + std::to_string(v) + "->" + std::to_string(u));
      }
    }
  }
}

Graph complete_graph(std::size_t n) {
  std::vector<std::uint64_t> offsets(n + 1);
  std::vector<NodeId> neighbors;
  neighbors.reserve(n * (n > 0 ? n - 1 : 0));
  for (std::size_t v = 0; v < n; ++v) {
    offsets[v] = neighbors.size();
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v) neighbors.push_back(static_cast<NodeId>(u));
    }
  }
  offsets[n] = neighbors.size();
  return Graph::from_csr(std::move(offsets), std::move(neighbors));
}

Graph empty_graph(std::size_t n) {
  return Graph::from_csr(std::vector<std::uint64_t>(n + 1, 0), {});
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t v = 1; v < n; ++v) edges.emplace_back(static_cast<NodeId>(v - 1), static_cast<NodeId>(v));
  return Graph::from_edges(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t v = 1; v <= leaves; ++v) edges.emplace_back(0, static_cast<NodeId>(v));
  return Graph::from_edges(leaves + 1, edges);
}

}  // namespace zol
