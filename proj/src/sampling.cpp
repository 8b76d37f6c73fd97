#include "zol/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace zol {

double FeatureDistribution::entry_stddev() const {
  return kind == Kind::uniform01 ? std::sqrt(1.0 / 12.0) : stddev;
}

double EdgeProbPolicy::at(std::size_t n) const {
  if (kind == Kind::fixed) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error("edge probability outside [0,1]");
    return r;
  }
  if (n < 2) throw Error("undefined edge probability: sparse_log needs n >= 2");
  const double nd = static_cast<double>(n);
  return std::clamp(std::log(nd) / nd, 0.0, 1.0);
}

namespace {

// Edge (u, v), u < v, is present iff the v-th draw of row u's stream falls
// below the threshold. Rows are independent streams so they can be replayed.
class ErRowSampler {
 public:
  ErRowSampler(std::size_t n, double r, const RngState& rng) : n_(n), rng_(rng), buffer_(n) {
    all_ = r >= 1.0;
    threshold_ = all_ ? 0 : static_cast<std::uint64_t>(std::ldexp(r, 64));
  }

  // Upper neighbors of u in ascending order.
  std::span<const NodeId> row(std::size_t u) {
    std::size_t count = 0;
    if (all_) {
      for (std::size_t v = u + 1; v < n_; ++v) buffer_[count++] = static_cast<NodeId>(v);
    } else if (threshold_ > 0) {
      Rng gen(derive_rng(rng_, u));
      for (std::size_t v = u + 1; v < n_; ++v) {
        buffer_[count] = static_cast<NodeId>(v);
        count += gen() < threshold_ ? 1 : 0;
      }
    }
    return {buffer_.data(), count};
  }

 private:
  std::size_t n_;
  RngState rng_;
  std::vector<NodeId> buffer_;
  std::uint64_t threshold_ = 0;
  bool all_ = false;
};

}  // namespace

Graph sample_er(std::size_t n, const EdgeProbPolicy& policy, const RngState& rng) {
  if (n < 1) throw Error("sample_er needs n >= 1");
  if (n > std::numeric_limits<NodeId>::max()) throw Error("graph too large");
  const double r = policy.at(n);
  ErRowSampler sampler(n, r, rng);

  // Pass 1: degrees. Pass 2: replay rows and scatter. Scanning rows in
  // ascending u keeps every neighbor list sorted without a final sort.
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) {
    auto upper = sampler.row(u);
    offsets[u + 1] += upper.size();
    for (NodeId v : upper) ++offsets[v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];

  std::vector<NodeId> neighbors(offsets[n]);
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t u = 0; u < n; ++u) {
    auto upper = sampler.row(u);
    std::copy(upper.begin(), upper.end(), neighbors.begin() + static_cast<std::ptrdiff_t>(cursor[u]));
    cursor[u] += upper.size();
    for (NodeId v : upper) neighbors[cursor[v]++] = static_cast<NodeId>(u);
  }
  return Graph::from_csr(std::move(offsets), std::move(neighbors));
}

void er_neighbors(std::size_t n, const EdgeProbPolicy& policy, const RngState& rng, std::size_t v,
                  std::vector<NodeId>& out) {
  if (v >= n) throw Error("er_neighbors: node out of range");
  const double r = policy.at(n);
  out.clear();
  if (r >= 1.0) {
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) out.push_back(static_cast<NodeId>(u));
    return;
  }
  const auto threshold = static_cast<std::uint64_t>(std::ldexp(r, 64));
  if (threshold == 0) return;
  // Lower neighbors: pair (u, v) is draw v - u - 1 of row u.
  for (std::size_t u = 0; u < v; ++u) {
    if (draw_at(derive_rng(rng, u), v - u - 1) < threshold) out.push_back(static_cast<NodeId>(u));
  }
  Rng gen(derive_rng(rng, v));
  for (std::size_t u = v + 1; u < n; ++u) {
    if (gen() < threshold) out.push_back(static_cast<NodeId>(u));
  }
}

Graph sample_ba(std::size_t n, std::size_t m, const RngState& rng) {
  if (m < 1 || m >= n) throw Error("invalid attachment count: need 1 <= m < n");
  if (n > std::numeric_limits<NodeId>::max()) throw Error("graph too large");
  Rng gen(rng);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m * (n - m));
  // Every endpoint occurrence, so a uniform pick is degree-proportional.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * m * (n - m));
  std::vector<NodeId> chosen;
  chosen.reserve(m);

  for (std::size_t v = m; v < n; ++v) {
    chosen.clear();
    while (chosen.size() < m) {
      NodeId target = endpoints.empty()
                          ? static_cast<NodeId>(gen.uniform_index(m))
                          : endpoints[gen.uniform_index(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), target) == chosen.end()) chosen.push_back(target);
    }
    for (NodeId target : chosen) {
      edges.emplace_back(target, static_cast<NodeId>(v));
      endpoints.push_back(target);
      endpoints.push_back(static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, edges);
}

FeatureMatrix sample_features(std::size_t n, const FeatureDistribution& dist, const RngState& rng) {
  if (n < 1) throw Error("sample_features needs n >= 1");
  if (dist.dim < 1) throw Error("feature dimension must be >= 1");
  if (dist.kind == FeatureDistribution::Kind::normal && !(dist.stddev > 0.0)) {
    throw Error("normal feature distribution needs stddev > 0");
  }
  FeatureMatrix x(dist.dim, static_cast<Index>(n));
  Rng gen(rng);
  double* data = x.data();
  const Index count = x.size();
  if (dist.kind == FeatureDistribution::Kind::uniform01) {
    for (Index k = 0; k < count; ++k) data[k] = gen.uniform01();
  } else {
    for (Index k = 0; k < count; ++k) data[k] = dist.mean + dist.stddev * gen.normal();
  }
  return x;
}

}  // namespace zol
