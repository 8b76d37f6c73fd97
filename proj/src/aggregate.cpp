#include "zol/aggregate.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace zol {

namespace {

constexpr std::size_t kShortcutMinNodes = 256;

bool same_column(const Eigen::Ref<const Matrix>& x, Index a, Index b) {
  return (x.col(a).array() == x.col(b).array()).all();
}

// Index of a column shared by a majority of a few probes, if any.
std::optional<Index> majority_probe(const Eigen::Ref<const Matrix>& x) {
  const Index n = x.cols();
  const std::array<Index, 5> probes{0, n / 4, n / 2, (3 * n) / 4, n - 1};
  for (Index candidate : probes) {
    int votes = 0;
    for (Index other : probes) votes += same_column(x, candidate, other) ? 1 : 0;
    if (votes >= 3) return candidate;
  }
  return std::nullopt;
}

}  // namespace

Matrix neighbor_sum_direct(const Graph& g, const Eigen::Ref<const Matrix>& x) {
  const Index n = static_cast<Index>(g.num_nodes());
  if (x.cols() != n) throw Error("feature matrix has wrong node count");
  const Index d = x.rows();
  Matrix out = Matrix::Zero(d, n);
  for (Index v = 0; v < n; ++v) {
    double* acc = out.col(v).data();
    for (NodeId u : g.neighbors(static_cast<std::size_t>(v))) {
      const double* src = x.col(u).data();
      for (Index i = 0; i < d; ++i) acc[i] += src[i];
    }
  }
  return out;
}

Matrix neighbor_sum(const Graph& g, const Eigen::Ref<const Matrix>& x) {
  const Index n = static_cast<Index>(g.num_nodes());
  if (x.cols() != n) throw Error("feature matrix has wrong node count");
  if (g.num_nodes() < kShortcutMinNodes) return neighbor_sum_direct(g, x);

  const auto ref = majority_probe(x);
  if (!ref) return neighbor_sum_direct(g, x);
  const Vector c = x.col(*ref);

  std::vector<NodeId> deviating;
  std::uint64_t deviating_degree = 0;
  for (Index v = 0; v < n; ++v) {
    if (!(x.col(v).array() == c.array()).all()) {
      deviating.push_back(static_cast<NodeId>(v));
      deviating_degree += g.degree(static_cast<std::size_t>(v));
    }
  }
  if (2 * deviating_degree > 2 * g.num_edges()) return neighbor_sum_direct(g, x);

  const Index d = x.rows();
  Matrix out(d, n);
  for (Index v = 0; v < n; ++v) {
    out.col(v) = static_cast<double>(g.degree(static_cast<std::size_t>(v))) * c;
  }
  Vector delta(d);
  for (NodeId u : deviating) {
    delta = x.col(u) - c;
    for (NodeId v : g.neighbors(u)) out.col(v) += delta;
  }
  return out;
}

Vector column_sum(const Eigen::Ref<const Matrix>& x) {
  Vector acc = Vector::Zero(x.rows());
  for (Index v = 0; v < x.cols(); ++v) acc += x.col(v);
  return acc;
}

const Matrix& Aggregates::neighbor_sum() {
  if (!neighbor_sum_) neighbor_sum_ = zol::neighbor_sum(*graph_, *x_);
  return *neighbor_sum_;
}

const Matrix& Aggregates::gcn_normalized() {
  if (!gcn_) {
    const Index n = x_->cols();
    Vector inv_sqrt(n);
    for (Index v = 0; v < n; ++v) {
      inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(graph_->degree(static_cast<std::size_t>(v)) + 1));
    }
    const Matrix scaled = (*x_) * inv_sqrt.asDiagonal();
    Matrix agg = neighbor_sum_direct(*graph_, scaled);
    agg += scaled;
    gcn_ = agg * inv_sqrt.asDiagonal();
  }
  return *gcn_;
}

const Matrix& Aggregates::mean_closed() {
  if (!mean_) {
    const Index n = x_->cols();
    Matrix agg = neighbor_sum() + *x_;
    for (Index v = 0; v < n; ++v) {
      agg.col(v) /= static_cast<double>(graph_->degree(static_cast<std::size_t>(v)) + 1);
    }
    mean_ = std::move(agg);
  }
  return *mean_;
}

const Vector& Aggregates::total() {
  if (!total_) total_ = column_sum(*x_);
  return *total_;
}

}  // namespace zol
