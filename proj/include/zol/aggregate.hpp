#pragma once

#include <optional>

#include "zol/graph.hpp"
#include "zol/types.hpp"

namespace zol {

/// Column-wise neighbor sums S_v = sum_{u in N(v)} X_u, neighbors visited in
/// ascending order.
///
/// When most columns of X are bitwise identical to one reference column c
/// (typical once sum-aggregation layers saturate) the sums are formed as
/// deg(v) * c plus the scattered corrections X_u - c of the deviating columns,
/// which costs O(sum of deviating degrees) instead of O(|E| d).
Matrix neighbor_sum(const Graph& g, const Eigen::Ref<const Matrix>& x);

/// Reference path without the constant-column shortcut.
Matrix neighbor_sum_direct(const Graph& g, const Eigen::Ref<const Matrix>& x);

/// sum_v X_v in ascending node order.
Vector column_sum(const Eigen::Ref<const Matrix>& x);

/// Lazily computed, memoized aggregates of one (graph, features) pair. Lets
/// several models share the layer-1 aggregation of the same sample.
/// Not thread-safe; each task owns its own instance.
class Aggregates {
 public:
  Aggregates(const Graph& g, const FeatureMatrix& x) : graph_(&g), x_(&x) {}

  const Graph& graph() const { return *graph_; }
  const FeatureMatrix& features() const { return *x_; }

  /// sum over N(v)
  const Matrix& neighbor_sum();
  /// sum over N+(v) of X_u / sqrt(deg+(u) deg+(v))
  const Matrix& gcn_normalized();
  /// mean over N+(v)
  const Matrix& mean_closed();
  const Vector& total();

 private:
  const Graph* graph_;
  const FeatureMatrix* x_;
  std::optional<Matrix> neighbor_sum_;
  std::optional<Matrix> gcn_;
  std::optional<Matrix> mean_;
  std::optional<Vector> total_;
};

}  // namespace zol
