#pragma once

#include <cmath>

#include "zol/rng.hpp"
#include "zol/types.hpp"

namespace zol {

/// Two-layer MLP head: logit = W2 * tanh(W1 * v + b1) + b2, class 1 iff the
/// sigmoid of the logit exceeds 0.5 (ties go to class 0).
struct Classifier {
  Matrix W1;  // h x d(T)
  Vector b1;  // h
  Vector W2;  // h (the single output row)
  double b2 = 0.0;

  Index input_dim() const { return W1.cols(); }
  Index hidden_dim() const { return W1.rows(); }

  void check_shapes() const;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Every entry i.i.d. uniform on (lo, hi); hidden width h.
Classifier init_classifier(Index input_dim, Index hidden, double lo, double hi, const RngState& rng);

double mlp_logit(const Classifier& c, const Eigen::Ref<const Vector>& v);
int classify(const Classifier& c, const Eigen::Ref<const Vector>& v);
/// |sigmoid(logit) - 0.5|
double margin(const Classifier& c, const Eigen::Ref<const Vector>& v);

}  // namespace zol
