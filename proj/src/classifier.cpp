#include "zol/classifier.hpp"

#include <string>


namespace zol {

void Classifier::check_shapes() const {
  if (b1.size() != W1.rows() || W2.size() != W1.rows()) {
    throw Error("classifier blocks have inconsistent hidden width");
  }
}

Classifier init_classifier(Index input_dim, Index hidden, double lo, double hi, const RngState& rng) {
  if (input_dim < 1 || hidden < 1) throw Error("classifier dimensions must be >= 1");
  if (!(lo < hi)) throw Error("classifier init range needs lo < hi");
  Rng gen(rng);
  auto draw = [&](auto& block) {
    for (Index k = 0; k < block.size(); ++k) block.data()[k] = gen.uniform(lo, hi);
  };
  Classifier c;
  c.W1.resize(hidden, input_dim);
  c.b1.resize(hidden);
  c.W2.resize(hidden);
  draw(c.W1);
  draw(c.b1);
  draw(c.W2);
  c.b2 = gen.uniform(lo, hi);
  return c;
}

double mlp_logit(const Classifier& c, const Eigen::Ref<const Vector>& v) {
  c.check_shapes();
  if (v.size() != c.input_dim()) {
    throw Error("classifier expects input of dimension " + std::to_string(c.input_dim()) +
                ", got " + std::to_string(v.size()));
  }
  const Vector hidden = (c.W1 * v + c.b1).array().tanh().matrix();
  return c.W2.dot(hidden) + c.b2;
}

int classify(const Classifier& c, const Eigen::Ref<const Vector>& v) {
  return mlp_logit(c, v) > 0.0 ? 1 : 0;
}

double margin(const Classifier& c, const Eigen::Ref<const Vector>& v) {
  return std::abs(sigmoid(mlp_logit(c, v)) - 0.5);
}

}  // namespace zol
