#include "zol/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace zol {

namespace {

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

template <typename T>
bool same(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->rows() == b->rows() && a->cols() == b->cols() && (a->array() == b->array()).all());
}

void fill_uniform(Eigen::Ref<Matrix> block, double lo, double hi, const RngState& state) {
  Rng gen(state);
  for (Index j = 0; j < block.cols(); ++j) {
    for (Index i = 0; i < block.rows(); ++i) block(i, j) = gen.uniform(lo, hi);
  }
}

enum Block : std::uint64_t { kBlockWn = 0, kBlockB = 1, kBlockWs = 2, kBlockWr = 3, kBlockA = 4 };

void check_input(const Layer& layer, const Graph& g, const FeatureMatrix& x) {
  if (x.rows() != layer.in_dim()) {
    throw Error("layer expects " + std::to_string(layer.in_dim()) + " input rows, got " +
                std::to_string(x.rows()));
  }
  if (static_cast<std::size_t>(x.cols()) != g.num_nodes()) {
    throw Error("feature matrix has " + std::to_string(x.cols()) + " columns for a graph with " +
                std::to_string(g.num_nodes()) + " nodes");
  }
  if (layer.b.size() != layer.out_dim()) throw Error("bias size mismatch");
}

void check_block(const std::optional<Matrix>& block, const Layer& layer, const char* name) {
  if (block && (block->rows() != layer.out_dim() || block->cols() != layer.in_dim())) {
    throw Error(std::string(name) + " has the wrong shape");
  }
}

Matrix gcn_pre(const Layer& layer, Aggregates& agg) {
  Matrix y = layer.W_n * agg.gcn_normalized();
  y.colwise() += layer.b;
  return y;
}

Matrix mean_pre(const Layer& layer, Aggregates& agg, bool with_readout) {
  Matrix y = layer.W_n * agg.mean_closed();
  Vector shift = layer.b;
  if (with_readout && layer.W_r) {
    const double n = static_cast<double>(agg.features().cols());
    shift += *layer.W_r * (agg.total() / n);
  }
  y.colwise() += shift;
  return y;
}

Matrix sum_pre(const Layer& layer, Aggregates& agg, bool with_readout) {
  Matrix y = layer.W_n * agg.neighbor_sum();
  if (layer.W_s) y.noalias() += *layer.W_s * agg.features();
  Vector shift = layer.b;
  if (with_readout && layer.W_r) shift += *layer.W_r * agg.total();
  y.colwise() += shift;
  return y;
}

double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }

struct AttentionScores {
  Matrix h;
  Vector dst;  // a[0:d] . h_v
  Vector src;  // a[d:2d] . h_u
};

AttentionScores attention_scores(const Layer& layer, const FeatureMatrix& x) {
  if (!layer.a || layer.a->size() != 2 * layer.out_dim()) {
    throw Error("attention vector must have length 2 d(t)");
  }
  const Index d = layer.out_dim();
  AttentionScores s;
  s.h = layer.W_n * x;
  s.dst = s.h.transpose() * layer.a->head(d);
  s.src = s.h.transpose() * layer.a->tail(d);
  return s;
}

Vector attention_for(const AttentionScores& s, const Layer& layer, const Graph& g, std::size_t v) {
  auto nb = g.neighbors(v);
  Vector w(static_cast<Index>(nb.size()) + 1);
  const auto vi = static_cast<Index>(v);
  w[0] = leaky_relu(s.dst[vi] + s.src[vi], layer.slope);
  for (std::size_t k = 0; k < nb.size(); ++k) {
    w[static_cast<Index>(k) + 1] = leaky_relu(s.dst[vi] + s.src[nb[k]], layer.slope);
  }
  const double top = w.maxCoeff();
  w = (w.array() - top).exp().matrix();
  return w / w.sum();
}

Matrix gat_pre(const Layer& layer, const Graph& g, const FeatureMatrix& x) {
  const AttentionScores s = attention_scores(layer, x);
  const Index n = x.cols();
  Matrix y(layer.out_dim(), n);
  for (Index v = 0; v < n; ++v) {
    const Vector w = attention_for(s, layer, g, static_cast<std::size_t>(v));
    auto nb = g.neighbors(static_cast<std::size_t>(v));
    Vector acc = w[0] * s.h.col(v);
    for (std::size_t k = 0; k < nb.size(); ++k) acc += w[static_cast<Index>(k) + 1] * s.h.col(nb[k]);
    y.col(v) = acc + layer.b;
  }
  return y;
}

FeatureMatrix activate(Matrix y, const Nonlinearity& sigma) {
  apply_inplace(sigma, y);
  return y;
}

}  // namespace

bool operator==(const Layer& a, const Layer& b) {
  return same(a.W_s, b.W_s) && same(a.W_n, b.W_n) && same(a.W_r, b.W_r) && same(Matrix(a.b), Matrix(b.b)) &&
         same(a.a, b.a) &&
         a.slope == b.slope;
}

bool operator==(const Model& a, const Model& b) {
  return a.arch == b.arch && a.layers == b.layers && a.sigma == b.sigma && a.pooling == b.pooling &&
         a.dims == b.dims;
}

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::gcn: return "gcn";
    case Architecture::mean: return "mean";
    case Architecture::mean_plus: return "mean_plus";
    case Architecture::sum: return "sum";
    case Architecture::sum_plus: return "sum_plus";
    case Architecture::gat: return "gat";
  }
  return "unknown";
}

std::string_view to_string(Pooling pooling) {
  switch (pooling) {
    case Pooling::mean: return "mean";
    case Pooling::sum: return "sum";
    case Pooling::max: return "max";
  }
  return "unknown";
}

Architecture architecture_from_string(std::string_view name) {
  for (auto arch : {Architecture::gcn, Architecture::mean, Architecture::mean_plus, Architecture::sum,
                    Architecture::sum_plus, Architecture::gat}) {
    if (to_string(arch) == name) return arch;
  }
  throw Error("unknown architecture '" + std::string(name) + "'");
}

Pooling pooling_from_string(std::string_view name) {
  for (auto p : {Pooling::mean, Pooling::sum, Pooling::max}) {
    if (to_string(p) == name) return p;
  }
  throw Error("unknown pooling '" + std::string(name) + "'");
}

bool has_self_block(Architecture arch) {
  return arch == Architecture::sum || arch == Architecture::sum_plus;
}
bool has_readout_block(Architecture arch) {
  return arch == Architecture::mean_plus || arch == Architecture::sum_plus;
}
bool has_attention(Architecture arch) { return arch == Architecture::gat; }

void Model::validate() const {
  if (dims.empty()) throw Error("model dims must not be empty");
  if (dims.size() != layers.size() + 1) throw Error("model needs dims.size() == layers + 1");
  for (Index d : dims) {
    if (d < 1) throw Error("model dims must be >= 1");
  }
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const Layer& layer = layers[t];
    const std::string where = "layer " + std::to_string(t + 1) + ": ";
    if (layer.W_n.rows() != dims[t + 1] || layer.W_n.cols() != dims[t]) {
      throw Error(where + "W_n has the wrong shape");
    }
    if (layer.b.size() != dims[t + 1]) throw Error(where + "b has the wrong size");
    if (layer.W_s.has_value() != has_self_block(arch)) throw Error(where + "W_s presence does not match architecture");
    if (layer.W_r.has_value() != has_readout_block(arch)) throw Error(where + "W_r presence does not match architecture");
    if (layer.a.has_value() != has_attention(arch)) throw Error(where + "attention presence does not match architecture");
    check_block(layer.W_s, layer, "W_s");
    check_block(layer.W_r, layer, "W_r");
    if (layer.a && layer.a->size() != 2 * dims[t + 1]) throw Error(where + "a must have length 2 d(t)");
  }
}

Model init_model(Architecture arch, std::vector<Index> dims, Nonlinearity sigma, Pooling pooling, double lo,
                 double hi, const RngState& rng) {
  if (dims.empty()) throw Error("init_model needs at least one dimension");
  for (Index d : dims) {
    if (d < 1) throw Error("init_model dims must be >= 1");
  }
  if (!(lo < hi)) throw Error("init range needs lo < hi");

  Model m;
  m.arch = arch;
  m.sigma = sigma;
  m.pooling = pooling;
  m.dims = std::move(dims);
  for (std::size_t t = 1; t < m.dims.size(); ++t) {
    const Index out = m.dims[t];
    const Index in = m.dims[t - 1];
    auto key = [t](Block block) { return static_cast<std::uint64_t>(t) * 8 + block; };
    Layer layer;
    layer.W_n.resize(out, in);
    fill_uniform(layer.W_n, lo, hi, derive_rng(rng, key(kBlockWn)));
    layer.b.resize(out);
    fill_uniform(layer.b, lo, hi, derive_rng(rng, key(kBlockB)));
    if (has_self_block(arch)) {
      layer.W_s = Matrix(out, in);
      fill_uniform(*layer.W_s, lo, hi, derive_rng(rng, key(kBlockWs)));
    }
    if (has_readout_block(arch)) {
      layer.W_r = Matrix(out, in);
      fill_uniform(*layer.W_r, lo, hi, derive_rng(rng, key(kBlockWr)));
    }
    if (has_attention(arch)) {
      layer.a = Vector(2 * out);
      fill_uniform(*layer.a, lo, hi, derive_rng(rng, key(kBlockA)));
    }
    m.layers.push_back(std::move(layer));
  }
  return m;
}

FeatureMatrix layer_gcn(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma) {
  check_input(layer, g, x);
  Aggregates agg(g, x);
  return activate(gcn_pre(layer, agg), sigma);
}

FeatureMatrix layer_mean(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma,
                         bool with_readout) {
  check_input(layer, g, x);
  check_block(layer.W_r, layer, "W_r");
  if (with_readout && !layer.W_r) throw Error("readout requested but W_r is absent");
  Aggregates agg(g, x);
  return activate(mean_pre(layer, agg, with_readout), sigma);
}

FeatureMatrix layer_sum(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma,
                        bool with_readout) {
  check_input(layer, g, x);
  check_block(layer.W_s, layer, "W_s");
  check_block(layer.W_r, layer, "W_r");
  if (with_readout && !layer.W_r) throw Error("readout requested but W_r is absent");
  Aggregates agg(g, x);
  return activate(sum_pre(layer, agg, with_readout), sigma);
}

FeatureMatrix layer_gat(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma) {
  check_input(layer, g, x);
  return activate(gat_pre(layer, g, x), sigma);
}

Vector attention_weights(const Layer& layer, const Graph& g, const FeatureMatrix& x, std::size_t v) {
  check_input(layer, g, x);
  return attention_for(attention_scores(layer, x), layer, g, v);
}

Matrix preactivation(const Model& model, std::size_t layer_index, Aggregates& agg) {
  const Layer& layer = model.layers.at(layer_index);
  check_input(layer, agg.graph(), agg.features());
  switch (model.arch) {
    case Architecture::gcn: return gcn_pre(layer, agg);
    case Architecture::mean: return mean_pre(layer, agg, false);
    case Architecture::mean_plus: return mean_pre(layer, agg, true);
    case Architecture::sum: return sum_pre(layer, agg, false);
    case Architecture::sum_plus: return sum_pre(layer, agg, true);
    case Architecture::gat: return gat_pre(layer, agg.graph(), agg.features());
  }
  throw Error("unknown architecture");
}

Vector pool(Pooling kind, const Eigen::Ref<const Matrix>& x) {
  if (x.cols() == 0) throw Error("cannot pool an empty node set");
  switch (kind) {
    case Pooling::mean: return column_sum(x) / static_cast<double>(x.cols());
    case Pooling::sum: return column_sum(x);
    case Pooling::max: {
      Vector acc = x.col(0);
      for (Index v = 1; v < x.cols(); ++v) acc = acc.cwiseMax(x.col(v));
      return acc;
    }
  }
  throw Error("unknown pooling");
}

ForwardTrace forward(const Model& model, const Graph& g, const FeatureMatrix& x0, const Classifier* classifier,
                     ForwardOptions options) {
  model.validate();
  if (x0.rows() != model.dims.front()) {
    throw Error("input features have " + std::to_string(x0.rows()) + " rows, model expects " +
                std::to_string(model.dims.front()));
  }
  if (static_cast<std::size_t>(x0.cols()) != g.num_nodes()) throw Error("feature matrix / graph size mismatch");
  if (options.first_layer &&
      (&options.first_layer->graph() != &g || &options.first_layer->features() != &x0)) {
    throw Error("shared aggregates refer to different inputs");
  }

  ForwardTrace trace;
  if (options.capture) trace.embeddings.push_back(x0);

  FeatureMatrix current;
  const FeatureMatrix* input = &x0;
  for (std::size_t t = 0; t < model.num_layers(); ++t) {
    Matrix y;
    if (t == 0 && options.first_layer) {
      y = preactivation(model, t, *options.first_layer);
    } else {
      Aggregates agg(g, *input);
      y = preactivation(model, t, agg);
    }
    current = activate(std::move(y), model.sigma);
    input = &current;
    if (options.capture) trace.embeddings.push_back(current);
  }
  if (!options.capture) trace.embeddings.push_back(*input);

  trace.pooled = pool(model.pooling, *input);
  if (classifier) {
    trace.logit = mlp_logit(*classifier, trace.pooled);
    trace.bit = *trace.logit > 0.0 ? 1 : 0;
  }
  return trace;
}

}  // namespace zol
