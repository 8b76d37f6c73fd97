#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "zol/aggregate.hpp"
#include "zol/classifier.hpp"
#include "zol/graph.hpp"
#include "zol/nonlinearity.hpp"
#include "zol/rng.hpp"
#include "zol/types.hpp"

namespace zol {

enum class Architecture { gcn, mean, mean_plus, sum, sum_plus, gat };
enum class Pooling { mean, sum, max };

std::string_view to_string(Architecture arch);
std::string_view to_string(Pooling pooling);
Architecture architecture_from_string(std::string_view name);
Pooling pooling_from_string(std::string_view name);

bool has_self_block(Architecture arch);     // W_s
bool has_readout_block(Architecture arch);  // W_r
bool has_attention(Architecture arch);      // a

/// One message-passing layer; blocks an architecture does not use are empty.
struct Layer {
  std::optional<Matrix> W_s;  // d(t) x d(t-1)
  Matrix W_n;                 // d(t) x d(t-1)
  std::optional<Matrix> W_r;  // d(t) x d(t-1), global readout
  Vector b;                   // d(t)
  std::optional<Vector> a;    // 2 d(t), attention
  double slope = 0.2;         // attention leaky-relu slope

  Index in_dim() const { return W_n.cols(); }
  Index out_dim() const { return W_n.rows(); }

  friend bool operator==(const Layer& a, const Layer& b);
};

struct Model {
  Architecture arch = Architecture::gcn;
  std::vector<Layer> layers;
  Nonlinearity sigma;
  Pooling pooling = Pooling::mean;
  std::vector<Index> dims;  // d(0..T)

  std::size_t num_layers() const { return layers.size(); }

  /// Dimension chaining and block presence per architecture; throws zol::Error.
  void validate() const;

  friend bool operator==(const Model& a, const Model& b);
};

/// Every weight and bias entry i.i.d. uniform on (lo, hi). Each block is drawn
/// from its own substream keyed by (layer, block), so architectures that share
/// a block (e.g. W_n and b of gcn and mean) receive identical values.
Model init_model(Architecture arch, std::vector<Index> dims, Nonlinearity sigma, Pooling pooling,
                 double lo, double hi, const RngState& rng);

// Single-layer updates. Each returns sigma(Y) with Y the d(t) x n preactivations.
FeatureMatrix layer_gcn(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma);
FeatureMatrix layer_mean(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma,
                         bool with_readout);
FeatureMatrix layer_sum(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma,
                        bool with_readout);
FeatureMatrix layer_gat(const Layer& layer, const Graph& g, const FeatureMatrix& x, const Nonlinearity& sigma);

/// Preactivations of one layer of `model`, reading aggregates from `agg`.
Matrix preactivation(const Model& model, std::size_t layer_index, Aggregates& agg);

/// Attention coefficients of node v over N+(v) = {v} followed by N(v) ascending.
Vector attention_weights(const Layer& layer, const Graph& g, const FeatureMatrix& x, std::size_t v);

Vector pool(Pooling kind, const Eigen::Ref<const Matrix>& x);

struct ForwardTrace {
  std::vector<FeatureMatrix> embeddings;  // X^(0..T) when captured, else only X^(T)
  Vector pooled;
  std::optional<int> bit;
  std::optional<double> logit;
};

struct ForwardOptions {
  bool capture = false;
  /// Aggregates of (g, X0) shared across models; must refer to the same inputs.
  Aggregates* first_layer = nullptr;
};

ForwardTrace forward(const Model& model, const Graph& g, const FeatureMatrix& x0,
                     const Classifier* classifier = nullptr, ForwardOptions options = {});

}  // namespace zol
