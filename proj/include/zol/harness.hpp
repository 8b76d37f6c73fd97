#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zol/classifier.hpp"
#include "zol/graph.hpp"
#include "zol/model.hpp"
#include "zol/oracle.hpp"
#include "zol/sampling.hpp"

namespace zol {

struct GraphPolicy {
  enum class Kind { er, ba };

  Kind kind = Kind::er;
  EdgeProbPolicy edge = EdgeProbPolicy::fixed(0.5);  // er only
  std::size_t ba_m = 2;                              // ba only

  static GraphPolicy er(EdgeProbPolicy edge) { return {Kind::er, edge, 2}; }
  static GraphPolicy ba(std::size_t m) { return {Kind::ba, EdgeProbPolicy::fixed(0.5), m}; }

  /// Fixed edge probability for the oracles; empty when r depends on n or the
  /// graph is not Erdos-Renyi.
  std::optional<double> fixed_r() const;

  friend bool operator==(const GraphPolicy&, const GraphPolicy&) = default;
};

Graph sample_graph(const GraphPolicy& policy, std::size_t n, const RngState& rng);

struct ClassifierSpec {
  Index hidden = 0;  // 0 = d(T)
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const ClassifierSpec&, const ClassifierSpec&) = default;
};

struct ExperimentSpec {
  Architecture arch = Architecture::gcn;
  std::vector<Index> dims;
  Nonlinearity sigma = Nonlinearity::clipped_identity();
  Pooling pooling = Pooling::mean;
  double init_lo = -1.0;
  double init_hi = 1.0;
  ClassifierSpec classifier;
  FeatureDistribution features = FeatureDistribution::uniform01(1);  // dim follows dims[0]
  GraphPolicy graph;
  std::vector<std::size_t> sizes;
  std::size_t samples_per_size = 32;
  std::size_t num_models = 10;
  std::uint64_t master_seed = 0;
  double eps = 0.05;
  std::size_t k = 3;
  double tol = kDefaultOracleTol;

  std::size_t layers() const { return dims.empty() ? 0 : dims.size() - 1; }
  /// Throws zol::Error naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// `count` sizes from lo to hi spaced evenly in log scale, rounded and made
/// strictly ascending.
std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count);

// Stream tags for derive_rng task keys.
inline constexpr std::uint64_t kGraphStream = 1;
inline constexpr std::uint64_t kFeatureStream = 2;
inline constexpr std::uint64_t kModelStream = 3;
inline constexpr std::uint64_t kClassifierStream = 4;

Model make_model(const ExperimentSpec& spec, std::size_t model_id);
Classifier make_classifier(const ExperimentSpec& spec, std::size_t model_id);

struct Instance {
  Graph graph;
  FeatureMatrix features;
};
/// The graph and features of sample `sample` at size n. Shared by every model
/// of a sweep.
Instance sample_instance(const ExperimentSpec& spec, std::size_t n, std::size_t sample);

/// Oracle prediction for one model under an ExperimentSpec's graph and feature law.
Prediction predict_for(const ExperimentSpec& spec, const Model& m, const Classifier& c);

enum class Convergence { zero, one, undetermined };
std::string_view to_string(Convergence c);
Convergence convergence_from_string(std::string_view name);

struct CurvePoint {
  std::size_t n = 0;
  std::size_t ones = 0;
  std::size_t samples = 0;
  double frac_one = 0.0;
};

struct Curve {
  std::size_t model_id = 0;
  Prediction prediction;
  std::vector<CurvePoint> points;
  Convergence verdict = Convergence::undetermined;
};

struct CurveSet {
  Architecture arch = Architecture::gcn;
  std::size_t layers = 0;
  std::vector<Curve> curves;
};

struct SweepOptions {
  std::size_t threads = 1;
};

/// Fraction of samples classified 1 per (model, size). Every (size, sample)
/// task draws its graph and features from its own derived stream and runs all
/// models on them; results are independent of the thread count.
CurveSet run_sweep(const ExperimentSpec& spec, SweepOptions options = {});

/// Several sweeps over the same sampled instances (specs must agree on sizes,
/// samples_per_size, master_seed, graph and features); each graph is sampled
/// once and its first-layer aggregation shared by every model. Results equal
/// running each spec through run_sweep.
std::vector<CurveSet> run_sweeps(std::span<const ExperimentSpec> specs, SweepOptions options = {});

/// One if the last k fractions are all >= 1 - eps, Zero if all <= eps.
Convergence detect_convergence(std::span<const double> fractions, double eps, std::size_t k);
Convergence detect_convergence(const std::vector<CurvePoint>& points, double eps, std::size_t k);

struct DeviationReport {
  /// Layer t = 1..T: max over nodes and components of |x_v^(t) - limit_t|.
  std::vector<double> max_deviation;
  /// z_sequence limits only: fraction of nodes with x_v^(t) == z_t exactly.
  std::vector<double> exact_fraction;
  std::optional<int> bit;
};

DeviationReport measure_deviation(const Model& m, const Classifier* c, const Graph& g, const FeatureMatrix& x0,
                                  const LimitTrace& limits);

struct ExactFraction {
  std::size_t checked = 0;
  std::size_t exact = 0;
  double fraction() const { return checked == 0 ? 0.0 : static_cast<double>(exact) / static_cast<double>(checked); }
};

/// Counts nodes of instance (n, sample) whose layer-1 embedding equals
/// `target` exactly, for Erdos-Renyi specs. Nodes 0..min(n, max_nodes)-1 are
/// evaluated from regenerated adjacency rows (er_neighbors), so n may exceed
/// what fits in memory as a graph; with max_nodes >= n every node is counted.
ExactFraction layer_one_exact_fraction(const ExperimentSpec& spec, const Model& m, const Vector& target, std::size_t n,
                                       std::size_t sample, std::size_t max_nodes);

}  // namespace zol
