#include "zol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "zol/aggregate.hpp"

namespace zol {

std::optional<double> GraphPolicy::fixed_r() const {
  if (kind == Kind::er && edge.kind == EdgeProbPolicy::Kind::fixed) return edge.r;
  return std::nullopt;
}

Graph sample_graph(const GraphPolicy& policy, std::size_t n, const RngState& rng) {
  if (policy.kind == GraphPolicy::Kind::ba) return sample_ba(n, policy.ba_m, rng);
  return sample_er(n, policy.edge, rng);
}

void ExperimentSpec::validate() const {
  if (dims.empty()) throw Error("dims: must not be empty");
  for (Index d : dims) {
    if (d < 1) throw Error("dims: entries must be >= 1");
  }
  if (!(init_lo < init_hi)) throw Error("weight_range: lo must be < hi");
  if (classifier.hidden < 0) throw Error("classifier.hidden: must be >= 0");
  if (!(classifier.lo < classifier.hi)) throw Error("classifier.range: lo must be < hi");
  if (features.dim != dims.front()) throw Error("features: dimension must equal dims[0]");
  if (features.kind == FeatureDistribution::Kind::normal && !(features.stddev > 0.0)) {
    throw Error("features.stddev: must be > 0");
  }
  if (sigma.kind == Nonlinearity::Kind::clipped_relu && !(sigma.cap > 0.0)) throw Error("sigma.cap: must be > 0");
  if (graph.kind == GraphPolicy::Kind::er && graph.edge.kind == EdgeProbPolicy::Kind::fixed &&
      !(graph.edge.r >= 0.0 && graph.edge.r <= 1.0)) {
    throw Error("graph.r: must lie in [0, 1]");
  }
  if (sizes.empty()) throw Error("sizes: must not be empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw Error("sizes: entries must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw Error("sizes must be ascending");
  }
  if (graph.kind == GraphPolicy::Kind::er && graph.edge.kind == EdgeProbPolicy::Kind::sparse_log && sizes.front() < 2) {
    throw Error("sizes: sparse_log needs n >= 2");
  }
  if (graph.kind == GraphPolicy::Kind::ba) {
    if (graph.ba_m < 1) throw Error("graph.m: must be >= 1");
    if (sizes.front() <= graph.ba_m) throw Error("sizes: Barabasi-Albert needs n > m");
  }
  if (samples_per_size < 1) throw Error("samples_per_size: must be >= 1");
  if (num_models < 1) throw Error("num_models: must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw Error("eps: must lie in (0, 0.5)");
  if (k < 1) throw Error("k: must be >= 1");
  if (!(tol >= 0.0)) throw Error("tol: must be >= 0");
}

std::vector<std::size_t> log_spaced_sizes(std::size_t lo, std::size_t hi, std::size_t count) {
  if (lo < 1 || hi < lo || count < 1) throw Error("invalid size grid");
  if (count == 1) return {hi};
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    auto n = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
    if (!out.empty() && n <= out.back()) n = out.back() + 1;
    out.push_back(n);
  }
  out.back() = std::max(out.back(), hi);
  return out;
}

Model make_model(const ExperimentSpec& spec, std::size_t model_id) {
  return init_model(spec.arch, spec.dims, spec.sigma, spec.pooling, spec.init_lo, spec.init_hi,
                    derive_rng(spec.master_seed, {kModelStream, model_id}));
}

Classifier make_classifier(const ExperimentSpec& spec, std::size_t model_id) {
  const Index out = spec.dims.back();
  const Index hidden = spec.classifier.hidden > 0 ? spec.classifier.hidden : out;
  return init_classifier(out, hidden, spec.classifier.lo, spec.classifier.hi,
                         derive_rng(spec.master_seed, {kClassifierStream, model_id}));
}

Instance sample_instance(const ExperimentSpec& spec, std::size_t n, std::size_t sample) {
  Instance inst;
  inst.graph = sample_graph(spec.graph, n, derive_rng(spec.master_seed, {kGraphStream, n, sample}));
  inst.features = sample_features(n, spec.features, derive_rng(spec.master_seed, {kFeatureStream, n, sample}));
  return inst;
}

Prediction predict_for(const ExperimentSpec& spec, const Model& m, const Classifier& c) {
  const auto r = spec.graph.fixed_r();
  if (!r && (m.arch == Architecture::sum || m.arch == Architecture::sum_plus)) {
    Prediction p;
    p.reason = "no fixed edge probability for the saturation oracle";
    return p;
  }
  return predict_class(m, c, r.value_or(0.0), spec.features.mean_vector(), spec.tol);
}

std::string_view to_string(Convergence c) {
  switch (c) {
    case Convergence::zero: return "zero";
    case Convergence::one: return "one";
    case Convergence::undetermined: return "undetermined";
  }
  return "undetermined";
}

Convergence convergence_from_string(std::string_view name) {
  for (auto c : {Convergence::zero, Convergence::one, Convergence::undetermined}) {
    if (to_string(c) == name) return c;
  }
  throw Error("unknown convergence verdict '" + std::string(name) + "'");
}

Convergence detect_convergence(std::span<const double> fractions, double eps, std::size_t k) {
  if (k < 1) throw Error("detect_convergence needs k >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw Error("detect_convergence needs eps in (0, 0.5)");
  if (fractions.size() < k) throw Error("curve shorter than k");
  const auto tail = fractions.last(k);
  if (std::all_of(tail.begin(), tail.end(), [eps](double f) { return f >= 1.0 - eps; })) return Convergence::one;
  if (std::all_of(tail.begin(), tail.end(), [eps](double f) { return f <= eps; })) return Convergence::zero;
  return Convergence::undetermined;
}

Convergence detect_convergence(const std::vector<CurvePoint>& points, double eps, std::size_t k) {
  std::vector<double> fractions;
  fractions.reserve(points.size());
  for (const auto& p : points) fractions.push_back(p.frac_one);
  return detect_convergence(fractions, eps, k);
}

std::vector<CurveSet> run_sweeps(std::span<const ExperimentSpec> specs, SweepOptions options) {
  if (specs.empty()) return {};
  const ExperimentSpec& first = specs.front();
  for (const ExperimentSpec& spec : specs) {
    spec.validate();
    if (spec.sizes != first.sizes || spec.samples_per_size != first.samples_per_size ||
        spec.master_seed != first.master_seed || !(spec.graph == first.graph) || !(spec.features == first.features)) {
      throw Error("run_sweeps: specs must share sizes, samples_per_size, master_seed, graph and features");
    }
  }

  // Flattened (spec, model) list; bits[task * total + slot].
  std::vector<Model> models;
  std::vector<Classifier> classifiers;
  std::vector<std::size_t> offsets;
  for (const ExperimentSpec& spec : specs) {
    offsets.push_back(models.size());
    for (std::size_t id = 0; id < spec.num_models; ++id) {
      models.push_back(make_model(spec, id));
      classifiers.push_back(make_classifier(spec, id));
    }
  }
  const std::size_t total = models.size();
  const std::size_t samples = first.samples_per_size;
  const std::size_t num_tasks = first.sizes.size() * samples;
  std::vector<std::uint8_t> bits(num_tasks * total, 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= num_tasks) return;
      try {
        const std::size_t n = first.sizes[task / samples];
        const Instance inst = sample_instance(first, n, task % samples);
        Aggregates shared(inst.graph, inst.features);
        for (std::size_t slot = 0; slot < total; ++slot) {
          ForwardOptions fo;
          fo.first_layer = &shared;
          const ForwardTrace trace = forward(models[slot], inst.graph, inst.features, &classifiers[slot], fo);
          bits[task * total + slot] = static_cast<std::uint8_t>(*trace.bit);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(num_tasks);
        return;
      }
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, num_tasks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CurveSet> out;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const ExperimentSpec& spec = specs[k];
    CurveSet set;
    set.arch = spec.arch;
    set.layers = spec.layers();
    for (std::size_t id = 0; id < spec.num_models; ++id) {
      const std::size_t slot = offsets[k] + id;
      Curve curve;
      curve.model_id = id;
      curve.prediction = predict_for(spec, models[slot], classifiers[slot]);
      for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
        CurvePoint p;
        p.n = spec.sizes[s];
        p.samples = samples;
        for (std::size_t j = 0; j < samples; ++j) p.ones += bits[(s * samples + j) * total + slot];
        p.frac_one = static_cast<double>(p.ones) / static_cast<double>(samples);
        curve.points.push_back(p);
      }
      curve.verdict = curve.points.size() >= spec.k ? detect_convergence(curve.points, spec.eps, spec.k)
                                                      : Convergence::undetermined;
      set.curves.push_back(std::move(curve));
    }
    out.push_back(std::move(set));
  }
  return out;
}

CurveSet run_sweep(const ExperimentSpec& spec, SweepOptions options) {
  return std::move(run_sweeps(std::span(&spec, 1), options).front());
}

ExactFraction layer_one_exact_fraction(const ExperimentSpec& spec, const Model& m, const Vector& target, std::size_t n,
                                       std::size_t sample, std::size_t max_nodes) {
  if (spec.graph.kind != GraphPolicy::Kind::er) throw Error("layer_one_exact_fraction needs an Erdos-Renyi graph law");
  if (m.arch != Architecture::sum && m.arch != Architecture::sum_plus) {
    throw Error("layer_one_exact_fraction needs a sum model");
  }
  m.validate();
  const Layer& L = m.layers.front();
  if (target.size() != L.out_dim()) throw Error("target does not match the layer-1 width");
  const FeatureMatrix x = sample_features(n, spec.features, derive_rng(spec.master_seed, {kFeatureStream, n, sample}));
  if (x.rows() != L.in_dim()) throw Error("feature dimension does not match the model");
  const RngState graph_rng = derive_rng(spec.master_seed, {kGraphStream, n, sample});

  Vector shared = L.b;
  if (L.W_r) shared += *L.W_r * column_sum(x);
  ExactFraction out;
  std::vector<NodeId> nbrs;
  Vector s(x.rows());
  for (std::size_t v = 0; v < std::min(n, max_nodes); ++v) {
    er_neighbors(n, spec.graph.edge, graph_rng, v, nbrs);
    s.setZero();
    for (NodeId u : nbrs) s += x.col(u);
    const Vector y = apply(m.sigma, Vector(*L.W_s * x.col(static_cast<Index>(v)) + L.W_n * s + shared));
    out.exact += (y.array() == target.array()).all() ? 1 : 0;
    ++out.checked;
  }
  return out;
}

DeviationReport measure_deviation(const Model& m, const Classifier* c, const Graph& g, const FeatureMatrix& x0,
                                  const LimitTrace& limits) {
  const bool sum_like = m.arch == Architecture::sum || m.arch == Architecture::sum_plus;
  const bool mean_like = m.arch == Architecture::gcn || m.arch == Architecture::mean || m.arch == Architecture::mean_plus;
  if (!sum_like && !mean_like) throw Error("no limit trace exists for architecture " + std::string(to_string(m.arch)));
  if (sum_like != (limits.kind == LimitKind::z_sequence)) throw Error("limit trace does not match the architecture");
  if (limits.vectors.size() != m.num_layers() + 1) throw Error("limit trace is incomplete");

  ForwardOptions fo;
  fo.capture = true;
  const ForwardTrace trace = forward(m, g, x0, c, fo);
  DeviationReport report;
  report.bit = trace.bit;
  for (std::size_t t = 1; t <= m.num_layers(); ++t) {
    const Matrix& x = trace.embeddings[t];
    const Vector& z = limits.vectors[t];
    report.max_deviation.push_back((x.colwise() - z).cwiseAbs().maxCoeff());
    if (sum_like) {
      std::size_t exact = 0;
      for (Index v = 0; v < x.cols(); ++v) exact += (x.col(v).array() == z.array()).all() ? 1 : 0;
      report.exact_fraction.push_back(static_cast<double>(exact) / static_cast<double>(x.cols()));
    }
  }
  return report;
}

}  // namespace zol
