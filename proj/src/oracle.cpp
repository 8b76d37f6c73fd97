#include "zol/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace zol {

namespace {

void require_arch(const Model& m, std::initializer_list<Architecture> allowed, const char* what) {
  for (Architecture a : allowed) {
    if (m.arch == a) return;
  }
  throw Error(std::string(what) + " does not apply to architecture " + std::string(to_string(m.arch)));
}

void require_mu(const Model& m, const Vector& mu) {
  m.validate();
  if (mu.size() != m.dims.front()) throw Error("mean vector has the wrong dimension");
}

// r W_n + W_r, with absent blocks as zero.
Matrix sign_matrix(const Layer& layer, double r) {
  Matrix q = r * layer.W_n;
  if (layer.W_r) q += *layer.W_r;
  return q;
}

std::pair<double, double> saturation_values(const Model& m) {
  auto values = m.sigma.saturation_values();
  if (!values) {
    throw Error("saturation oracle undefined: non-linearity " + std::string(to_string(m.sigma.kind)) +
                " is not eventually constant");
  }
  return *values;
}

// Minimum |s_i| and its index; first component with |s_i| <= tol reported as a failure.
struct SignScan {
  double min_abs = std::numeric_limits<double>::infinity();
  Index argmin = 0;
  std::optional<Index> failed;
};

SignScan scan_signs(const Vector& s, double tol) {
  SignScan out;
  for (Index i = 0; i < s.size(); ++i) {
    const double a = std::abs(s[i]);
    if (a < out.min_abs) {
      out.min_abs = a;
      out.argmin = i;
    }
    if (!out.failed && !(a > tol)) out.failed = i;
  }
  return out;
}

}  // namespace

std::string_view to_string(LimitKind kind) {
  return kind == LimitKind::mu_sequence ? "mu_sequence" : "z_sequence";
}

std::string_view to_string(LimitVerdict verdict) {
  switch (verdict) {
    case LimitVerdict::ok: return "ok";
    case LimitVerdict::splitting: return "splitting";
    case LimitVerdict::not_saturating: return "not_saturating";
  }
  return "unknown";
}

LimitTrace limit_gcn(const Model& m, const Vector& mu) {
  require_arch(m, {Architecture::gcn}, "limit_gcn");
  require_mu(m, mu);
  LimitTrace trace;
  trace.kind = LimitKind::mu_sequence;
  trace.vectors.push_back(mu);
  for (const Layer& layer : m.layers) {
    trace.vectors.push_back(apply(m.sigma, layer.W_n * trace.vectors.back() + layer.b));
  }
  return trace;
}

LimitTrace limit_mean(const Model& m, const Vector& mu) {
  require_arch(m, {Architecture::mean, Architecture::mean_plus}, "limit_mean");
  require_mu(m, mu);
  LimitTrace trace;
  trace.kind = LimitKind::mu_sequence;
  trace.vectors.push_back(mu);
  for (const Layer& layer : m.layers) {
    Matrix a = layer.W_n;
    if (layer.W_r) a += *layer.W_r;
    trace.vectors.push_back(apply(m.sigma, a * trace.vectors.back() + layer.b));
  }
  return trace;
}

LimitTrace limit_sum(const Model& m, double r, const Vector& mu, double tol) {
  require_arch(m, {Architecture::sum, Architecture::sum_plus}, "limit_sum");
  require_mu(m, mu);
  const auto [low, high] = saturation_values(m);
  LimitTrace trace;
  trace.kind = LimitKind::z_sequence;
  trace.vectors.push_back(mu);
  for (std::size_t t = 0; t < m.num_layers(); ++t) {
    const Vector s = sign_matrix(m.layers[t], r) * trace.vectors.back();
    const SignScan scan = scan_signs(s, tol);
    trace.margins.push_back(scan.min_abs);
    if (scan.failed) {
      trace.verdict = LimitVerdict::not_saturating;
      trace.locus = Locus{t + 1, *scan.failed};
      return trace;
    }
    trace.vectors.push_back(s.unaryExpr([low, high](double v) { return v > 0.0 ? high : low; }));
  }
  return trace;
}

SplitCheck check_non_splitting(const Classifier& c, const LimitTrace& trace, double tol) {
  if (trace.kind != LimitKind::mu_sequence) throw Error("non-splitting check needs a mu_sequence trace");
  const double mg = margin(c, trace.last());
  return {mg > tol, mg};
}

SaturationCheck check_sync_saturating(const Model& m, double r, const Vector& mu, double tol, SaturationMode mode) {
  require_arch(m, {Architecture::sum, Architecture::sum_plus}, "check_sync_saturating");
  require_mu(m, mu);
  const auto [low, high] = saturation_values(m);

  SaturationCheck out;
  out.ok = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  auto record = [&](const SignScan& scan, std::size_t layer) {
    if (scan.failed && out.ok) {
      out.ok = false;
      out.locus = Locus{layer, *scan.failed};
    }
    if (scan.min_abs < out.worst_margin) {
      out.worst_margin = scan.min_abs;
      if (out.ok) out.locus = Locus{layer, scan.argmin};
    }
  };

  if (mode == SaturationMode::trajectory) {
    const LimitTrace trace = limit_sum(m, r, mu, tol);
    for (std::size_t t = 0; t < trace.margins.size(); ++t) {
      const Vector s = sign_matrix(m.layers[t], r) * trace.vectors[t];
      record(scan_signs(s, tol), t + 1);
    }
    return out;
  }

  for (std::size_t t = 1; t < m.num_layers(); ++t) {
    if (m.dims[t] > kMaxCornerWidth) throw Error("corner enumeration too large: width " + std::to_string(m.dims[t]));
  }
  if (m.num_layers() > 0) record(scan_signs(sign_matrix(m.layers[0], r) * mu, tol), 1);
  for (std::size_t t = 1; t < m.num_layers(); ++t) {
    const Matrix q = sign_matrix(m.layers[t], r);
    const Index width = m.dims[t];
    Vector z(width);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << width); ++mask) {
      for (Index j = 0; j < width; ++j) z[j] = (mask >> j) & 1U ? high : low;
      record(scan_signs(q * z, tol), t + 1);
    }
  }
  return out;
}

Prediction predict_class(const Model& m, const Classifier& c, double r, const Vector& mu, double tol) {
  Prediction p;
  if (m.arch == Architecture::gat) {
    p.reason = "no oracle for attention aggregation";
    return p;
  }
  if (m.pooling == Pooling::sum) {
    p.reason = "sum pooling has no finite limit";
    return p;
  }

  LimitTrace trace;
  switch (m.arch) {
    case Architecture::gcn: trace = limit_gcn(m, mu); break;
    case Architecture::mean:
    case Architecture::mean_plus: trace = limit_mean(m, mu); break;
    default:
      if (!m.sigma.eventually_constant()) {
        p.reason = "non-linearity is not eventually constant";
        return p;
      }
      trace = limit_sum(m, r, mu, tol);
      break;
  }

  if (trace.verdict == LimitVerdict::not_saturating) {
    std::ostringstream reason;
    reason << "not_saturating at layer " << trace.locus->layer << " component " << trace.locus->index;
    p.reason = reason.str();
    p.trace = std::move(trace);
    return p;
  }

  // Mean and max pooling of identical columns both return that column.
  p.margin = margin(c, trace.last());
  if (!(p.margin > tol)) {
    trace.verdict = LimitVerdict::splitting;
    p.reason = "splitting: limit embedding lies on the decision boundary";
  } else {
    p.cls = classify(c, trace.last());
    p.reason = "ok";
  }
  p.trace = std::move(trace);
  return p;
}

ThresholdGadget threshold_gadget(const Model& base, const Classifier& base_classifier, std::size_t threshold) {
  base.validate();
  base_classifier.check_shapes();
  if (base.arch != Architecture::sum_plus) throw Error("threshold gadget needs a sum_plus base model");
  if (base.sigma.kind != Nonlinearity::Kind::clipped_identity) {
    throw Error("threshold gadget needs the clipped identity non-linearity");
  }
  if (base.num_layers() < 3) throw Error("threshold gadget needs at least three layers");
  if (base.pooling == Pooling::sum) throw Error("threshold gadget needs mean or max pooling");
  if (base_classifier.input_dim() != base.dims.back()) throw Error("classifier does not match the base model");

  ThresholdGadget out;
  Model& m = out.model;
  m.arch = base.arch;
  m.sigma = base.sigma;
  m.pooling = base.pooling;
  m.dims = base.dims;
  for (std::size_t t = 1; t < m.dims.size(); ++t) m.dims[t] += 1;

  for (std::size_t t = 0; t < base.num_layers(); ++t) {
    const Layer& src = base.layers[t];
    const Index out_dim = m.dims[t + 1];
    const Index in_dim = m.dims[t];
    const Index col0 = t == 0 ? 0 : 1;  // layer 1 input keeps the base feature dimension
    auto widen = [&](const Matrix& block) {
      Matrix w = Matrix::Zero(out_dim, in_dim);
      w.block(1, col0, block.rows(), block.cols()) = block;
      return w;
    };
    Layer layer;
    layer.W_s = widen(*src.W_s);
    layer.W_n = widen(src.W_n);
    layer.W_r = widen(*src.W_r);
    layer.b = Vector::Zero(out_dim);
    layer.b.tail(src.b.size()) = src.b;
    if (t == 0) {
      layer.b[0] = 1.0;
    } else if (t == 1) {
      (*layer.W_r)(0, 0) = 2.0;
      layer.b[0] = -(2.0 * static_cast<double>(threshold) + 1.0);
    } else {
      (*layer.W_s)(0, 0) = 1.0;
    }
    m.layers.push_back(std::move(layer));
  }

  const Classifier& bc = base_classifier;
  Classifier& c = out.classifier;
  const Index h = bc.hidden_dim();
  const Index d = bc.input_dim();
  c.W1 = Matrix::Zero(h + 1, d + 1);
  c.W1.block(1, 1, h, d) = bc.W1;
  c.b1 = Vector::Zero(h + 1);
  c.b1.tail(h) = bc.b1;
  c.W2 = Vector::Zero(h + 1);
  c.W2.tail(h) = bc.W2;
  c.b2 = bc.b2;
  // Hidden unit 0 is tanh(10 (v_0 + 1)): exactly 0 at v_0 = -1, ~1 at v_0 = +1,
  // and its output weight exceeds any value the base part of the logit can take.
  c.W1(0, 0) = 10.0;
  c.b1[0] = 10.0;
  c.W2[0] = bc.W2.cwiseAbs().sum() + std::abs(bc.b2) + 1.0;
  return out;
}

std::optional<std::size_t> complete_graph_saturation_size(const Model& m, const Vector& mu, std::size_t max_n) {
  const LimitTrace limits = limit_sum(m, 1.0, mu);
  if (limits.verdict != LimitVerdict::ok) return std::nullopt;
  for (std::size_t n = 1; n <= max_n; n *= 2) {
    const double nd = static_cast<double>(n);
    Vector x = mu;
    bool match = true;
    for (std::size_t t = 0; t < m.num_layers() && match; ++t) {
      const Layer& layer = m.layers[t];
      Matrix a = (nd - 1.0) * layer.W_n;
      if (layer.W_s) a += *layer.W_s;
      if (layer.W_r) a += nd * *layer.W_r;
      x = apply(m.sigma, a * x + layer.b);
      match = (x.array() == limits.vectors[t + 1].array()).all();
    }
    if (match) return n;
  }
  return std::nullopt;
}

std::optional<std::size_t> er_saturation_size(const Model& m, const FeatureDistribution& dist, double r,
                                              double z_score, std::size_t max_n) {
  require_arch(m, {Architecture::sum, Architecture::sum_plus}, "er_saturation_size");
  if (m.num_layers() == 0) return std::nullopt;
  const Vector mu = dist.mean_vector();
  require_mu(m, mu);
  const auto thresholds = m.sigma.saturation_thresholds();
  if (!thresholds) throw Error("saturation oracle undefined: non-linearity is not eventually constant");
  const auto [low_thr, high_thr] = *thresholds;

  const Layer& layer = m.layers.front();
  const Index rows = layer.out_dim();
  const double var = dist.entry_stddev() * dist.entry_stddev();
  const Matrix zero = Matrix::Zero(rows, layer.in_dim());
  const Matrix& g = layer.W_r ? *layer.W_r : zero;
  const Matrix self = (layer.W_s ? *layer.W_s : zero) + g;
  const Matrix neighbor = layer.W_n + g;
  const Vector q = sign_matrix(layer, r) * mu;
  if (scan_signs(q, kDefaultOracleTol).failed) return std::nullopt;

  const Vector self_mean = self * mu + layer.b;
  Vector self_var(rows), pair_var(rows);
  for (Index i = 0; i < rows; ++i) {
    const double wg_mu = neighbor.row(i).dot(mu);
    const double g_mu = g.row(i).dot(mu);
    self_var[i] = var * self.row(i).squaredNorm();
    const double second = r * (var * neighbor.row(i).squaredNorm() + wg_mu * wg_mu) +
                          (1.0 - r) * (var * g.row(i).squaredNorm() + g_mu * g_mu);
    pair_var[i] = std::max(0.0, second - q[i] * q[i]);
  }

  for (std::size_t n = 2; n <= max_n; n *= 2) {
    const double others = static_cast<double>(n - 1);
    bool saturated = true;
    for (Index i = 0; i < rows && saturated; ++i) {
      const double mean = self_mean[i] + others * q[i];
      const double sd = std::sqrt(self_var[i] + others * pair_var[i]);
      const double clearance = q[i] > 0.0 ? mean - high_thr : low_thr - mean;
      saturated = clearance >= z_score * sd;
    }
    if (saturated) return n;
  }
  return std::nullopt;
}

}  // namespace zol
