#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zol/classifier.hpp"
#include "zol/model.hpp"
#include "zol/sampling.hpp"
#include "zol/types.hpp"

namespace zol {

inline constexpr double kDefaultOracleTol = 1e-9;

enum class LimitKind { mu_sequence, z_sequence };
enum class LimitVerdict { ok, splitting, not_saturating };

std::string_view to_string(LimitKind kind);
std::string_view to_string(LimitVerdict verdict);

/// Layer (1-based, 0 = input) and component of a condition check.
struct Locus {
  std::size_t layer = 0;
  Index index = 0;
  friend bool operator==(const Locus&, const Locus&) = default;
};

/// Asymptotic per-layer node embedding predicted from the weights.
///
/// mu_sequence: mu_t = sigma(A_t mu_{t-1} + b_t), the common limit of every
/// node embedding under mean-type aggregation.
/// z_sequence: corner vectors of {sigma_-inf, sigma_inf}^d(t) reached once
/// sum-aggregation preactivations diverge; vectors[0] is the feature mean.
struct LimitTrace {
  LimitKind kind = LimitKind::mu_sequence;
  std::vector<Vector> vectors;  // t = 0..T (truncated at a failed layer)
  std::vector<double> margins;  // z_sequence: min_i |[(r W_n + W_r) z]_i| per layer
  LimitVerdict verdict = LimitVerdict::ok;
  std::optional<Locus> locus;

  const Vector& last() const { return vectors.back(); }
};

struct Prediction {
  std::optional<int> cls;  // empty = undetermined
  double margin = 0.0;
  std::string reason;
  std::optional<LimitTrace> trace;
};

LimitTrace limit_gcn(const Model& m, const Vector& mu);
LimitTrace limit_mean(const Model& m, const Vector& mu);
/// Throws if sigma is not eventually constant.
LimitTrace limit_sum(const Model& m, double r, const Vector& mu, double tol = kDefaultOracleTol);

struct SplitCheck {
  bool ok = false;
  double margin = 0.0;
};
SplitCheck check_non_splitting(const Classifier& c, const LimitTrace& trace, double tol = kDefaultOracleTol);

enum class SaturationMode { trajectory, exhaustive };

struct SaturationCheck {
  bool ok = false;
  double worst_margin = 0.0;
  Locus locus;  // where the worst margin (or the first violation) occurred
};

/// trajectory: checks the sign quantities along the realized z sequence only.
/// exhaustive: layer 1 at mu, every layer t >= 2 at all 2^d(t-1) corners;
/// throws when a width exceeds kMaxCornerWidth.
SaturationCheck check_sync_saturating(const Model& m, double r, const Vector& mu, double tol = kDefaultOracleTol,
                                      SaturationMode mode = SaturationMode::trajectory);
inline constexpr Index kMaxCornerWidth = 20;

Prediction predict_class(const Model& m, const Classifier& c, double r, const Vector& mu,
                         double tol = kDefaultOracleTol);

/// sum_plus model plus classifier that behave like the base for n <= N and
/// output class 1 for n > N.
struct ThresholdGadget {
  Model model;
  Classifier classifier;
};

/// Reserves embedding component 0 in every layer t >= 1: layer 1 sets it to 1,
/// layer 2's readout turns it into +1 iff n > N (-1 otherwise), later layers
/// copy it, and the widened classifier gets one extra hidden unit that is
/// exactly zero at -1 and dominates the logit at +1.
ThresholdGadget threshold_gadget(const Model& base, const Classifier& base_classifier, std::size_t threshold);

/// Smallest n in 1, 2, 4, ... (up to max_n) for which every layer of a sum
/// model on K_n with constant features mu equals limit_sum(m, 1, mu) exactly,
/// evaluated from the complete-graph closed form.
std::optional<std::size_t> complete_graph_saturation_size(const Model& m, const Vector& mu, std::size_t max_n);

/// Smallest n in 2, 4, 8, ... (up to max_n) at which every layer-1
/// preactivation mean on G(n, r) lies past the saturation threshold on the side
/// of z_1 by at least z_score standard deviations (exact first two moments).
std::optional<std::size_t> er_saturation_size(const Model& m, const FeatureDistribution& dist, double r,
                                              double z_score, std::size_t max_n);

}  // namespace zol
