#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "zol/types.hpp"

namespace zol {

struct Nonlinearity {
  enum class Kind { clipped_identity, relu, clipped_relu, tanh, sigmoid, identity };

  Kind kind = Kind::clipped_identity;
  double cap = 1.0;  // clipped_relu only

  static Nonlinearity clipped_identity() { return {Kind::clipped_identity, 1.0}; }
  static Nonlinearity relu() { return {Kind::relu, 1.0}; }
  static Nonlinearity clipped_relu(double cap) { return {Kind::clipped_relu, cap}; }
  static Nonlinearity tanh() { return {Kind::tanh, 1.0}; }
  static Nonlinearity sigmoid() { return {Kind::sigmoid, 1.0}; }
  static Nonlinearity identity() { return {Kind::identity, 1.0}; }

  template <typename Scalar>
  Scalar operator()(Scalar x) const {
    switch (kind) {
      case Kind::clipped_identity:
        return x < Scalar(-1) ? Scalar(-1) : (x > Scalar(1) ? Scalar(1) : x);
      case Kind::relu:
        return x > Scalar(0) ? x : Scalar(0);
      case Kind::clipped_relu:
        return x < Scalar(0) ? Scalar(0) : (x > Scalar(cap) ? Scalar(cap) : x);
      case Kind::tanh:
        return std::tanh(x);
      case Kind::sigmoid:
        return Scalar(1) / (Scalar(1) + std::exp(-x));
      case Kind::identity:
        return x;
    }
    return x;
  }

  /// Constant below some x_-inf and above some x_inf.
  bool eventually_constant() const {
    return kind == Kind::clipped_identity || kind == Kind::clipped_relu;
  }

  /// (sigma_-inf, sigma_inf) for eventually constant kinds.
  std::optional<std::pair<double, double>> saturation_values() const {
    if (kind == Kind::clipped_identity) return std::pair{-1.0, 1.0};
    if (kind == Kind::clipped_relu) return std::pair{0.0, cap};
    return std::nullopt;
  }

  /// Inputs strictly beyond these are mapped to the saturation values.
  std::optional<std::pair<double, double>> saturation_thresholds() const {
    if (kind == Kind::clipped_identity) return std::pair{-1.0, 1.0};
    if (kind == Kind::clipped_relu) return std::pair{0.0, cap};
    return std::nullopt;
  }

  double lipschitz_constant() const { return 1.0; }

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;
};

/// Elementwise application; works on any Eigen expression.
template <typename Derived>
MatrixX<typename Derived::Scalar> apply(const Nonlinearity& sigma, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([sigma](Scalar v) { return sigma(v); });
}

/// In-place elementwise application.
template <typename Derived>
void apply_inplace(const Nonlinearity& sigma, Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  x = x.unaryExpr([sigma](Scalar v) { return sigma(v); });
}

std::string_view to_string(Nonlinearity::Kind kind);
Nonlinearity::Kind nonlinearity_kind_from_string(std::string_view name);

}  // namespace zol
