#include "zol/nonlinearity.hpp"

namespace zol {

std::string_view to_string(Nonlinearity::Kind kind) {
  switch (kind) {
    case Nonlinearity::Kind::clipped_identity: return "clipped_identity";
    case Nonlinearity::Kind::relu: return "relu";
    case Nonlinearity::Kind::clipped_relu: return "clipped_relu";
    case Nonlinearity::Kind::tanh: return "tanh";
    case Nonlinearity::Kind::sigmoid: return "sigmoid";
    case Nonlinearity::Kind::identity: return "identity";
  }
  return "unknown";
}

Nonlinearity::Kind nonlinearity_kind_from_string(std::string_view name) {
  for (auto kind : {Nonlinearity::Kind::clipped_identity, Nonlinearity::Kind::relu,
                    Nonlinearity::Kind::clipped_relu, Nonlinearity::Kind::tanh,
                    Nonlinearity::Kind::sigmoid, Nonlinearity::Kind::identity}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error("unknown non-linearity '" + std::string(name) + "'");
}

}  // namespace zol
