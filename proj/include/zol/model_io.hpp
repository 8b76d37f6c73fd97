#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "zol/classifier.hpp"
#include "zol/model.hpp"
#include "zol/oracle.hpp"

namespace zol {

using Json = nlohmann::json;

/// Model document:
///
///   {
///     "arch": "gcn" | "mean" | "mean_plus" | "sum" | "sum_plus" | "gat",
///     "dims": [d0, ..., dT],
///     "sigma": {"kind": "clipped_identity" | "relu" | "clipped_relu" | "tanh" | "sigmoid" | "identity",
///               "cap": <number, clipped_relu only>},
///     "pooling": "mean" | "sum" | "max",
///     "layers": [{"W_s"?: M, "W_n": M, "W_r"?: M, "b": V, "a"?: V, "slope"?: s}, ...],
///     "classifier"?: {"W1": M, "b1": V, "W2": V, "b2": s}
///   }
///
/// M is a row-major array of row arrays, V a flat array; numbers are written in
/// shortest round-trip form. Unknown keys are rejected.
Json model_to_json(const Model& m, const Classifier* classifier = nullptr);
Model model_from_json(const Json& doc);
std::optional<Classifier> classifier_from_json(const Json& doc);  // reads the "classifier" key

Json classifier_to_json(const Classifier& c);
Classifier classifier_object_from_json(const Json& doc);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& doc, const std::string& path);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& doc, const std::string& path);

Json limit_trace_to_json(const LimitTrace& trace);
Json prediction_to_json(const Prediction& p);

/// Rendered with two-space indentation and a trailing newline.
std::string dump(const Json& doc);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace zol
