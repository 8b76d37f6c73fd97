#include "zol/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace zol {

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) throw Error(path + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw Error("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
  }
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw Error("missing key '" + (path.empty() ? std::string(key) : path + "." + key) + "'");
  return obj.at(key);
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw Error(path + ": expected a number");
  return v.get<double>();
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_array() || doc.empty()) throw Error(path + ": expected a non-empty array of rows");
  const std::size_t cols = doc.front().is_array() ? doc.front().size() : 0;
  if (cols == 0) throw Error(path + ": rows must be non-empty arrays");
  Matrix m(static_cast<Index>(doc.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& row = doc[i];
    if (!row.is_array() || row.size() != cols) throw Error(path + ": ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = number(row[j], path);
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& doc, const std::string& path) {
  if (!doc.is_array() || doc.empty()) throw Error(path + ": expected a non-empty array");
  Vector v(static_cast<Index>(doc.size()));
  for (std::size_t i = 0; i < doc.size(); ++i) v[static_cast<Index>(i)] = number(doc[i], path);
  return v;
}

Json classifier_to_json(const Classifier& c) {
  return Json{{"W1", matrix_to_json(c.W1)}, {"b1", vector_to_json(c.b1)}, {"W2", vector_to_json(c.W2)}, {"b2", c.b2}};
}

Classifier classifier_object_from_json(const Json& doc) {
  reject_unknown(doc, {"W1", "b1", "W2", "b2"}, "classifier");
  Classifier c;
  c.W1 = matrix_from_json(require(doc, "W1", "classifier"), "classifier.W1");
  c.b1 = vector_from_json(require(doc, "b1", "classifier"), "classifier.b1");
  c.W2 = vector_from_json(require(doc, "W2", "classifier"), "classifier.W2");
  c.b2 = number(require(doc, "b2", "classifier"), "classifier.b2");
  c.check_shapes();
  return c;
}

Json model_to_json(const Model& m, const Classifier* classifier) {
  Json doc;
  doc["arch"] = std::string(to_string(m.arch));
  Json dims = Json::array();
  for (Index d : m.dims) dims.push_back(d);
  doc["dims"] = dims;
  Json sigma{{"kind", std::string(to_string(m.sigma.kind))}};
  if (m.sigma.kind == Nonlinearity::Kind::clipped_relu) sigma["cap"] = m.sigma.cap;
  doc["sigma"] = sigma;
  doc["pooling"] = std::string(to_string(m.pooling));
  Json layers = Json::array();
  for (const Layer& layer : m.layers) {
    Json l;
    if (layer.W_s) l["W_s"] = matrix_to_json(*layer.W_s);
    l["W_n"] = matrix_to_json(layer.W_n);
    if (layer.W_r) l["W_r"] = matrix_to_json(*layer.W_r);
    l["b"] = vector_to_json(layer.b);
    if (layer.a) {
      l["a"] = vector_to_json(*layer.a);
      l["slope"] = layer.slope;
    }
    layers.push_back(std::move(l));
  }
  doc["layers"] = layers;
  if (classifier) doc["classifier"] = classifier_to_json(*classifier);
  return doc;
}

Model model_from_json(const Json& doc) {
  reject_unknown(doc, {"arch", "dims", "sigma", "pooling", "layers", "classifier"}, "");
  Model m;
  const Json& arch = require(doc, "arch", "");
  if (!arch.is_string()) throw Error("arch: expected a string");
  m.arch = architecture_from_string(arch.get<std::string>());

  const Json& dims = require(doc, "dims", "");
  if (!dims.is_array() || dims.empty()) throw Error("dims: expected a non-empty array");
  for (const Json& d : dims) {
    if (!d.is_number_integer()) throw Error("dims: expected integers");
    m.dims.push_back(d.get<Index>());
  }

  const Json& sigma = require(doc, "sigma", "");
  reject_unknown(sigma, {"kind", "cap"}, "sigma");
  const Json& kind = require(sigma, "kind", "sigma");
  if (!kind.is_string()) throw Error("sigma.kind: expected a string");
  m.sigma.kind = nonlinearity_kind_from_string(kind.get<std::string>());
  if (sigma.contains("cap")) m.sigma.cap = number(sigma.at("cap"), "sigma.cap");

  const Json& pooling = require(doc, "pooling", "");
  if (!pooling.is_string()) throw Error("pooling: expected a string");
  m.pooling = pooling_from_string(pooling.get<std::string>());

  const Json& layers = require(doc, "layers", "");
  if (!layers.is_array()) throw Error("layers: expected an array");
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const std::string path = "layers[" + std::to_string(t) + "]";
    const Json& l = layers[t];
    reject_unknown(l, {"W_s", "W_n", "W_r", "b", "a", "slope"}, path);
    Layer layer;
    if (l.contains("W_s")) layer.W_s = matrix_from_json(l.at("W_s"), path + ".W_s");
    layer.W_n = matrix_from_json(require(l, "W_n", path), path + ".W_n");
    if (l.contains("W_r")) layer.W_r = matrix_from_json(l.at("W_r"), path + ".W_r");
    layer.b = vector_from_json(require(l, "b", path), path + ".b");
    if (l.contains("a")) layer.a = vector_from_json(l.at("a"), path + ".a");
    if (l.contains("slope")) layer.slope = number(l.at("slope"), path + ".slope");
    m.layers.push_back(std::move(layer));
  }
  m.validate();
  return m;
}

std::optional<Classifier> classifier_from_json(const Json& doc) {
  if (!doc.contains("classifier")) return std::nullopt;
  return classifier_object_from_json(doc.at("classifier"));
}

Json limit_trace_to_json(const LimitTrace& trace) {
  Json doc;
  doc["kind"] = std::string(to_string(trace.kind));
  Json vectors = Json::array();
  for (const Vector& v : trace.vectors) vectors.push_back(vector_to_json(v));
  doc["vectors"] = vectors;
  Json margins = Json::array();
  for (double mg : trace.margins) margins.push_back(mg);
  doc["margins"] = margins;
  doc["verdict"] = std::string(to_string(trace.verdict));
  if (trace.locus) doc["locus"] = Json{{"layer", trace.locus->layer}, {"index", trace.locus->index}};
  return doc;
}

Json prediction_to_json(const Prediction& p) {
  Json doc;
  if (p.cls) {
    doc["class"] = *p.cls;
  } else {
    doc["class"] = "undetermined";
  }
  doc["margin"] = p.margin;
  doc["reason"] = p.reason;
  if (p.trace) doc["trace"] = limit_trace_to_json(*p.trace);
  return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return Json::parse(text.str());
  } catch (const Json::parse_error& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace zol
