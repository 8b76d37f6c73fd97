#include "zol/config.hpp"

#include <set>

namespace zol {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) throw Error((path.empty() ? std::string("config") : path) + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw Error("unknown key '" + join(path, key) + "'");
  }
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw Error(path + ": expected a number");
  return v.get<double>();
}

std::uint64_t get_uint(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw Error(path + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw Error(path + ": expected a string");
  return v.get<std::string>();
}

std::pair<double, double> get_range(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw Error(path + ": expected [lo, hi]");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

template <typename F>
auto rethrow_with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

Nonlinearity parse_sigma(const Json& v) {
  Nonlinearity sigma;
  if (v.is_string()) {
    sigma.kind = rethrow_with_path("sigma", [&] { return nonlinearity_kind_from_string(v.get<std::string>()); });
    return sigma;
  }
  reject_unknown(v, {"kind", "cap"}, "sigma");
  if (!v.contains("kind")) throw Error("missing key 'sigma.kind'");
  sigma.kind = rethrow_with_path("sigma.kind", [&] { return nonlinearity_kind_from_string(get_string(v.at("kind"), "sigma.kind")); });
  if (v.contains("cap")) sigma.cap = get_number(v.at("cap"), "sigma.cap");
  return sigma;
}

FeatureDistribution parse_features(const Json& v, Index dim) {
  reject_unknown(v, {"kind", "mean", "stddev"}, "features");
  const std::string kind = v.contains("kind") ? get_string(v.at("kind"), "features.kind") : "uniform01";
  if (kind == "uniform01") {
    if (v.contains("mean") || v.contains("stddev")) throw Error("features: mean/stddev only apply to kind 'normal'");
    return FeatureDistribution::uniform01(dim);
  }
  if (kind == "normal") {
    const double mean = v.contains("mean") ? get_number(v.at("mean"), "features.mean") : 0.5;
    const double sd = v.contains("stddev") ? get_number(v.at("stddev"), "features.stddev") : 1.0;
    return FeatureDistribution::normal(dim, mean, sd);
  }
  throw Error("features.kind: unknown kind '" + kind + "'");
}

GraphPolicy parse_graph(const Json& v) {
  reject_unknown(v, {"kind", "r", "m"}, "graph");
  const std::string kind = v.contains("kind") ? get_string(v.at("kind"), "graph.kind") : "er";
  if (kind == "er") {
    if (v.contains("m")) throw Error("graph.m: only applies to kind 'ba'");
    return GraphPolicy::er(EdgeProbPolicy::fixed(v.contains("r") ? get_number(v.at("r"), "graph.r") : 0.5));
  }
  if (kind == "sparse_log") {
    if (v.contains("r") || v.contains("m")) throw Error("graph: sparse_log takes no parameters");
    return GraphPolicy::er(EdgeProbPolicy::sparse_log());
  }
  if (kind == "ba") {
    if (v.contains("r")) throw Error("graph.r: only applies to kind 'er'");
    return GraphPolicy::ba(v.contains("m") ? get_uint(v.at("m"), "graph.m") : 2);
  }
  throw Error("graph.kind: unknown kind '" + kind + "'");
}

}  // namespace

Config config_from_json(const Json& doc) {
  reject_unknown(doc,
                 {"arch", "dims", "sizes", "size_grid", "sigma", "pooling", "weight_range", "classifier", "features",
                  "graph", "samples_per_size", "num_models", "master_seed", "convergence", "tol", "axes", "outputs"},
                 "");
  Config cfg;
  ExperimentSpec& spec = cfg.spec;

  if (!doc.contains("arch")) throw Error("missing key 'arch'");
  spec.arch = rethrow_with_path("arch", [&] { return architecture_from_string(get_string(doc.at("arch"), "arch")); });

  if (!doc.contains("dims")) throw Error("missing key 'dims'");
  const Json& dims = doc.at("dims");
  if (!dims.is_array() || dims.empty()) throw Error("dims: expected a non-empty array of integers");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    spec.dims.push_back(static_cast<Index>(get_uint(dims[i], "dims[" + std::to_string(i) + "]")));
  }

  if (doc.contains("sizes") == doc.contains("size_grid")) throw Error("sizes: give exactly one of 'sizes' or 'size_grid'");
  if (doc.contains("sizes")) {
    const Json& sizes = doc.at("sizes");
    if (!sizes.is_array()) throw Error("sizes: expected an array of integers");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      spec.sizes.push_back(get_uint(sizes[i], "sizes[" + std::to_string(i) + "]"));
    }
  } else {
    const Json& grid = doc.at("size_grid");
    reject_unknown(grid, {"min", "max", "count"}, "size_grid");
    for (const char* key : {"min", "max", "count"}) {
      if (!grid.contains(key)) throw Error(std::string("missing key 'size_grid.") + key + "'");
    }
    spec.sizes = rethrow_with_path("size_grid", [&] {
      return log_spaced_sizes(get_uint(grid.at("min"), "size_grid.min"), get_uint(grid.at("max"), "size_grid.max"),
                              get_uint(grid.at("count"), "size_grid.count"));
    });
  }

  if (doc.contains("sigma")) spec.sigma = parse_sigma(doc.at("sigma"));
  if (doc.contains("pooling")) {
    spec.pooling = rethrow_with_path("pooling", [&] { return pooling_from_string(get_string(doc.at("pooling"), "pooling")); });
  }
  if (doc.contains("weight_range")) std::tie(spec.init_lo, spec.init_hi) = get_range(doc.at("weight_range"), "weight_range");
  if (doc.contains("classifier")) {
    const Json& c = doc.at("classifier");
    reject_unknown(c, {"hidden", "range"}, "classifier");
    if (c.contains("hidden")) spec.classifier.hidden = static_cast<Index>(get_uint(c.at("hidden"), "classifier.hidden"));
    if (c.contains("range")) std::tie(spec.classifier.lo, spec.classifier.hi) = get_range(c.at("range"), "classifier.range");
  }
  spec.features = doc.contains("features") ? parse_features(doc.at("features"), spec.dims.front())
                                           : FeatureDistribution::uniform01(spec.dims.front());
  if (doc.contains("graph")) spec.graph = parse_graph(doc.at("graph"));
  if (doc.contains("samples_per_size")) spec.samples_per_size = get_uint(doc.at("samples_per_size"), "samples_per_size");
  if (doc.contains("num_models")) spec.num_models = get_uint(doc.at("num_models"), "num_models");
  if (doc.contains("master_seed")) spec.master_seed = get_uint(doc.at("master_seed"), "master_seed");
  if (doc.contains("convergence")) {
    const Json& c = doc.at("convergence");
    reject_unknown(c, {"eps", "k"}, "convergence");
    if (c.contains("eps")) spec.eps = get_number(c.at("eps"), "convergence.eps");
    if (c.contains("k")) spec.k = get_uint(c.at("k"), "convergence.k");
  }
  if (doc.contains("tol")) spec.tol = get_number(doc.at("tol"), "tol");
  if (doc.contains("axes")) {
    const std::string axes = get_string(doc.at("axes"), "axes");
    if (axes == "log_x") {
      cfg.axes = Axes::log_x;
    } else if (axes == "linear") {
      cfg.axes = Axes::linear;
    } else {
      throw Error("axes: expected 'log_x' or 'linear'");
    }
  }
  if (doc.contains("outputs")) {
    const Json& o = doc.at("outputs");
    reject_unknown(o, {"csv", "svg"}, "outputs");
    if (o.contains("csv")) cfg.csv_name = get_string(o.at("csv"), "outputs.csv");
    if (o.contains("svg")) cfg.svg_name = get_string(o.at("svg"), "outputs.svg");
  }

  spec.validate();
  return cfg;
}

Config parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

Json config_to_json(const Config& cfg) {
  const ExperimentSpec& spec = cfg.spec;
  Json doc;
  doc["arch"] = std::string(to_string(spec.arch));
  doc["dims"] = spec.dims;
  doc["sizes"] = spec.sizes;
  Json sigma{{"kind", std::string(to_string(spec.sigma.kind))}};
  if (spec.sigma.kind == Nonlinearity::Kind::clipped_relu) sigma["cap"] = spec.sigma.cap;
  doc["sigma"] = sigma;
  doc["pooling"] = std::string(to_string(spec.pooling));
  doc["weight_range"] = {spec.init_lo, spec.init_hi};
  doc["classifier"] = {{"hidden", spec.classifier.hidden}, {"range", {spec.classifier.lo, spec.classifier.hi}}};
  if (spec.features.kind == FeatureDistribution::Kind::uniform01) {
    doc["features"] = {{"kind", "uniform01"}};
  } else {
    doc["features"] = {{"kind", "normal"}, {"mean", spec.features.mean}, {"stddev", spec.features.stddev}};
  }
  if (spec.graph.kind == GraphPolicy::Kind::ba) {
    doc["graph"] = {{"kind", "ba"}, {"m", spec.graph.ba_m}};
  } else if (spec.graph.edge.kind == EdgeProbPolicy::Kind::sparse_log) {
    doc["graph"] = {{"kind", "sparse_log"}};
  } else {
    doc["graph"] = {{"kind", "er"}, {"r", spec.graph.edge.r}};
  }
  doc["samples_per_size"] = spec.samples_per_size;
  doc["num_models"] = spec.num_models;
  doc["master_seed"] = spec.master_seed;
  doc["convergence"] = {{"eps", spec.eps}, {"k", spec.k}};
  doc["tol"] = spec.tol;
  doc["axes"] = cfg.axes == Axes::log_x ? "log_x" : "linear";
  doc["outputs"] = {{"csv", cfg.csv_name}, {"svg", cfg.svg_name}};
  return doc;
}

std::string render_config(const Config& cfg) { return dump(config_to_json(cfg)); }

Config load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace zol
