#include "zol/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zol/config.hpp"
#include "zol/harness.hpp"
#include "zol/model_io.hpp"
#include "zol/report.hpp"

namespace zol {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string model;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  double r = 0.5;
  std::optional<double> mean;
  std::size_t n = 0;
  std::size_t model_id = 0;
  std::size_t sample = 0;
  bool sparse_log = false;
  std::optional<std::size_t> ba_m;
  bool linear = false;
};

Config load_with_overrides(const Options& o) {
  Config cfg = load_config(o.config);
  if (o.seed) cfg.spec.master_seed = *o.seed;
  return cfg;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const Config cfg = load_with_overrides(o);
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir / "models", ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

  const CurveSet curves = run_sweep(cfg.spec, SweepOptions{o.threads});
  emit_csv(curves, (dir / cfg.csv_name).string());
  emit_svg(curves, (dir / cfg.svg_name).string(), cfg.axes);
  for (std::size_t id = 0; id < cfg.spec.num_models; ++id) {
    const Model m = make_model(cfg.spec, id);
    const Classifier c = make_classifier(cfg.spec, id);
    write_text_file((dir / "models" / ("model_" + std::to_string(id) + ".json")).string(), dump(model_to_json(m, &c)));
  }

  std::size_t converged = 0;
  for (const Curve& curve : curves.curves) converged += curve.verdict != Convergence::undetermined;
  out << "wrote " << (dir / cfg.csv_name).string() << " and " << (dir / cfg.svg_name).string() << "; " << converged
      << "/" << curves.curves.size() << " curves converged\n";
  return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const Json doc = read_json_file(o.model);
  const Model m = model_from_json(doc);
  const auto c = classifier_from_json(doc);
  if (!c) throw Error(o.model + ": model document has no 'classifier'");
  const Vector mu = Vector::Constant(m.dims.front(), o.mean.value_or(0.5));
  out << dump(prediction_to_json(predict_class(m, *c, o.r, mu)));
  return kExitOk;
}

LimitTrace limits_for(const ExperimentSpec& spec, const Model& m) {
  const Vector mu = spec.features.mean_vector();
  switch (m.arch) {
    case Architecture::gcn:
      return limit_gcn(m, mu);
    case Architecture::mean:
    case Architecture::mean_plus:
      return limit_mean(m, mu);
    case Architecture::sum:
    case Architecture::sum_plus: {
      const auto r = spec.graph.fixed_r();
      if (!r) throw Error("diag: sum models need an Erdos-Renyi graph with fixed r");
      return limit_sum(m, *r, mu, spec.tol);
    }
    case Architecture::gat:
      break;
  }
  throw Error("diag: no limit oracle for gat");
}

int cmd_diag(const Options& o, std::ostream& out) {
  const Config cfg = load_with_overrides(o);
  const ExperimentSpec& spec = cfg.spec;
  if (o.n < 1) throw Error("diag: --n must be >= 1");
  if (o.model_id >= spec.num_models) throw Error("diag: --model-id out of range");
  const Model m = make_model(spec, o.model_id);
  const Classifier c = make_classifier(spec, o.model_id);
  const LimitTrace limits = limits_for(spec, m);
  const Instance inst = sample_instance(spec, o.n, o.sample);
  const DeviationReport report = measure_deviation(m, &c, inst.graph, inst.features, limits);

  Json doc;
  doc["model_id"] = o.model_id;
  doc["n"] = o.n;
  doc["sample"] = o.sample;
  doc["limits"] = limit_trace_to_json(limits);
  doc["max_deviation"] = report.max_deviation;
  if (!report.exact_fraction.empty()) doc["exact_fraction"] = report.exact_fraction;
  if (report.bit) doc["class"] = *report.bit;
  out << dump(doc);
  return kExitOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  ExperimentSpec spec;
  const int sources = !o.config.empty() + o.sparse_log + o.ba_m.has_value();
  if (sources > 1) throw Error("gen: give at most one of --config, --sparse-log, --ba");
  if (!o.config.empty()) {
    spec = load_config(o.config).spec;
  } else if (o.sparse_log) {
    spec.graph = GraphPolicy::er(EdgeProbPolicy::sparse_log());
  } else if (o.ba_m) {
    spec.graph = GraphPolicy::ba(*o.ba_m);
  } else {
    spec.graph = GraphPolicy::er(EdgeProbPolicy::fixed(o.r));
  }
  if (o.seed) spec.master_seed = *o.seed;
  const Graph g = sample_graph(spec.graph, o.n, derive_rng(spec.master_seed, {kGraphStream, o.n, o.sample}));

  std::ostringstream text;
  for (const auto& [u, v] : g.edge_list()) text << u << ' ' << v << '\n';
  if (o.out.empty()) {
    out << text.str();
  } else {
    write_text_file(o.out, text.str());
  }
  return kExitOk;
}

int cmd_plot(const Options& o, std::ostream& out) {
  const CurveSet curves = read_csv(o.csv);
  emit_svg(curves, o.out, o.linear ? Axes::linear : Axes::log_x);
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-one law simulator for graph neural networks", "zol"};
  app.require_subcommand(1);
  Options o;

  auto* sweep = app.add_subcommand("sweep", "Run a size sweep and write curves.csv, curves.svg and models/");
  sweep->add_option("--config", o.config, "Config file (JSON)")->required();
  sweep->add_option("--out", o.out, "Output directory")->required();
  sweep->add_option("--seed", o.seed, "Override master_seed");
  sweep->add_option("--threads", o.threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);

  auto* predict = app.add_subcommand("predict", "Oracle prediction for a serialized model");
  predict->add_option("--model", o.model, "Model file (JSON, with classifier)")->required();
  predict->add_option("--r", o.r, "Edge probability")->check(CLI::Range(0.0, 1.0));
  predict->add_option("--mean", o.mean, "Feature mean per component (default 0.5)");

  auto* diag = app.add_subcommand("diag", "Per-layer deviation from the limit on one sampled instance");
  diag->add_option("--config", o.config, "Config file (JSON)")->required();
  diag->add_option("--n", o.n, "Graph size")->required();
  diag->add_option("--model-id", o.model_id, "Model index");
  diag->add_option("--sample", o.sample, "Sample index");
  diag->add_option("--seed", o.seed, "Override master_seed");

  auto* gen = app.add_subcommand("gen", "Emit one sampled graph as an edge list");
  gen->add_option("--n", o.n, "Graph size")->required();
  gen->add_option("--config", o.config, "Take the graph law from a config");
  gen->add_option("--r", o.r, "Erdos-Renyi edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--sparse-log", o.sparse_log, "Erdos-Renyi with r = ln(n)/n");
  gen->add_option("--ba", o.ba_m, "Barabasi-Albert with m attachments");
  gen->add_option("--sample", o.sample, "Sample index");
  gen->add_option("--seed", o.seed, "Override master_seed");
  gen->add_option("--out", o.out, "Output file (default stdout)");

  auto* plot = app.add_subcommand("plot", "Render an SVG from a curves CSV");
  plot->add_option("--csv", o.csv, "Input CSV")->required();
  plot->add_option("--out", o.out, "Output SVG")->required();
  plot->add_flag("--linear", o.linear, "Linear x axis (default log)");

  if (args.size() > 1 && !args[1].starts_with("-") && !app.get_subcommand_no_throw(args[1])) {
    err << "zol: unknown subcommand '" << args[1] << "'\n\n" << app.help();
    return kExitUsage;
  }

  std::vector<std::string> rev;
  for (std::size_t i = args.size(); i > 1; --i) rev.push_back(args[i - 1]);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "zol: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    if (diag->parsed()) return cmd_diag(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
    return cmd_plot(o, out);
  } catch (const std::exception& e) {
    err << "zol: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_command(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace zol
