#pragma once

#include <string>

#include "zol/harness.hpp"
#include "zol/model_io.hpp"
#include "zol/report.hpp"

namespace zol {

/// Sweep configuration document. Only "arch", "dims" and "sizes" (or
/// "size_grid") are required; everything else defaults as listed:
///
///   sigma            "clipped_identity"  (string, or {"kind": ..., "cap": ...})
///   pooling          "mean"
///   weight_range     [-1, 1]
///   classifier       {"hidden": 0 (= d(T)), "range": [-1, 1]}
///   features         {"kind": "uniform01"} | {"kind": "normal", "mean": m, "stddev": s}
///   graph            {"kind": "er", "r": 0.5} | {"kind": "sparse_log"} | {"kind": "ba", "m": 2}
///   samples_per_size 32
///   num_models       10
///   master_seed      0
///   convergence      {"eps": 0.05, "k": 3}
///   tol              1e-9
///   axes             "log_x" | "linear"
///   outputs          {"csv": "curves.csv", "svg": "curves.svg"}
///
/// "size_grid": {"min": a, "max": b, "count": c} expands to log-spaced sizes.
struct Config {
  ExperimentSpec spec;
  Axes axes = Axes::log_x;
  std::string csv_name = "curves.csv";
  std::string svg_name = "curves.svg";

  friend bool operator==(const Config&, const Config&) = default;
};

Config parse_config(const std::string& text);
Config config_from_json(const Json& doc);
/// Canonical form with every field explicit; parse_config(render_config(c)) == c.
Json config_to_json(const Config& cfg);
std::string render_config(const Config& cfg);
Config load_config(const std::string& path);

}  // namespace zol
