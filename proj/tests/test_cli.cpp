#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zol/cli.hpp"
#include "zol/config.hpp"
#include "zol/graph.hpp"
#include "zol/model_io.hpp"
#include "zol/report.hpp"

using namespace zol;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "zol");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("zol_cli_" + std::to_string(std::rand()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const char* kConfig = R"({"arch": "sum_plus", "dims": [3, 4, 2], "sizes": [5, 20, 60],
                          "samples_per_size": 4, "num_models": 3, "master_seed": 5})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == kExitUsage);
    const Result bogus = run({"bogus"});
    CHECK(bogus.code == kExitUsage);
    CHECK(bogus.err.find("bogus") != std::string::npos);
    CHECK(run({"sweep", "--config"}).code == kExitUsage);
    CHECK(run({"sweep", "--config", "x.json", "--out", "o", "--frobnicate"}).code == kExitUsage);
    CHECK(run({"predict"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("runtime failures exit with 1") {
    TempDir dir;
    const Result missing = run({"sweep", "--config", dir / "nope.json", "--out", dir / "o"});
    CHECK(missing.code == kExitFailure);
    CHECK(missing.err.find("nope.json") != std::string::npos);
    write(dir / "bad.json", R"({"archh": "gcn"})");
    const Result bad = run({"sweep", "--config", dir / "bad.json", "--out", dir / "o"});
    CHECK(bad.code == kExitFailure);
    CHECK(bad.err.find("archh") != std::string::npos);
  }

  TEST_CASE("sweep writes csv, svg and models, deterministically") {
    TempDir dir;
    write(dir / "cfg.json", kConfig);
    REQUIRE(run({"sweep", "--config", dir / "cfg.json", "--out", dir / "a"}).code == kExitOk);
    REQUIRE(run({"sweep", "--config", dir / "cfg.json", "--out", dir / "b", "--threads", "4"}).code == kExitOk);
    CHECK(fs::exists(dir.path / "a" / "curves.svg"));
    CHECK(fs::exists(dir.path / "a" / "models" / "model_2.json"));
    const std::string csv = slurp(dir.path / "a" / "curves.csv");
    CHECK(csv.rfind(kCsvHeader, 0) == 0);
    CHECK(csv == slurp(dir.path / "b" / "curves.csv"));

    REQUIRE(run({"sweep", "--config", dir / "cfg.json", "--out", dir / "c", "--seed", "6"}).code == kExitOk);
    CHECK(csv != slurp(dir.path / "c" / "curves.csv"));
  }

  TEST_CASE("plot regenerates the sweep svg from the csv") {
    TempDir dir;
    write(dir / "cfg.json", kConfig);
    REQUIRE(run({"sweep", "--config", dir / "cfg.json", "--out", dir / "a"}).code == kExitOk);
    REQUIRE(run({"plot", "--csv", (dir.path / "a" / "curves.csv").string(), "--out", dir / "p.svg"}).code == kExitOk);
    CHECK(slurp(dir.path / "p.svg") == slurp(dir.path / "a" / "curves.svg"));
    REQUIRE(run({"plot", "--csv", (dir.path / "a" / "curves.csv").string(), "--out", dir / "l.svg", "--linear"}).code ==
            kExitOk);
    CHECK(slurp(dir.path / "l.svg") != slurp(dir.path / "p.svg"));
  }

  TEST_CASE("predict prints the oracle prediction for a saved model") {
    TempDir dir;
    write(dir / "cfg.json", kConfig);
    REQUIRE(run({"sweep", "--config", dir / "cfg.json", "--out", dir / "a"}).code == kExitOk);
    const std::string model = (dir.path / "a" / "models" / "model_0.json").string();
    const Result r = run({"predict", "--model", model, "--r", "0.5"});
    REQUIRE(r.code == kExitOk);
    const Json doc = Json::parse(r.out);
    CHECK(doc.contains("class"));
    CHECK(doc.contains("reason"));
    CHECK(doc["trace"]["kind"] == "z_sequence");

    const CurveSet curves = read_csv((dir.path / "a" / "curves.csv").string());
    const Json& cls = doc["class"];
    const auto pred = curves.curves[0].prediction.cls;
    CHECK((cls.is_string() ? !pred.has_value() : pred == cls.get<int>()));

    Json no_classifier = read_json_file(model);
    no_classifier.erase("classifier");
    write(dir / "bare.json", dump(no_classifier));
    CHECK(run({"predict", "--model", dir / "bare.json"}).code == kExitFailure);
  }

  TEST_CASE("diag reports per-layer deviations") {
    TempDir dir;
    write(dir / "cfg.json", kConfig);
    const Result r = run({"diag", "--config", dir / "cfg.json", "--n", "50", "--model-id", "1"});
    REQUIRE(r.code == kExitOk);
    const Json doc = Json::parse(r.out);
    CHECK(doc["max_deviation"].size() == 2);
    CHECK(doc["exact_fraction"].size() == 2);
    CHECK(run({"diag", "--config", dir / "cfg.json", "--n", "50", "--model-id", "3"}).code == kExitFailure);
  }

  TEST_CASE("gen emits a sorted edge list") {
    const Result r = run({"gen", "--n", "30", "--r", "0.3", "--seed", "4"});
    REQUIRE(r.code == kExitOk);
    std::istringstream in(r.out);
    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId u, v;
    while (in >> u >> v) {
      CHECK(u < v);
      if (!edges.empty()) CHECK(edges.back() < std::pair{u, v});
      edges.emplace_back(u, v);
    }
    CHECK(!edges.empty());
    CHECK_NOTHROW(Graph::from_edges(30, edges).validate());
    CHECK(run({"gen", "--n", "30", "--r", "0.3", "--seed", "4"}).out == r.out);

    const Result ba = run({"gen", "--n", "12", "--ba", "2"});
    REQUIRE(ba.code == kExitOk);
    CHECK(std::count(ba.out.begin(), ba.out.end(), '\n') == 20);
    CHECK(run({"gen", "--n", "12", "--ba", "2", "--sparse-log"}).code == kExitFailure);
    CHECK(run({"gen", "--n", "1", "--sparse-log"}).code == kExitFailure);
  }
}
