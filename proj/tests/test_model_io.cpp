#include <doctest.h>

#include <fstream>
#include <sstream>

#include "zol/model_io.hpp"
#include "zol/rng.hpp"

using namespace zol;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kGolden = std::string(ZOL_TEST_DATA_DIR) + "/golden_model.json";

}  // namespace

TEST_SUITE("model_io") {
  TEST_CASE("golden model document parses to the expected values") {
    const Json doc = read_json_file(kGolden);
    const Model m = model_from_json(doc);
    CHECK(m.arch == Architecture::sum_plus);
    CHECK(m.dims == std::vector<Index>{2, 1});
    CHECK(m.sigma == Nonlinearity::clipped_relu(2.5));
    CHECK(m.pooling == Pooling::max);
    REQUIRE(m.layers.size() == 1);
    CHECK((*m.layers[0].W_s)(0, 1) == -0.25);
    CHECK(m.layers[0].W_n(0, 1) == 0.125);
    CHECK((*m.layers[0].W_r)(0, 0) == -0.75);
    CHECK(m.layers[0].b(0) == 0.1);
    const auto c = classifier_from_json(doc);
    REQUIRE(c.has_value());
    CHECK(c->W1(1, 0) == -1.5);
    CHECK(c->b1(1) == 0.3);
    CHECK(c->W2(1) == -0.5);
    CHECK(c->b2 == -0.2);
  }

  TEST_CASE("serialization reproduces the golden file byte for byte") {
    const Json doc = read_json_file(kGolden);
    const Model m = model_from_json(doc);
    const Classifier c = *classifier_from_json(doc);
    CHECK(dump(model_to_json(m, &c)) == slurp(kGolden));
  }

  TEST_CASE("random models round-trip exactly") {
    for (Architecture arch : {Architecture::gcn, Architecture::mean, Architecture::mean_plus, Architecture::sum,
                              Architecture::sum_plus, Architecture::gat}) {
      const Model m = init_model(arch, {3, 4, 2}, Nonlinearity::tanh(), Pooling::sum, -1, 1, derive_rng(1, {0}));
      const Classifier c = init_classifier(2, 3, -1, 1, derive_rng(1, {1}));
      const Json doc = Json::parse(dump(model_to_json(m, &c)));
      CHECK(model_from_json(doc) == m);
      const Classifier back = *classifier_from_json(doc);
      CHECK(back.W1 == c.W1);
      CHECK(back.W2 == c.W2);
      CHECK(back.b2 == c.b2);
    }
  }

  TEST_CASE("malformed documents are rejected with the offending path") {
    Json doc = read_json_file(kGolden);
    doc["layers"][0]["W_x"] = 1;
    CHECK_THROWS_WITH_AS(model_from_json(doc), doctest::Contains("layers[0].W_x"), Error);

    doc = read_json_file(kGolden);
    doc["layers"][0]["W_n"] = Json::array({Json::array({1.0}), Json::array({1.0, 2.0})});
    CHECK_THROWS_AS(model_from_json(doc), Error);

    doc = read_json_file(kGolden);
    doc.erase("dims");
    CHECK_THROWS_WITH_AS(model_from_json(doc), doctest::Contains("dims"), Error);

    doc = read_json_file(kGolden);
    doc["layers"][0].erase("W_s");
    CHECK_THROWS_AS(model_from_json(doc), Error);

    CHECK_THROWS_WITH_AS(read_json_file("/nonexistent/model.json"), doctest::Contains("/nonexistent/model.json"), Error);
  }

  TEST_CASE("prediction serialization") {
    Prediction p;
    p.reason = "splitting";
    CHECK(prediction_to_json(p)["class"] == "undetermined");
    p.cls = 1;
    p.margin = 0.25;
    p.reason = "ok";
    const Json j = prediction_to_json(p);
    CHECK(j["class"] == 1);
    CHECK(j["margin"] == 0.25);
  }
}
