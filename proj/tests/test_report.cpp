#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "zol/report.hpp"

using namespace zol;
namespace pt = boost::property_tree;

namespace {

CurveSet two_point_set(std::size_t models = 1) {
  CurveSet c;
  c.arch = Architecture::gcn;
  c.layers = 2;
  for (std::size_t id = 0; id < models; ++id) {
    Curve curve;
    curve.model_id = id;
    curve.prediction.cls = 1;
    curve.prediction.margin = 0.125;
    curve.prediction.reason = "ok";
    curve.points = {{10, 0, 4, 0.0}, {100, 4, 4, 1.0}};
    curve.verdict = Convergence::one;
    c.curves.push_back(curve);
  }
  return c;
}

pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

void collect(const pt::ptree& node, const std::string& name, std::vector<const pt::ptree*>& out) {
  for (const auto& [key, child] : node) {
    if (key == name) out.push_back(&child);
    collect(child, name, out);
  }
}

std::vector<std::pair<double, double>> points_of(const pt::ptree& polyline) {
  std::istringstream in(polyline.get<std::string>("<xmlattr>.points"));
  std::vector<std::pair<double, double>> out;
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return out;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("csv layout") {
    CurveSet empty;
    CHECK(render_csv(empty) == std::string(kCsvHeader) + "\n");
    CurveSet one = two_point_set();
    one.curves[0].points.pop_back();
    one.curves[0].points.push_back({100, 1, 4, 0.25});
    const std::string text = render_csv(one);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.find("gcn,2,0,10,4,0.000000,1,0.125000,one\n") != std::string::npos);
    CHECK(text.find("gcn,2,0,100,4,0.250000,1,0.125000,one\n") != std::string::npos);

    CurveSet und = two_point_set();
    und.curves[0].prediction.cls.reset();
    und.curves[0].verdict = Convergence::undetermined;
    CHECK(render_csv(und).find(",undetermined,0.125000,undetermined\n") != std::string::npos);
  }

  TEST_CASE("csv parses back") {
    const CurveSet c = two_point_set(3);
    const CurveSet back = parse_csv(render_csv(c));
    CHECK(render_csv(back) == render_csv(c));
    CHECK(back.curves.size() == 3);
    CHECK(back.curves[2].points[1].ones == 4);
    CHECK_THROWS_AS(parse_csv("bad,header\n"), Error);
  }

  TEST_CASE("emit_csv reports the destination on failure") {
    CHECK_THROWS_WITH_AS(emit_csv(two_point_set(), "/nonexistent/dir/curves.csv"),
                         doctest::Contains("/nonexistent/dir/curves.csv"), Error);
  }

  TEST_CASE("svg is well-formed with one polyline per model") {
    for (Axes axes : {Axes::linear, Axes::log_x}) {
      const pt::ptree tree = parse_xml(render_svg(two_point_set(1), axes));
      std::vector<const pt::ptree*> lines;
      collect(tree, "polyline", lines);
      CHECK(lines.size() == 1);
      const pt::ptree multi = parse_xml(render_svg(two_point_set(4), axes));
      lines.clear();
      collect(multi, "polyline", lines);
      CHECK(lines.size() == 4);
      std::set<std::string> strokes;
      for (const pt::ptree* p : lines) strokes.insert(p->get<std::string>("<xmlattr>.stroke"));
      CHECK(strokes.size() == 4);
    }
  }

  TEST_CASE("svg maps 0 to the bottom axis and 1 to the top") {
    const SvgLayout layout;
    const pt::ptree tree = parse_xml(render_svg(two_point_set(1), Axes::log_x, layout));
    const pt::ptree& svg = tree.get_child("svg");
    CHECK(svg.get<std::string>("<xmlattr>.viewBox") == "0 0 760 460");
    std::vector<const pt::ptree*> lines;
    collect(tree, "polyline", lines);
    const auto pts = points_of(*lines[0]);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].second == doctest::Approx(layout.height - layout.bottom));
    CHECK(pts[1].second == doctest::Approx(layout.top));
    CHECK(pts[0].first == doctest::Approx(layout.left));
    CHECK(pts[1].first == doctest::Approx(layout.width - layout.right));
    for (const auto& [x, y] : pts) {
      CHECK((x >= 0 && x <= layout.width));
      CHECK((y >= 0 && y <= layout.height));
    }
  }

  TEST_CASE("svg legend names every model") {
    const std::string svg = render_svg(two_point_set(3), Axes::linear);
    for (int id = 0; id < 3; ++id) CHECK(svg.find("model " + std::to_string(id)) != std::string::npos);
  }

  TEST_CASE("files round-trip through disk") {
    const auto dir = std::filesystem::temp_directory_path() / "zol_report_test";
    std::filesystem::create_directories(dir);
    const CurveSet c = two_point_set(2);
    emit_csv(c, (dir / "c.csv").string());
    emit_svg(c, (dir / "c.svg").string(), Axes::log_x);
    CHECK(render_csv(read_csv((dir / "c.csv").string())) == render_csv(c));
    CHECK(std::filesystem::file_size(dir / "c.svg") > 0);
    std::filesystem::remove_all(dir);
  }
}
