#include "zol/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "zol/model_io.hpp"

namespace zol {

namespace {

std::string fixed6(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.6f", v);
  return buf.data();
}

std::string compact(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string pred_class_text(const Prediction& p) {
  return p.cls ? std::to_string(*p.cls) : "undetermined";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::size_t to_size(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error("csv line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  }
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("csv line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  }
}

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * mag;
    if (span / step <= 6.0) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) ticks.push_back(t);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double p = std::pow(10.0, std::floor(std::log10(lo))); p <= hi * (1 + 1e-12); p *= 10.0) {
    for (double mult : {1.0, 2.0, 5.0}) {
      const double t = p * mult;
      if (t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12)) ticks.push_back(t);
    }
  }
  return ticks;
}

std::string tick_label(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%g", v);
  return buf.data();
}

}  // namespace

void write_csv(const CurveSet& curves, std::ostream& out) {
  out << kCsvHeader << '\n';
  const std::string arch(to_string(curves.arch));
  for (const Curve& curve : curves.curves) {
    for (const CurvePoint& p : curve.points) {
      out << arch << ',' << curves.layers << ',' << curve.model_id << ',' << p.n << ',' << p.samples << ','
          << fixed6(p.frac_one) << ',' << pred_class_text(curve.prediction) << ','
          << fixed6(curve.prediction.margin) << ',' << to_string(curve.verdict) << '\n';
    }
  }
}

std::string render_csv(const CurveSet& curves) {
  std::ostringstream out;
  write_csv(curves, out);
  return out.str();
}

void emit_csv(const CurveSet& curves, const std::string& path) { write_text_file(path, render_csv(curves)); }

CurveSet parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error("csv: missing or unexpected header");
  CurveSet out;
  std::map<std::size_t, Curve> by_model;
  bool first = true;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error("csv line " + std::to_string(line_no) + ": expected 9 fields");
    const Architecture arch = architecture_from_string(f[0]);
    const std::size_t layers = to_size(f[1], line_no);
    if (first) {
      out.arch = arch;
      out.layers = layers;
      first = false;
    } else if (arch != out.arch || layers != out.layers) {
      throw Error("csv line " + std::to_string(line_no) + ": mixed architectures or depths");
    }
    const std::size_t id = to_size(f[2], line_no);
    Curve& curve = by_model[id];
    curve.model_id = id;
    CurvePoint p;
    p.n = to_size(f[3], line_no);
    p.samples = to_size(f[4], line_no);
    p.frac_one = to_double(f[5], line_no);
    p.ones = static_cast<std::size_t>(std::llround(p.frac_one * static_cast<double>(p.samples)));
    curve.points.push_back(p);
    if (f[6] == "undetermined") {
      curve.prediction.cls.reset();
    } else {
      curve.prediction.cls = static_cast<int>(to_size(f[6], line_no));
    }
    curve.prediction.margin = to_double(f[7], line_no);
    curve.verdict = convergence_from_string(f[8]);
  }
  for (auto& [id, curve] : by_model) out.curves.push_back(std::move(curve));
  return out;
}

CurveSet read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

std::string render_svg(const CurveSet& curves, Axes axes, const SvgLayout& L) {
  double n_lo = 0.0, n_hi = 0.0;
  bool any = false;
  for (const Curve& c : curves.curves) {
    for (const CurvePoint& p : c.points) {
      const double n = static_cast<double>(p.n);
      n_lo = any ? std::min(n_lo, n) : n;
      n_hi = any ? std::max(n_hi, n) : n;
      any = true;
    }
  }
  if (!any) {
    n_lo = 1.0;
    n_hi = 10.0;
  }
  const bool log_x = axes == Axes::log_x;
  auto coord = [&](double n) { return log_x ? std::log10(std::max(n, 1e-300)) : n; };
  const double c_lo = coord(n_lo);
  const double c_hi = coord(n_hi);
  auto x_of = [&](double n) {
    if (c_hi <= c_lo) return L.left + 0.5 * L.plot_width();
    return L.left + (coord(n) - c_lo) / (c_hi - c_lo) * L.plot_width();
  };
  // Fractions are quantized like the CSV so that a chart replotted from CSV
  // carries the same points.
  auto y_of = [&](double frac) { return L.y_of(std::round(frac * 1e6) / 1e6); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << L.width << "\" height=\"" << L.height
    << "\" viewBox=\"0 0 " << L.width << ' ' << L.height << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << L.width << "\" height=\"" << L.height << "\" fill=\"white\"/>\n";
  const std::string title = std::string(to_string(curves.arch)) + ", " + std::to_string(curves.layers) +
                            (curves.layers == 1 ? " layer" : " layers");
  s << "<text x=\"" << compact(L.left + L.plot_width() / 2) << "\" y=\"" << compact(L.top / 2 + 5)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title) << "</text>\n";

  const double x0 = L.left, x1 = L.left + L.plot_width();
  const double y0 = L.top + L.plot_height(), y1 = L.top;
  s << "<g stroke=\"black\" stroke-width=\"1\">\n";
  s << "<line x1=\"" << compact(x0) << "\" y1=\"" << compact(y0) << "\" x2=\"" << compact(x1) << "\" y2=\""
    << compact(y0) << "\"/>\n";
  s << "<line x1=\"" << compact(x0) << "\" y1=\"" << compact(y0) << "\" x2=\"" << compact(x0) << "\" y2=\""
    << compact(y1) << "\"/>\n";
  s << "</g>\n";

  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double y = L.y_of(f);
    s << "<line x1=\"" << compact(x0 - 4) << "\" y1=\"" << compact(y) << "\" x2=\"" << compact(x0) << "\" y2=\""
      << compact(y) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << compact(x0 - 7) << "\" y=\"" << compact(y + 4) << "\" text-anchor=\"end\">"
      << tick_label(f) << "</text>\n";
  }
  const auto ticks = log_x ? log_ticks(n_lo, n_hi) : linear_ticks(n_lo, n_hi);
  for (double t : ticks) {
    const double x = x_of(t);
    s << "<line x1=\"" << compact(x) << "\" y1=\"" << compact(y0) << "\" x2=\"" << compact(x) << "\" y2=\""
      << compact(y0 + 4) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << compact(x) << "\" y=\"" << compact(y0 + 17) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  s << "<text x=\"" << compact(L.left + L.plot_width() / 2) << "\" y=\"" << compact(L.height - 12)
    << "\" text-anchor=\"middle\">number of nodes n" << (log_x ? " (log scale)" : "") << "</text>\n";
  s << "<text x=\"16\" y=\"" << compact(L.top + L.plot_height() / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << compact(L.top + L.plot_height() / 2) << ")\">fraction classified 1</text>\n";
  s << "</g>\n";

  for (std::size_t i = 0; i < curves.curves.size(); ++i) {
    const Curve& c = curves.curves[i];
    const char* color = kPalette[i % kPalette.size()];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      if (k) s << ' ';
      s << compact(x_of(static_cast<double>(c.points[k].n))) << ',' << compact(y_of(c.points[k].frac_one));
    }
    s << "\"/>\n";
  }

  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < curves.curves.size(); ++i) {
    const double y = L.top + 10 + 16 * static_cast<double>(i);
    const double x = L.width - L.right + 16;
    s << "<line x1=\"" << compact(x) << "\" y1=\"" << compact(y) << "\" x2=\"" << compact(x + 18) << "\" y2=\""
      << compact(y) << "\" stroke=\"" << kPalette[i % kPalette.size()] << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << compact(x + 24) << "\" y=\"" << compact(y + 4) << "\">model "
      << curves.curves[i].model_id << "</text>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

void emit_svg(const CurveSet& curves, const std::string& path, Axes axes) {
  write_text_file(path, render_svg(curves, axes));
}

}  // namespace zol
