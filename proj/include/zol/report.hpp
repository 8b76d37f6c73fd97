#pragma once

#include <iosfwd>
#include <string>

#include "zol/harness.hpp"

namespace zol {

inline constexpr const char* kCsvHeader = "arch,layers,model_id,n,samples,frac_one,pred_class,pred_margin,verdict";

/// One row per (model, size), models then sizes ascending, fixed 6-digit floats.
void write_csv(const CurveSet& curves, std::ostream& out);
std::string render_csv(const CurveSet& curves);
/// Throws zol::Error mentioning `path` on I/O failure.
void emit_csv(const CurveSet& curves, const std::string& path);

/// Inverse of write_csv (prediction reasons and traces are not stored).
CurveSet parse_csv(const std::string& text);
CurveSet read_csv(const std::string& path);

enum class Axes { linear, log_x };

/// Plot geometry in SVG user units; the viewBox is [0, width] x [0, height].
struct SvgLayout {
  double width = 760.0;
  double height = 460.0;
  double left = 64.0;
  double right = 170.0;  // room for the legend
  double top = 36.0;
  double bottom = 56.0;

  double plot_width() const { return width - left - right; }
  double plot_height() const { return height - top - bottom; }
  double y_of(double frac) const { return top + (1.0 - frac) * plot_height(); }
};

/// Standalone SVG line chart: one polyline per model (x = n, y = frac_one).
std::string render_svg(const CurveSet& curves, Axes axes, const SvgLayout& layout = {});
void emit_svg(const CurveSet& curves, const std::string& path, Axes axes);

}  // namespace zol
