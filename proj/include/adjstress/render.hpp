#pragma once

#include <adjstress/graph.hpp>
#include <adjstress/layout.hpp>
#include <adjstress/records.hpp>

#include <string>

namespace adjstress {

struct SvgStyle {
  double width_px = 800.0;
  /// Node radius and stroke width as fractions of the larger bbox side.
  double node_radius = 0.006;
  double edge_width = 0.002;
  std::string node_fill = "#1f5fa8";
  std::string edge_stroke = "#555555";
};

namespace detail {

inline std::string svg_num(double v) { return format_double(v, 7); }

} // namespace detail

/// Node-link drawing: edges as <line>, nodes as <circle>, viewBox fitted to
/// the coordinate bounding box plus a 5% margin.
inline std::string render_layout_svg(const Layout& x, const Graph& g, const SvgStyle& style = {}) {
  if (x.size() != g.size())
    throw Error("layout does not match the graph");
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = geometry::planar(x, i);
    if (i == 0) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  double extent = std::max(max_x - min_x, max_y - min_y);
  if (!(extent > 0.0))
    extent = 1.0;
  const double margin = 0.05 * extent;
  const double vb_x = min_x - margin, vb_y = min_y - margin;
  const double vb_w = (max_x - min_x) + 2 * margin, vb_h = (max_y - min_y) + 2 * margin;
  const double height_px = style.width_px * vb_h / vb_w;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(style.width_px) +
       "\" height=\"" + detail::svg_num(height_px) + "\" viewBox=\"" + detail::svg_num(vb_x) + ' ' +
       detail::svg_num(vb_y) + ' ' + detail::svg_num(vb_w) + ' ' + detail::svg_num(vb_h) + "\">\n";
  s += "<g class=\"edges\" stroke=\"" + style.edge_stroke + "\" stroke-width=\"" +
       detail::svg_num(style.edge_width * extent) + "\">\n";
  for (const Edge& e : g.edges()) {
    const auto a = geometry::planar(x, e.first);
    const auto b = geometry::planar(x, e.second);
    s += "<line x1=\"" + detail::svg_num(a.x) + "\" y1=\"" + detail::svg_num(a.y) + "\" x2=\"" +
         detail::svg_num(b.x) + "\" y2=\"" + detail::svg_num(b.y) + "\"/>\n";
  }
  s += "</g>\n<g class=\"nodes\" fill=\"" + style.node_fill + "\">\n";
  const std::string radius = detail::svg_num(style.node_radius * extent);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto p = geometry::planar(x, i);
    s += "<circle cx=\"" + detail::svg_num(p.x) + "\" cy=\"" + detail::svg_num(p.y) + "\" r=\"" +
         radius + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

/// One box-and-whisker glyph per condition, left to right in the given
/// order, on a shared vertical axis. Each glyph is a <g class="box">.
inline std::string render_boxplot_svg(const std::vector<ConditionStats>& stats,
                                      std::size_t metric, const std::string& title = {}) {
  if (metric >= kMetricNames.size())
    throw Error("metric index out of range");
  const double width = 80.0 + 60.0 * static_cast<double>(std::max<std::size_t>(stats.size(), 1));
  const double height = 320.0;
  const double left = 60.0, top = 30.0, bottom = 270.0;

  double lo = 0.0, hi = 1.0;
  if (!stats.empty()) {
    lo = stats.front().metrics[metric].min;
    hi = stats.front().metrics[metric].max;
    for (const ConditionStats& s : stats) {
      lo = std::min(lo, s.metrics[metric].min);
      hi = std::max(hi, s.metrics[metric].max);
    }
  }
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  auto y_of = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };
  using detail::svg_num;

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(width) + "\" height=\"" +
       svg_num(height) + "\" viewBox=\"0 0 " + svg_num(width) + ' ' + svg_num(height) + "\">\n";
  s += "<text x=\"" + svg_num(width / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" +
       (title.empty() ? std::string(kMetricNames[metric]) : title) + "</text>\n";
  s += "<g class=\"axis\" stroke=\"#000\" font-size=\"10\">\n";
  s += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(top) + "\" x2=\"" + svg_num(left) +
       "\" y2=\"" + svg_num(bottom) + "\"/>\n";
  s += "<line x1=\"" + svg_num(left) + "\" y1=\"" + svg_num(bottom) + "\" x2=\"" +
       svg_num(width - 20) + "\" y2=\"" + svg_num(bottom) + "\"/>\n";
  s += "<text x=\"" + svg_num(left - 4) + "\" y=\"" + svg_num(top + 4) +
       "\" text-anchor=\"end\" stroke=\"none\">" + format_double(hi, 4) + "</text>\n";
  s += "<text x=\"" + svg_num(left - 4) + "\" y=\"" + svg_num(bottom) +
       "\" text-anchor=\"end\" stroke=\"none\">" + format_double(lo, 4) + "</text>\n";
  s += "</g>\n";

  for (std::size_t c = 0; c < stats.size(); ++c) {
    const BoxStats& b = stats[c].metrics[metric];
    const double cx = left + 40.0 + 60.0 * static_cast<double>(c);
    const double half = 15.0;
    const std::string label = format_double(stats[c].condition.param, kRecordDigits);
    s += "<g class=\"box\" data-param=\"" + label + "\" stroke=\"#222\" fill=\"#9ecae1\">\n";
    s += "<line x1=\"" + svg_num(cx) + "\" y1=\"" + svg_num(y_of(b.min)) + "\" x2=\"" + svg_num(cx) +
         "\" y2=\"" + svg_num(y_of(b.q1)) + "\"/>\n";
    s += "<line x1=\"" + svg_num(cx) + "\" y1=\"" + svg_num(y_of(b.q3)) + "\" x2=\"" + svg_num(cx) +
         "\" y2=\"" + svg_num(y_of(b.max)) + "\"/>\n";
    s += "<rect x=\"" + svg_num(cx - half) + "\" y=\"" + svg_num(y_of(b.q3)) + "\" width=\"" +
         svg_num(2 * half) + "\" height=\"" + svg_num(y_of(b.q1) - y_of(b.q3)) + "\"/>\n";
    s += "<line x1=\"" + svg_num(cx - half) + "\" y1=\"" + svg_num(y_of(b.median)) + "\" x2=\"" +
         svg_num(cx + half) + "\" y2=\"" + svg_num(y_of(b.median)) + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + svg_num(cx) + "\" y=\"" + svg_num(bottom + 16) +
         "\" text-anchor=\"middle\" font-size=\"10\" stroke=\"none\" fill=\"#000\">" + label +
         "</text>\n";
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

} // namespace adjstress
