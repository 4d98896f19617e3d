#include "rotmcf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rotmcf {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::vector<ProfileCurve>& curves, const SvgOptions& opts) {
  if (curves.empty() && opts.overlays.empty())
    throw std::invalid_argument("render_svg: empty input");

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = 0.0, y_hi = -std::numeric_limits<double>::infinity();
  auto widen = [&](const std::vector<Vec2>& pts) {
    for (const auto& p : pts) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
    }
  };
  for (const auto& c : curves) widen(c.points);
  for (const auto& o : opts.overlays) widen(o.points);
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  const double sx = (opts.width - 2.0 * opts.margin) / (x_hi - x_lo);
  const double sy = (opts.height - 2.0 * opts.margin) / (y_hi - y_lo);
  const double scale = std::min(sx, sy);
  auto px = [&](double x) { return opts.margin + (x - x_lo) * scale; };
  auto py = [&](double y) { return opts.height - opts.margin - (y - y_lo) * scale; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(opts.width)
      << "\" height=\"" << fmt(opts.height) << "\" viewBox=\"0 0 " << fmt(opts.width)
      << ' ' << fmt(opts.height) << "\">\n";
  if (opts.axis) {
    out << "  <line class=\"axis\" x1=\"" << fmt(px(x_lo)) << "\" y1=\"" << fmt(py(0.0))
        << "\" x2=\"" << fmt(px(x_hi)) << "\" y2=\"" << fmt(py(0.0))
        << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
  }
  auto polyline = [&](const std::vector<Vec2>& pts, const std::string& cls,
                      const std::string& color) {
    out << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color
        << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) out << ' ';
      out << fmt(px(pts[i].x)) << ',' << fmt(py(pts[i].y));
    }
    out << "\"/>\n";
  };
  for (std::size_t k = 0; k < curves.size(); ++k) {
    // shade from light to dark along the sequence
    int tone = curves.size() > 1
                   ? 40 + static_cast<int>(180.0 * k / (curves.size() - 1))
                   : 40;
    char color[8];
    std::snprintf(color, sizeof color, "#%02x%02x%02x", 32, tone, 180 - tone / 2);
    polyline(curves[k].points, "profile", color);
  }
  for (const auto& o : opts.overlays) polyline(o.points, o.label, "#cc3333");
  out << "</svg>\n";
  return out.str();
}

}  // namespace rotmcf
