#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rotmcf/geometry.hpp"

namespace rotmcf {

/// Named overlay polyline (reference catenoid, barrier reaper, ...).
struct SvgOverlay {
  std::string label;
  std::vector<Vec2> points;
};

struct SvgOptions {
  double width = 900.0;
  double height = 600.0;
  double margin = 40.0;
  bool axis = true;  // draw the axis of rotation y = 0
  std::vector<SvgOverlay> overlays;
};

/// Deterministic SVG document: one polyline element per curve, one per
/// overlay, plus the axis line. Throws std::invalid_argument on empty input.
std::string render_svg(const std::vector<ProfileCurve>& curves, const SvgOptions& opts = {});

}  // namespace rotmcf
