#pragma once

#include <string>
#include <vector>

#include "terragp/terrain_map.hpp"

namespace terragp {

struct TrajectoryOverlay {
  std::string label;
  std::vector<CellId> cells;
};

struct HeatmapOptions {
  std::string title;
  std::string value_label = "J/m";
  int pixels_per_cell = 8;
};

/// SVG heatmap of one value per cell (row 0 drawn at the top) with a linear
/// color ramp, a legend, and each trajectory as a polyline in its own color
/// with start and goal markers. Output depends only on the inputs.
/// Throws std::invalid_argument when values or a trajectory do not fit the shape.
std::string render_heatmap_svg(const GridShape& shape, const std::vector<double>& values,
                               const std::vector<TrajectoryOverlay>& trajectories,
                               const HeatmapOptions& options = {});

}  // namespace terragp
