#include "terragp/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace terragp {

namespace {

struct Rgb {
  int r, g, b;
};

// Dark blue -> teal -> yellow, sampled evenly and linearly interpolated.
constexpr std::array<Rgb, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

constexpr std::array<const char*, 8> kLineColors{"#e41a1c", "#ffffff", "#ff7f00", "#f781bf",
                                                  "#a65628", "#377eb8", "#000000", "#984ea3"};

std::string hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * (kRamp.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), kRamp.size() - 2);
  const double f = pos - static_cast<double>(i);
  const auto mix = [f](int a, int b) { return static_cast<int>(std::lround(a + f * (b - a))); };
  return {mix(kRamp[i].r, kRamp[i + 1].r), mix(kRamp[i].g, kRamp[i + 1].g), mix(kRamp[i].b, kRamp[i + 1].b)};
}

// Fixed-precision text keeps the output byte-stable across platforms.
std::string num(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
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

}  // namespace

std::string render_heatmap_svg(const GridShape& shape, const std::vector<double>& values,
                               const std::vector<TrajectoryOverlay>& trajectories,
                               const HeatmapOptions& options) {
  if (values.size() != static_cast<std::size_t>(shape.cell_count()))
    throw std::invalid_argument("heatmap has " + std::to_string(values.size()) + " values for " +
                                std::to_string(shape.cell_count()) + " cells");
  for (const auto& t : trajectories)
    for (const CellId c : t.cells)
      if (!shape.contains(c))
        throw std::invalid_argument("trajectory '" + t.label + "' leaves the grid at cell " +
                                    std::to_string(c.index));
  if (options.pixels_per_cell < 1) throw std::invalid_argument("pixels per cell must be >= 1");

  const int px = options.pixels_per_cell;
  const int map_w = shape.width * px;
  const int map_h = shape.height * px;
  const int top = options.title.empty() ? 10 : 30;
  const int legend_x = 10 + map_w + 20;
  const int total_w = legend_x + 110;
  const int total_h = top + std::max(map_h, 220) + 10 + 18 * static_cast<int>(trajectories.size());

  double lo = values.empty() ? 0.0 : values.front();
  double hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  const auto scaled = [&](double v) { return span > 0.0 ? (v - lo) / span : 0.5; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\"" << total_h
      << "\" viewBox=\"0 0 " << total_w << ' ' << total_h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!options.title.empty()) out << "<text x=\"10\" y=\"20\" font-size=\"14\">" << escape(options.title) << "</text>\n";

  out << "<g transform=\"translate(10," << top << ")\" shape-rendering=\"crispEdges\">\n";
  for (int r = 0; r < shape.height; ++r)
    for (int c = 0; c < shape.width; ++c) {
      const double v = values[static_cast<std::size_t>(shape.cell_at(r, c).index)];
      out << "<rect x=\"" << c * px << "\" y=\"" << r * px << "\" width=\"" << px << "\" height=\"" << px
          << "\" fill=\"" << hex(ramp(scaled(v))) << "\"/>\n";
    }
  out << "</g>\n";

  // Trajectories through cell centers, in pixel units.
  out << "<g transform=\"translate(10," << top << ")\" fill=\"none\" stroke-width=\"" << num(std::max(1.5, px / 4.0))
      << "\" stroke-linejoin=\"round\">\n";
  const auto cx = [&](CellId c) { return (shape.col_of(c) + 0.5) * px; };
  const auto cy = [&](CellId c) { return (shape.row_of(c) + 0.5) * px; };
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& t = trajectories[i];
    const char* color = kLineColors[i % kLineColors.size()];
    if (t.cells.empty()) continue;
    out << "<polyline stroke=\"" << color << "\" points=\"";
    for (std::size_t j = 0; j < t.cells.size(); ++j)
      out << (j ? " " : "") << num(cx(t.cells[j])) << ',' << num(cy(t.cells[j]));
    out << "\"/>\n";
    const double marker = std::max(2.5, px * 0.6);
    out << "<circle cx=\"" << num(cx(t.cells.front())) << "\" cy=\"" << num(cy(t.cells.front())) << "\" r=\""
        << num(marker) << "\" fill=\"#00ff00\" stroke=\"#000000\"/>\n";
    const double gx = cx(t.cells.back());
    const double gy = cy(t.cells.back());
    out << "<rect x=\"" << num(gx - marker) << "\" y=\"" << num(gy - marker) << "\" width=\"" << num(2 * marker)
        << "\" height=\"" << num(2 * marker) << "\" fill=\"#ff0000\" stroke=\"#000000\"/>\n";
  }
  out << "</g>\n";

  // Legend: vertical ramp, high values on top.
  constexpr int kSteps = 20;
  constexpr int kBarH = 200;
  out << "<g transform=\"translate(" << legend_x << ',' << top << ")\">\n";
  for (int s = 0; s < kSteps; ++s) {
    const double t = 1.0 - (s + 0.5) / kSteps;
    out << "<rect x=\"0\" y=\"" << s * kBarH / kSteps << "\" width=\"16\" height=\"" << kBarH / kSteps
        << "\" fill=\"" << hex(ramp(span > 0.0 ? t : 0.5)) << "\"/>\n";
  }
  out << "<text x=\"22\" y=\"10\">" << num(hi) << "</text>\n";
  out << "<text x=\"22\" y=\"" << kBarH << "\">" << num(lo) << "</text>\n";
  out << "<text x=\"0\" y=\"" << kBarH + 16 << "\">" << escape(options.value_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const int y = top + std::max(map_h, 220) + 14 + 18 * static_cast<int>(i);
    out << "<line x1=\"10\" y1=\"" << y - 4 << "\" x2=\"30\" y2=\"" << y - 4 << "\" stroke=\""
        << kLineColors[i % kLineColors.size()] << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"36\" y=\"" << y << "\">" << escape(trajectories[i].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace terragp
