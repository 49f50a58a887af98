#include "terragp/terrain_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace terragp {

using nlohmann::json;

Connectivity connectivity_from_int(int value) {
  if (value == 4) return Connectivity::Four;
  if (value == 8) return Connectivity::Eight;
  throw std::invalid_argument("connectivity must be 4 or 8, got " + std::to_string(value));
}

std::vector<Neighbor> neighbors(const GridShape& shape, CellId cell, Connectivity connectivity) {
  std::vector<Neighbor> out;
  const int row = shape.row_of(cell);
  const int col = shape.col_of(cell);
  const double diag = shape.cell_size * std::sqrt(2.0);
  // Visiting offsets in row-major order keeps the result sorted by index.
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const bool diagonal = dr != 0 && dc != 0;
      if (diagonal && connectivity == Connectivity::Four) continue;
      if (!shape.contains(row + dr, col + dc)) continue;
      out.push_back({shape.cell_at(row + dr, col + dc), diagonal ? diag : shape.cell_size});
    }
  }
  return out;
}

std::vector<Neighbor> neighbors(const TerrainGrid& grid, CellId cell, Connectivity connectivity) {
  return neighbors(grid.shape(), cell, connectivity);
}

std::optional<double> adjacency_distance(const GridShape& shape, CellId a, CellId b,
                                         Connectivity connectivity) {
  if (!shape.contains(a) || !shape.contains(b)) return std::nullopt;
  const int dr = std::abs(shape.row_of(a) - shape.row_of(b));
  const int dc = std::abs(shape.col_of(a) - shape.col_of(b));
  if (dr > 1 || dc > 1 || dr + dc == 0) return std::nullopt;
  if (dr + dc == 1) return shape.cell_size;
  if (connectivity == Connectivity::Four) return std::nullopt;
  return shape.cell_size * std::sqrt(2.0);
}

double gravity_correction(double robot_weight, double slope_angle, double distance) {
  return robot_weight * std::sin(slope_angle) * distance;
}

void validate(const TerrainClassParams& p) {
  const std::string where = "class " + std::to_string(p.class_id) + ": ";
  if (!(p.signal_std >= 0.0) || !std::isfinite(p.signal_std))
    throw EnvironmentError(where + "sigma_f must be >= 0");
  if (!(p.length_scale > 0.0) || !std::isfinite(p.length_scale))
    throw EnvironmentError(where + "sigma_d must be > 0");
  if (!(p.prior_mean > 0.0) || !std::isfinite(p.prior_mean))
    throw EnvironmentError(where + "prior_mean must be > 0");
}

TerrainGrid::TerrainGrid(GridShape shape, int class_count, std::vector<int> class_of,
                         std::vector<double> energy_true, std::optional<std::vector<double>> slope)
    : shape_(shape),
      class_count_(class_count),
      class_of_(std::move(class_of)),
      energy_true_(std::move(energy_true)),
      slope_(std::move(slope)) {
  if (shape_.width <= 0 || shape_.height <= 0)
    throw EnvironmentError("grid width and height must be positive");
  if (!(shape_.cell_size > 0.0) || !std::isfinite(shape_.cell_size))
    throw EnvironmentError("cell_size must be positive");
  if (class_count_ <= 0) throw EnvironmentError("class count must be positive");
  const auto n = static_cast<std::size_t>(shape_.cell_count());
  if (class_of_.size() != n)
    throw EnvironmentError("class_grid has " + std::to_string(class_of_.size()) +
                           " entries, expected " + std::to_string(n));
  if (energy_true_.size() != n)
    throw EnvironmentError("energy_grid has " + std::to_string(energy_true_.size()) +
                           " entries, expected " + std::to_string(n));
  if (slope_ && slope_->size() != n)
    throw EnvironmentError("slope_grid has " + std::to_string(slope_->size()) +
                           " entries, expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (class_of_[i] < 0 || class_of_[i] >= class_count_)
      throw EnvironmentError("cell " + std::to_string(i) + ": class id " +
                             std::to_string(class_of_[i]) + " out of range [0, " +
                             std::to_string(class_count_) + ")");
    if (!(energy_true_[i] > 0.0) || !std::isfinite(energy_true_[i]))
      throw EnvironmentError("cell " + std::to_string(i) + ": energy must be positive and finite");
    if (slope_ && !std::isfinite((*slope_)[i]))
      throw EnvironmentError("cell " + std::to_string(i) + ": slope must be finite");
  }
}

const TerrainClassParams& Environment::class_params(int class_id) const {
  if (class_id < 0 || class_id >= static_cast<int>(classes.size()))
    throw EnvironmentError("unknown class id " + std::to_string(class_id));
  return classes[static_cast<std::size_t>(class_id)];
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw EnvironmentError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw EnvironmentError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Environment parse_environment(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw EnvironmentError(std::string("environment parse error: ") + e.what());
  }
  if (!doc.is_object()) throw EnvironmentError("environment root must be an object");

  GridShape shape{field<int>(doc, "width"), field<int>(doc, "height"),
                  field<double>(doc, "cell_size")};

  std::vector<TerrainClassParams> classes;
  const auto class_list = field<std::vector<json>>(doc, "classes");
  for (const auto& c : class_list) {
    TerrainClassParams p;
    p.class_id = field<int>(c, "id");
    p.name = field<std::string>(c, "name");
    p.prior_mean = field<double>(c, "prior_mean");
    p.signal_std = field<double>(c, "sigma_f");
    p.length_scale = field<double>(c, "sigma_d");
    validate(p);
    classes.push_back(std::move(p));
  }
  if (classes.empty()) throw EnvironmentError("class table is empty");
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.class_id < b.class_id; });
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].class_id != static_cast<int>(i))
      throw EnvironmentError("class ids must be exactly 0..K-1 without duplicates");
  }

  std::optional<std::vector<double>> slope;
  if (doc.contains("slope_grid") && !doc.at("slope_grid").is_null())
    slope = field<std::vector<double>>(doc, "slope_grid");

  TerrainGrid grid(shape, static_cast<int>(classes.size()), field<std::vector<int>>(doc, "class_grid"),
                   field<std::vector<double>>(doc, "energy_grid"), std::move(slope));
  return Environment{std::move(grid), std::move(classes)};
}

std::string serialize_environment(const Environment& env) {
  // nlohmann emits the shortest representation that round-trips each double.
  json doc = json::object();
  const auto& g = env.grid;
  doc["width"] = g.width();
  doc["height"] = g.height();
  doc["cell_size"] = g.cell_size();
  json classes = json::array();
  for (const auto& c : env.classes) {
    classes.push_back({{"id", c.class_id},
                       {"name", c.name},
                       {"prior_mean", c.prior_mean},
                       {"sigma_f", c.signal_std},
                       {"sigma_d", c.length_scale}});
  }
  doc["classes"] = std::move(classes);
  doc["class_grid"] = g.class_grid();
  doc["energy_grid"] = g.energy_grid();
  if (g.slope_grid()) doc["slope_grid"] = *g.slope_grid();
  return doc.dump() + "\n";
}

Environment load_environment(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentError("cannot open environment file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_environment(buf.str());
}

void save_environment(const Environment& env, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EnvironmentError("cannot write environment file " + path.string());
  out << serialize_environment(env);
}

}  // namespace terragp
