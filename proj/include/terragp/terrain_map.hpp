#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace terragp {

/// Raised for malformed environment files and grid invariant violations.
class EnvironmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major cell index, origin at the top-left corner.
struct CellId {
  std::int32_t index = 0;

  constexpr auto operator<=>(const CellId&) const = default;
};

enum class Connectivity : int { Four = 4, Eight = 8 };

Connectivity connectivity_from_int(int value);

/// Grid geometry without per-cell payload.
struct GridShape {
  int width = 0;
  int height = 0;
  double cell_size = 1.0;

  std::int32_t cell_count() const { return static_cast<std::int32_t>(width) * height; }
  bool contains(int row, int col) const { return row >= 0 && row < height && col >= 0 && col < width; }
  bool contains(CellId c) const { return c.index >= 0 && c.index < cell_count(); }
  CellId cell_at(int row, int col) const { return CellId{row * width + col}; }
  int row_of(CellId c) const { return c.index / width; }
  int col_of(CellId c) const { return c.index % width; }

  /// Cell center in meters; x grows with column, y with row.
  std::pair<double, double> center(CellId c) const {
    return {(col_of(c) + 0.5) * cell_size, (row_of(c) + 0.5) * cell_size};
  }

  bool operator==(const GridShape&) const = default;
};

struct Neighbor {
  CellId cell;
  double distance = 0.0;  // center to center, meters
};

/// In-bounds adjacent cells sorted by ascending index.
std::vector<Neighbor> neighbors(const GridShape& shape, CellId cell, Connectivity connectivity);

/// Center distance if a and b are adjacent under the connectivity.
std::optional<double> adjacency_distance(const GridShape& shape, CellId a, CellId b,
                                         Connectivity connectivity);

/// Work against gravity for moving `distance` meters up a slope of
/// `slope_angle` radians: weight * sin(angle) * distance. Negative downhill.
double gravity_correction(double robot_weight, double slope_angle, double distance);

struct TerrainClassParams {
  int class_id = 0;
  std::string name;
  double prior_mean = 1.0;    // J/m
  double signal_std = 0.0;    // J/m
  double length_scale = 1.0;  // m

  bool operator==(const TerrainClassParams&) const = default;
};

void validate(const TerrainClassParams& params);

/// Immutable gridded environment: terrain class, ground-truth unit-distance
/// energy (J/m) and optional inclination (rad) per cell.
class TerrainGrid {
 public:
  TerrainGrid(GridShape shape, int class_count, std::vector<int> class_of,
              std::vector<double> energy_true,
              std::optional<std::vector<double>> slope = std::nullopt);

  const GridShape& shape() const { return shape_; }
  int width() const { return shape_.width; }
  int height() const { return shape_.height; }
  double cell_size() const { return shape_.cell_size; }
  std::int32_t cell_count() const { return shape_.cell_count(); }
  int class_count() const { return class_count_; }

  int class_of(CellId c) const { return class_of_[c.index]; }
  double energy_true(CellId c) const { return energy_true_[c.index]; }
  double slope(CellId c) const { return slope_ ? (*slope_)[c.index] : 0.0; }
  bool has_slope() const { return slope_.has_value(); }

  const std::vector<int>& class_grid() const { return class_of_; }
  const std::vector<double>& energy_grid() const { return energy_true_; }
  const std::optional<std::vector<double>>& slope_grid() const { return slope_; }

  bool operator==(const TerrainGrid&) const = default;

 private:
  GridShape shape_;
  int class_count_;
  std::vector<int> class_of_;
  std::vector<double> energy_true_;
  std::optional<std::vector<double>> slope_;
};

std::vector<Neighbor> neighbors(const TerrainGrid& grid, CellId cell, Connectivity connectivity);

/// A grid together with its class table; the unit of environment files.
struct Environment {
  TerrainGrid grid;
  std::vector<TerrainClassParams> classes;  // indexed by class id

  const TerrainClassParams& class_params(int class_id) const;
  bool operator==(const Environment&) const = default;
};

/// Parses the environment JSON document. Throws EnvironmentError.
Environment parse_environment(const std::string& json_text);
std::string serialize_environment(const Environment& env);

Environment load_environment(const std::filesystem::path& path);
void save_environment(const Environment& env, const std::filesystem::path& path);

}  // namespace terragp
