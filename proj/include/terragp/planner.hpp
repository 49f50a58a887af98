#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "terragp/terrain_map.hpp"

namespace terragp {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy of an edge between two adjacent cells: mean unit-distance energy
/// of the endpoints times their center distance.
inline double edge_cost(double e1, double e2, double distance) { return 0.5 * (e1 + e2) * distance; }

/// Per-cell unit-distance energy estimate over a grid, the planner's input.
///
/// Slope is optional. When present, moving into a cell additionally costs
/// robot_weight * sin(slope of that cell) * distance.
class CostMap {
 public:
  static constexpr double kDefaultCostFloor = 1e-3;

  /// Values below cost_floor are raised to it.
  CostMap(GridShape shape, Connectivity connectivity, std::vector<double> energy,
          double cost_floor = kDefaultCostFloor);

  static CostMap uniform(GridShape shape, Connectivity connectivity, double value);
  /// Ground-truth map of the grid, including gravity when the grid has slope.
  static CostMap ground_truth(const TerrainGrid& grid, Connectivity connectivity,
                              double robot_weight);

  CostMap with_slope(std::vector<double> slope, double robot_weight) const;

  const GridShape& shape() const { return shape_; }
  Connectivity connectivity() const { return connectivity_; }
  double cost_floor() const { return cost_floor_; }
  double energy(CellId c) const { return energy_[c.index]; }
  const std::vector<double>& energies() const { return energy_; }
  bool has_slope() const { return slope_.has_value(); }
  const std::optional<std::vector<double>>& slopes() const { return slope_; }
  double robot_weight() const { return robot_weight_; }

  /// Directed cost of moving from `from` into the adjacent cell `to`.
  double transition_cost(CellId from, CellId to, double distance) const;

  bool operator==(const CostMap&) const = default;

 private:
  GridShape shape_;
  Connectivity connectivity_;
  std::vector<double> energy_;
  double cost_floor_;
  std::optional<std::vector<double>> slope_;
  double robot_weight_ = 0.0;
};

struct Path {
  std::vector<CellId> cells;
  double total_cost = 0.0;  // J, on the map the path was planned with
};

enum class SearchMode {
  Dijkstra,
  /// A* with the cheapest per-meter cell cost times octile distance as heuristic.
  AStar,
};

/// Minimum-energy path. Equal-priority frontier entries are expanded in
/// ascending cell index order, so results are reproducible.
Path plan(const CostMap& costmap, CellId start, CellId goal, SearchMode mode = SearchMode::Dijkstra);

/// Sum of transition costs along `cells` on the given map. Throws
/// PlanningError when consecutive cells are not adjacent.
double path_cost_on(const CostMap& costmap, std::span<const CellId> cells);

}  // namespace terragp
