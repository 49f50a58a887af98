#include "terragp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

namespace terragp {

CostMap::CostMap(GridShape shape, Connectivity connectivity, std::vector<double> energy,
                 double cost_floor)
    : shape_(shape), connectivity_(connectivity), energy_(std::move(energy)), cost_floor_(cost_floor) {
  if (!(cost_floor_ > 0.0)) throw std::invalid_argument("cost_floor must be > 0");
  if (energy_.size() != static_cast<std::size_t>(shape_.cell_count()))
    throw std::invalid_argument("cost map size does not match grid");
  for (std::size_t i = 0; i < energy_.size(); ++i) {
    if (std::isnan(energy_[i]))
      throw std::invalid_argument("cost map cell " + std::to_string(i) + " is NaN");
    energy_[i] = std::max(energy_[i], cost_floor_);
  }
}

CostMap CostMap::uniform(GridShape shape, Connectivity connectivity, double value) {
  return CostMap(shape, connectivity,
                 std::vector<double>(static_cast<std::size_t>(shape.cell_count()), value));
}

CostMap CostMap::ground_truth(const TerrainGrid& grid, Connectivity connectivity, double robot_weight) {
  CostMap map(grid.shape(), connectivity, grid.energy_grid());
  if (grid.has_slope()) return map.with_slope(*grid.slope_grid(), robot_weight);
  return map;
}

CostMap CostMap::with_slope(std::vector<double> slope, double robot_weight) const {
  if (slope.size() != energy_.size()) throw std::invalid_argument("slope size does not match grid");
  CostMap out = *this;
  out.slope_ = std::move(slope);
  out.robot_weight_ = robot_weight;
  return out;
}

double CostMap::transition_cost(CellId from, CellId to, double distance) const {
  double cost = edge_cost(energy_[from.index], energy_[to.index], distance);
  if (slope_) cost += gravity_correction(robot_weight_, (*slope_)[to.index], distance);
  return cost;
}

namespace {

struct Entry {
  double priority;
  std::int32_t index;
  bool operator>(const Entry& o) const {
    return priority != o.priority ? priority > o.priority : index > o.index;
  }
};

/// Admissible per-meter lower bound on any transition cost.
double cheapest_per_meter(const CostMap& map) {
  double lo = *std::min_element(map.energies().begin(), map.energies().end());
  if (map.slopes()) {
    double min_sin = 0.0;
    for (double s : *map.slopes()) min_sin = std::min(min_sin, std::sin(s));
    lo += map.robot_weight() * min_sin;
  }
  return std::max(0.0, lo);
}

}  // namespace

Path plan(const CostMap& costmap, CellId start, CellId goal, SearchMode mode) {
  const GridShape& shape = costmap.shape();
  if (!shape.contains(start) || !shape.contains(goal))
    throw PlanningError("start or goal outside the grid");
  if (start == goal) return Path{{start}, 0.0};

  const auto n = static_cast<std::size_t>(shape.cell_count());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<char> closed(n, 0);

  const double per_meter = mode == SearchMode::AStar ? cheapest_per_meter(costmap) : 0.0;
  const int goal_row = shape.row_of(goal);
  const int goal_col = shape.col_of(goal);
  const auto heuristic = [&](CellId c) {
    if (per_meter == 0.0) return 0.0;
    const double dr = std::abs(shape.row_of(c) - goal_row);
    const double dc = std::abs(shape.col_of(c) - goal_col);
    const double octile = costmap.connectivity() == Connectivity::Eight
                              ? (std::max(dr, dc) - std::min(dr, dc)) + std::sqrt(2.0) * std::min(dr, dc)
                              : dr + dc;
    return per_meter * octile * shape.cell_size;
  };

  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[static_cast<std::size_t>(start.index)] = 0.0;
  open.push({heuristic(start), start.index});
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const auto u = static_cast<std::size_t>(top.index);
    if (closed[u]) continue;
    closed[u] = 1;
    if (top.index == goal.index) break;
    for (const Neighbor& nb : neighbors(shape, CellId{top.index}, costmap.connectivity())) {
      const auto v = static_cast<std::size_t>(nb.cell.index);
      if (closed[v]) continue;
      // Downhill transitions may be negative; the search never goes below zero.
      const double w = std::max(0.0, costmap.transition_cost(CellId{top.index}, nb.cell, nb.distance));
      const double candidate = dist[u] + w;
      if (candidate < dist[v]) {
        dist[v] = candidate;
        parent[v] = top.index;
        open.push({candidate + heuristic(nb.cell), nb.cell.index});
      }
    }
  }

  if (!closed[static_cast<std::size_t>(goal.index)])
    throw PlanningError("goal " + std::to_string(goal.index) + " unreachable from " +
                        std::to_string(start.index));

  Path path;
  for (std::int32_t c = goal.index; c != -1; c = parent[static_cast<std::size_t>(c)])
    path.cells.push_back(CellId{c});
  std::reverse(path.cells.begin(), path.cells.end());
  path.total_cost = path_cost_on(costmap, path.cells);
  return path;
}

double path_cost_on(const CostMap& costmap, std::span<const CellId> cells) {
  double total = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto d = adjacency_distance(costmap.shape(), cells[i - 1], cells[i], costmap.connectivity());
    if (!d)
      throw PlanningError("cells " + std::to_string(cells[i - 1].index) + " and " +
                          std::to_string(cells[i].index) + " are not adjacent");
    total += costmap.transition_cost(cells[i - 1], cells[i], *d);
  }
  return total;
}

}  // namespace terragp
