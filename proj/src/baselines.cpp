#include "terragp/baselines.hpp"

namespace terragp {

namespace {

// Follows one precomputed plan to the goal.
NavRun execute_once(PlannerKind kind, const TerrainGrid& grid, const NavConfig& config, CellId start,
                    CellId goal, CostMap planning_map) {
  if (!grid.shape().contains(start) || !grid.shape().contains(goal))
    throw std::out_of_range("start or goal outside the grid");
  const CostMap truth = truth_costmap(grid, config);
  const Path path = plan(planning_map, start, goal);

  NavRun run;
  run.planner = kind;
  run.config = config;
  run.start = start;
  run.goal = goal;
  run.trajectory = path.cells;
  run.step_measurement.assign(path.cells.size(), std::nullopt);
  run.cumulative_energy.reserve(path.cells.size());
  run.cumulative_energy.push_back(0.0);
  for (std::size_t i = 1; i < path.cells.size(); ++i) {
    const auto d = adjacency_distance(grid.shape(), path.cells[i - 1], path.cells[i], config.connectivity);
    run.executed_energy += truth.transition_cost(path.cells[i - 1], path.cells[i], *d);
    run.cumulative_energy.push_back(run.executed_energy);
  }
  run.reached = true;
  if (config.record_snapshots) run.snapshots.push_back(Snapshot{std::move(planning_map), {}});
  return run;
}

}  // namespace

NavRun run_shortest_distance(const TerrainGrid& grid, const NavConfig& config, CellId start, CellId goal) {
  return execute_once(PlannerKind::ShortestDistance, grid, config, start, goal,
                      CostMap::uniform(grid.shape(), config.connectivity, 1.0));
}

NavRun run_optimal(const TerrainGrid& grid, const NavConfig& config, CellId start, CellId goal) {
  return execute_once(PlannerKind::Optimal, grid, config, start, goal, truth_costmap(grid, config));
}

NavRun run_local_gp(const TerrainGrid& grid, const TerrainClassParams& shared, const NavConfig& config,
                    CellId start, CellId goal) {
  return navigate_with_model(grid, GpEnergyModel::distance_only(shared, config.gp_noise_std, config.jitter),
                             config, start, goal, PlannerKind::LocalGp);
}

TerrainClassParams default_local_gp_params(std::span<const TerrainClassParams> class_table,
                                           double admissible_floor) {
  if (class_table.empty()) throw std::invalid_argument("class table is empty");
  TerrainClassParams shared;
  shared.class_id = 0;
  shared.name = "distance-only";
  shared.prior_mean = admissible_floor;
  shared.signal_std = 0.0;
  shared.length_scale = 0.0;
  for (const auto& c : class_table) {
    shared.signal_std += c.signal_std;
    shared.length_scale += c.length_scale;
  }
  shared.signal_std /= static_cast<double>(class_table.size());
  shared.length_scale /= static_cast<double>(class_table.size());
  return shared;
}

NavRun run_planner(PlannerKind kind, const Environment& env, const NavConfig& config, CellId start,
                   CellId goal) {
  switch (kind) {
    case PlannerKind::Proposed:
      return navigate(env.grid, env.classes, config, start, goal);
    case PlannerKind::ShortestDistance:
      return run_shortest_distance(env.grid, config, start, goal);
    case PlannerKind::LocalGp:
      return run_local_gp(env.grid, default_local_gp_params(env.classes, config.admissible_floor), config,
                          start, goal);
    case PlannerKind::Optimal:
      return run_optimal(env.grid, config, start, goal);
  }
  throw std::invalid_argument("unknown planner kind");
}

}  // namespace terragp
