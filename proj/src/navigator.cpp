#include "terragp/navigator.hpp"

#include <algorithm>
#include <cmath>

#include "terragp/rng.hpp"

namespace terragp {

std::string to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Proposed: return "proposed";
    case PlannerKind::ShortestDistance: return "shortest";
    case PlannerKind::LocalGp: return "local";
    case PlannerKind::Optimal: return "optimal";
  }
  return "unknown";
}

PlannerKind planner_kind_from_string(const std::string& name) {
  if (name == "proposed") return PlannerKind::Proposed;
  if (name == "shortest") return PlannerKind::ShortestDistance;
  if (name == "local") return PlannerKind::LocalGp;
  if (name == "optimal") return PlannerKind::Optimal;
  throw std::invalid_argument("unknown planner '" + name + "'");
}

int NavConfig::replan_budget(const GridShape& shape) const {
  if (max_replans > 0) return max_replans;
  return std::max(1, 4 * shape.cell_count() / m);
}

void NavConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(admissible_floor > 0.0)) throw std::invalid_argument("admissible floor must be > 0");
  if (!(fixed_init_value > 0.0)) throw std::invalid_argument("fixed init value must be > 0");
  if (max_replans < 0) throw std::invalid_argument("max_replans must be >= 1");
  if (!(measurement_noise_std >= 0.0) || !(gp_noise_std >= 0.0))
    throw std::invalid_argument("noise std must be >= 0");
  if (!(cost_floor > 0.0)) throw std::invalid_argument("cost floor must be > 0");
  if (cost_floor > init_value())
    throw std::invalid_argument("cost floor must not exceed the initialization value");
}

CostMap truth_costmap(const TerrainGrid& grid, const NavConfig& config) {
  return CostMap::ground_truth(grid, config.connectivity, config.robot_weight);
}

namespace {

CostMap attach_slope(CostMap map, const TerrainGrid& grid, const NavConfig& config) {
  if (grid.has_slope()) return map.with_slope(*grid.slope_grid(), config.robot_weight);
  return map;
}

Snapshot build_estimate(const TerrainGrid& grid, const GpEnergyModel& model,
                        const std::vector<CellId>& cells, const NavConfig& config) {
  std::vector<double> estimate(cells.size(), config.init_value());
  std::vector<double> variance;
  if (!model.measurements().empty()) {
    const Posterior post = model.posterior_by_class_blocks(cells, grid, config.record_snapshots);
    std::vector<char> informed(static_cast<std::size_t>(grid.class_count()), 0);
    for (const auto& m : model.measurements()) informed[static_cast<std::size_t>(m.class_id)] = 1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto cls = static_cast<std::size_t>(grid.class_of(cells[i]));
      if (!model.class_masked() || informed[cls]) estimate[i] = post.mean[i];
    }
    variance = post.variance;
  } else if (config.record_snapshots) {
    variance.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      variance[i] = model.prior_variance(grid.class_of(cells[i]));
  }
  CostMap map(grid.shape(), config.connectivity, std::move(estimate), config.cost_floor);
  return Snapshot{attach_slope(std::move(map), grid, config), std::move(variance)};
}

}  // namespace

CostMap initialize_costmap(const TerrainGrid& grid, std::span<const TerrainClassParams> class_table,
                           const NavConfig& config) {
  if (static_cast<int>(class_table.size()) != grid.class_count())
    throw std::invalid_argument("class table does not cover every class of the grid");
  CostMap map(grid.shape(), config.connectivity,
              std::vector<double>(static_cast<std::size_t>(grid.cell_count()), config.init_value()),
              config.cost_floor);
  return attach_slope(std::move(map), grid, config);
}

NavRun navigate(const TerrainGrid& grid, std::span<const TerrainClassParams> class_table,
                const NavConfig& config, CellId start, CellId goal) {
  if (static_cast<int>(class_table.size()) != grid.class_count())
    throw std::invalid_argument("class table does not cover every class of the grid");
  GpEnergyModel model(std::vector<TerrainClassParams>(class_table.begin(), class_table.end()),
                      config.gp_noise_std, config.jitter);
  return navigate_with_model(grid, std::move(model), config, start, goal, PlannerKind::Proposed);
}

NavRun navigate_with_model(const TerrainGrid& grid, GpEnergyModel model, const NavConfig& config,
                           CellId start, CellId goal, PlannerKind kind) {
  config.validate();
  if (!grid.shape().contains(start) || !grid.shape().contains(goal))
    throw std::out_of_range("start or goal outside the grid");

  NavRun run;
  run.planner = kind;
  run.config = config;
  run.start = start;
  run.goal = goal;
  run.trajectory = {start};
  run.step_measurement = {std::nullopt};
  run.cumulative_energy = {0.0};
  if (start == goal) {
    run.reached = true;
    return run;
  }

  const CostMap truth = truth_costmap(grid, config);
  const std::vector<CellId> cells = all_cells(grid.shape());
  const int budget = config.replan_budget(grid.shape());
  Xoshiro256 rng(config.seed);
  std::vector<char> measured(cells.size(), 0);

  // Measured signal includes gravity work; the stored value has it removed.
  const auto measure = [&](CellId c) {
    const double noise =
        config.measurement_noise_std > 0.0 ? config.measurement_noise_std * rng.normal() : 0.0;
    const double gravity = gravity_correction(config.robot_weight, grid.slope(c), 1.0);
    const double raw = grid.energy_true(c) + gravity + noise;
    measured[static_cast<std::size_t>(c.index)] = 1;
    return make_measurement(grid, c, raw - gravity);
  };

  std::vector<Measurement> batch{measure(start)};
  run.step_measurement[0] = batch.front().energy;
  int fresh = 1;
  CellId current = start;

  for (int plan_index = 0;; ++plan_index) {
    if (plan_index > budget) {
      run.replan_count = plan_index - 1;
      throw NavigationError("replan budget of " + std::to_string(budget) + " exhausted", std::move(run));
    }
    // The first plan uses the initialization only; the start cell's reading
    // joins the first batch.
    Snapshot snap = [&] {
      try {
        return build_estimate(grid, model, cells, config);
      } catch (const GpSolverError& e) {
        run.replan_count = std::max(0, plan_index - 1);
        throw NavigationError(std::string("GP update failed: ") + e.what(), run);
      }
    }();
    const Path path = plan(snap.estimate, current, goal);
    if (config.record_snapshots) run.snapshots.push_back(std::move(snap));
    run.replan_count = plan_index;

    for (std::size_t i = 1; i < path.cells.size(); ++i) {
      const CellId next = path.cells[i];
      const auto d = adjacency_distance(grid.shape(), current, next, config.connectivity);
      run.executed_energy += truth.transition_cost(current, next, *d);
      current = next;
      run.trajectory.push_back(current);
      run.cumulative_energy.push_back(run.executed_energy);
      if (!measured[static_cast<std::size_t>(current.index)]) {
        batch.push_back(measure(current));
        run.step_measurement.push_back(batch.back().energy);
        ++fresh;
      } else {
        run.step_measurement.push_back(std::nullopt);
      }
      if (current == goal || fresh >= config.m) break;
    }

    if (!batch.empty()) {
      model.add_measurements(batch, grid);
      run.measurements.insert(run.measurements.end(), batch.begin(), batch.end());
      batch.clear();
    }
    fresh = 0;
    if (current == goal) {
      run.reached = true;
      return run;
    }
  }
}

const Snapshot& estimate_snapshot(const NavRun& run, int k) {
  if (k < 0 || k > run.replan_count || static_cast<std::size_t>(k) >= run.snapshots.size())
    throw std::out_of_range("snapshot " + std::to_string(k) + " not recorded (replans: " +
                            std::to_string(run.replan_count) + ")");
  return run.snapshots[static_cast<std::size_t>(k)];
}

}  // namespace terragp
