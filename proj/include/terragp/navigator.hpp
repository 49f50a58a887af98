#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "terragp/gp_energy.hpp"
#include "terragp/planner.hpp"
#include "terragp/terrain_map.hpp"

namespace terragp {

enum class PlannerKind { Proposed, ShortestDistance, LocalGp, Optimal };

std::string to_string(PlannerKind kind);
PlannerKind planner_kind_from_string(const std::string& name);

enum class InitMode {
  /// Unmeasured classes start at admissible_floor, a value never above the true cost.
  Admissible,
  /// Unmeasured classes start at fixed_init_value.
  Fixed,
};

struct NavConfig {
  int m = 10;  // newly measured cells between map updates
  InitMode init_mode = InitMode::Admissible;
  double admissible_floor = 40.0;   // J/m
  double fixed_init_value = 1000.0; // J/m
  double measurement_noise_std = 0.0;
  double gp_noise_std = 0.0;  // observation noise assumed by the GP
  double jitter = 1e-10;
  Connectivity connectivity = Connectivity::Eight;
  int max_replans = 0;  // 0 selects 4 * cells / m
  double cost_floor = CostMap::kDefaultCostFloor;
  double robot_weight = 98.0;  // N
  std::uint64_t seed = 0;
  bool record_snapshots = true;

  double init_value() const { return init_mode == InitMode::Admissible ? admissible_floor : fixed_init_value; }
  int replan_budget(const GridShape& shape) const;
  void validate() const;
};

/// The cost map a planner saw at one replan, with the GP variance behind it.
struct Snapshot {
  CostMap estimate;
  std::vector<double> variance;  // empty for planners without a GP
};

struct NavRun {
  PlannerKind planner = PlannerKind::Proposed;
  NavConfig config;
  CellId start;
  CellId goal;
  std::vector<CellId> trajectory;
  std::vector<std::optional<double>> step_measurement;  // per trajectory entry
  std::vector<double> cumulative_energy;                 // per trajectory entry, J
  std::vector<Measurement> measurements;
  double executed_energy = 0.0;  // J, priced on ground truth
  int replan_count = 0;
  bool reached = false;
  std::vector<Snapshot> snapshots;
};

/// Navigation ended without reaching the goal. Carries the partial run.
class NavigationError : public std::runtime_error {
 public:
  NavigationError(const std::string& what, NavRun partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const NavRun& partial() const { return partial_; }

 private:
  NavRun partial_;
};

/// Initial planning map: every cell at the configured initialization value.
CostMap initialize_costmap(const TerrainGrid& grid, std::span<const TerrainClassParams> class_table,
                           const NavConfig& config);

/// Online loop with the class-masked GP: plan on the current estimate, walk
/// until m previously unmeasured cells have been measured or the goal is
/// reached, update the GP, repeat.
NavRun navigate(const TerrainGrid& grid, std::span<const TerrainClassParams> class_table,
                const NavConfig& config, CellId start, CellId goal);

/// Same loop driven by an arbitrary GP model. Classes the model has not
/// observed use the initialization value when the model is class-masked.
NavRun navigate_with_model(const TerrainGrid& grid, GpEnergyModel model, const NavConfig& config,
                           CellId start, CellId goal, PlannerKind kind);

/// Planning map and variance at replan k (0 is the initial map).
const Snapshot& estimate_snapshot(const NavRun& run, int k);

/// Ground-truth map used to price executed trajectories.
CostMap truth_costmap(const TerrainGrid& grid, const NavConfig& config);

}  // namespace terragp
