#pragma once

#include <span>

#include "terragp/navigator.hpp"

namespace terragp {

/// Plans once on pure distance and follows that path; priced on ground truth.
NavRun run_shortest_distance(const TerrainGrid& grid, const NavConfig& config, CellId start, CellId goal);

/// Plans once on the ground-truth map.
NavRun run_optimal(const TerrainGrid& grid, const NavConfig& config, CellId start, CellId goal);

/// Online loop with a distance-only squared-exponential GP (no class mask).
NavRun run_local_gp(const TerrainGrid& grid, const TerrainClassParams& shared, const NavConfig& config,
                    CellId start, CellId goal);

/// Shared hyperparameters for the distance-only GP: per-class sigma_f and
/// sigma_d averaged, prior mean at the admissible floor.
TerrainClassParams default_local_gp_params(std::span<const TerrainClassParams> class_table,
                                           double admissible_floor);

/// Dispatches to the planner implementation for `kind`.
NavRun run_planner(PlannerKind kind, const Environment& env, const NavConfig& config, CellId start,
                   CellId goal);

}  // namespace terragp
