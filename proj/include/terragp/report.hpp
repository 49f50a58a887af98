#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "terragp/envgen.hpp"
#include "terragp/navigator.hpp"

namespace terragp {

inline constexpr std::array<PlannerKind, 4> kAllPlanners{
    PlannerKind::Proposed, PlannerKind::ShortestDistance, PlannerKind::LocalGp, PlannerKind::Optimal};

struct PlannerResult {
  PlannerKind kind = PlannerKind::Proposed;
  double executed_energy = 0.0;  // J
  double ratio_percent = 0.0;    // 100 * executed / optimal
  int replans = 0;
  bool reached = false;
  std::string error;  // empty on success
  double wall_seconds = 0.0;
};

/// One environment, all four planners (a row of the comparison table).
struct ComparisonRow {
  std::string env_id;
  std::optional<std::uint64_t> seed;
  GridShape shape;
  CellId start;
  CellId goal;
  std::array<PlannerResult, 4> results;  // kAllPlanners order

  const PlannerResult& result(PlannerKind kind) const;
  bool ok() const;
};

struct PlannerAggregate {
  PlannerKind kind = PlannerKind::Proposed;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  int rows = 0;  // rows contributing (all planners succeeded)
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  std::array<PlannerAggregate, 4> aggregate() const;
  /// Rows where Proposed's executed energy is <= ShortestDistance's.
  int proposed_not_worse_than_shortest() const;
};

/// Runs every planner on one environment. Failures are recorded in the row.
ComparisonRow compare_planners(const Environment& env, const NavConfig& config, CellId start, CellId goal,
                               std::string env_id, std::optional<std::uint64_t> seed = std::nullopt);

/// Generates one environment per seed and compares the planners on each,
/// corner to corner, using up to `threads` workers. Rows keep seed order.
ComparisonReport compare_generated(const std::vector<std::uint64_t>& seeds,
                                   const std::function<GenSpec(std::uint64_t)>& spec_for,
                                   const NavConfig& config, unsigned threads);

/// Worker count from TERRAGP_THREADS, else hardware concurrency.
unsigned default_thread_count();

std::string report_json(const ComparisonReport& report, bool include_timing);
/// Aligned text table: one row per environment, "energy (ratio%)" cells.
std::string report_table(const ComparisonReport& report);

}  // namespace terragp
