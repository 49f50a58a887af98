#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "terragp/navigator.hpp"

namespace terragp {

inline constexpr const char* kTrajectoryCsvHeader =
    "step,cell_index,row,col,class_id,measured_e,cumulative_energy";

struct TrajectoryRow {
  int step = 0;
  CellId cell;
  int row = 0;
  int col = 0;
  int class_id = 0;
  std::optional<double> measured_e;  // empty when no new measurement was taken
  double cumulative_energy = 0.0;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_trajectory_csv(std::ostream& out, const NavRun& run, const TerrainGrid& grid);
/// Throws std::runtime_error on a malformed header or row.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// {planner, executed_energy, reached, replans, seed, ...} as a JSON document.
std::string run_summary_json(const NavRun& run, const GridShape& shape,
                             const std::string& error = {});

}  // namespace terragp
