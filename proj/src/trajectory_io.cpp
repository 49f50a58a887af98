#include "terragp/trajectory_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace terragp {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const NavRun& run, const TerrainGrid& grid) {
  out << kTrajectoryCsvHeader << '\n';
  for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
    const CellId c = run.trajectory[i];
    out << i << ',' << c.index << ',' << grid.shape().row_of(c) << ',' << grid.shape().col_of(c) << ','
        << grid.class_of(c) << ',';
    if (i < run.step_measurement.size() && run.step_measurement[i]) out << format_double(*run.step_measurement[i]);
    out << ',' << format_double(run.cumulative_energy[i]) << '\n';
  }
}

namespace {

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw std::runtime_error("trajectory CSV line " + std::to_string(line) + ": bad number '" + text + "'");
  return value;
}

}  // namespace

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryCsvHeader)
    throw std::runtime_error("trajectory CSV: unexpected header");
  std::vector<TrajectoryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 7)
      throw std::runtime_error("trajectory CSV line " + std::to_string(line_no) + ": expected 7 fields");
    TrajectoryRow row;
    row.step = parse_number<int>(fields[0], line_no);
    row.cell = CellId{parse_number<std::int32_t>(fields[1], line_no)};
    row.row = parse_number<int>(fields[2], line_no);
    row.col = parse_number<int>(fields[3], line_no);
    row.class_id = parse_number<int>(fields[4], line_no);
    if (!fields[5].empty()) row.measured_e = parse_number<double>(fields[5], line_no);
    row.cumulative_energy = parse_number<double>(fields[6], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::string run_summary_json(const NavRun& run, const GridShape& shape, const std::string& error) {
  nlohmann::ordered_json doc;
  doc["planner"] = to_string(run.planner);
  doc["executed_energy"] = run.executed_energy;
  doc["reached"] = run.reached;
  doc["replans"] = run.replan_count;
  doc["seed"] = run.config.seed;
  doc["start"] = {shape.row_of(run.start), shape.col_of(run.start)};
  doc["goal"] = {shape.row_of(run.goal), shape.col_of(run.goal)};
  doc["steps"] = run.trajectory.empty() ? 0 : run.trajectory.size() - 1;
  doc["measurements"] = run.measurements.size();
  doc["m"] = run.config.m;
  doc["init"] = run.config.init_mode == InitMode::Admissible ? "admissible" : "fixed";
  doc["init_value"] = run.config.init_value();
  if (!error.empty()) doc["error"] = error;
  return doc.dump(2) + "\n";
}

}  // namespace terragp
