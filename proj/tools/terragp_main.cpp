// terragp: generate environments, run episodes, compare planners, render maps.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "terragp/baselines.hpp"
#include "terragp/envgen.hpp"
#include "terragp/navigator.hpp"
#include "terragp/report.hpp"
#include "terragp/svg.hpp"
#include "terragp/terrain_map.hpp"
#include "terragp/trajectory_io.hpp"

using namespace terragp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

CellId parse_cell(const std::string& text, const GridShape& shape, const char* flag) {
  const auto comma = text.find(',');
  int row = 0, col = 0;
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    std::size_t used = 0;
    row = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("trailing text");
    const std::string rest = text.substr(comma + 1);
    col = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects ROW,COL, got '" + text + "'");
  }
  if (row < 0 || row >= shape.height || col < 0 || col >= shape.width)
    throw UsageError(std::string(flag) + " " + text + " is outside the " + std::to_string(shape.height) + "x" +
                     std::to_string(shape.width) + " grid");
  return shape.cell_at(row, col);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

/// Flags shared by run, compare and plot --snapshot.
struct RunOptions {
  std::string start = "0,0";
  std::string goal;
  int m = 10;
  std::string init = "admissible";
  double init_value = 1000.0;
  double floor = 40.0;
  double noise = 0.0;
  double gp_noise = 0.0;
  std::uint64_t seed = 0;
  int connectivity = 8;
  double robot_weight = 98.0;
  int max_replans = 0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--start", start, "Start cell ROW,COL")->capture_default_str();
    cmd.add_option("--goal", goal, "Goal cell ROW,COL (default: opposite corner)");
    cmd.add_option("--m", m, "Newly measured cells between map updates")->capture_default_str();
    cmd.add_option("--init", init, "Initialization of unmeasured classes")
        ->check(CLI::IsMember({"admissible", "fixed"}))
        ->capture_default_str();
    cmd.add_option("--init-value", init_value, "Value used by --init fixed (J/m)")->capture_default_str();
    cmd.add_option("--floor", floor, "Admissible initialization floor (J/m)")->capture_default_str();
    cmd.add_option("--noise", noise, "Std of simulated measurement noise (J/m)")->capture_default_str();
    cmd.add_option("--gp-noise", gp_noise, "Observation noise std assumed by the GP")->capture_default_str();
    cmd.add_option("--seed", seed, "Seed for measurement noise")->capture_default_str();
    cmd.add_option("--connectivity", connectivity, "Grid connectivity")
        ->check(CLI::IsMember({4, 8}))
        ->capture_default_str();
    cmd.add_option("--robot-weight", robot_weight, "Robot weight m*g (N)")->capture_default_str();
    cmd.add_option("--max-replans", max_replans, "Replan budget (0: 4*cells/m)")->capture_default_str();
  }

  NavConfig config() const {
    NavConfig c;
    c.m = m;
    c.init_mode = init == "fixed" ? InitMode::Fixed : InitMode::Admissible;
    c.fixed_init_value = init_value;
    c.admissible_floor = floor;
    c.measurement_noise_std = noise;
    c.gp_noise_std = gp_noise;
    c.seed = seed;
    c.connectivity = connectivity_from_int(connectivity);
    c.robot_weight = robot_weight;
    c.max_replans = max_replans;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }

  std::pair<CellId, CellId> endpoints(const GridShape& shape) const {
    const CellId s = parse_cell(start, shape, "--start");
    const CellId g = goal.empty() ? shape.cell_at(shape.height - 1, shape.width - 1)
                                  : parse_cell(goal, shape, "--goal");
    return {s, g};
  }
};

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::uint64_t seed = 0;
  std::string layout = "bands";
  int classes = 3;
  int width = 60;
  int height = 60;
  int k = 3;
  double cell_size = 1.0;
  std::optional<std::uint64_t> band_variant;
  std::string out;
  std::string out_task;
};

int cmd_gen(const GenOptions& o) {
  if (o.band_variant) {
    const Scenario sc = band_scenario(*o.band_variant);
    save_environment(sc.env, o.out);
    if (!o.out_task.empty()) {
      const GridShape& s = sc.env.grid.shape();
      nlohmann::ordered_json task;
      task["variant"] = *o.band_variant;
      task["start"] = {s.row_of(sc.start), s.col_of(sc.start)};
      task["goal"] = {s.row_of(sc.goal), s.col_of(sc.goal)};
      task["admissible_floor"] = sc.admissible_floor;
      task["high_init"] = sc.high_init;
      task["middle_band_class"] = kMiddleBandClass;
      write_text(o.out_task, task.dump(2) + "\n");
    }
    return 0;
  }
  if (!o.out_task.empty()) throw UsageError("--out-task requires --band-variant");
  if (o.classes < 1) throw UsageError("--classes must be >= 1");
  GenSpec spec;
  spec.seed = o.seed;
  spec.width = o.width;
  spec.height = o.height;
  spec.cell_size = o.cell_size;
  spec.classes = default_class_specs(o.classes);
  spec.layout = {layout_kind_from_string(o.layout), o.k};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  save_environment(generate(spec), o.out);
  return 0;
}

// ---------------------------------------------------------------- run

struct RunCmdOptions {
  std::string env;
  std::string planner = "proposed";
  RunOptions run;
  std::string out_csv;
  std::string out_json;
};

int cmd_run(const RunCmdOptions& o) {
  const Environment env = load_environment(o.env);
  const GridShape& shape = env.grid.shape();
  const auto [start, goal] = o.run.endpoints(shape);
  NavConfig config = o.run.config();
  config.record_snapshots = false;
  const PlannerKind kind = planner_kind_from_string(o.planner);

  NavRun run;
  std::string error;
  try {
    run = run_planner(kind, env, config, start, goal);
  } catch (const NavigationError& e) {
    run = e.partial();
    error = e.what();
  } catch (const std::exception& e) {
    run.planner = kind;
    run.config = config;
    run.start = start;
    run.goal = goal;
    error = e.what();
  }

  if (!o.out_csv.empty()) {
    std::ostringstream csv;
    write_trajectory_csv(csv, run, env.grid);
    write_text(o.out_csv, csv.str());
  }
  const std::string summary = run_summary_json(run, shape, error);
  if (o.out_json.empty())
    std::cout << summary;
  else
    write_text(o.out_json, summary);
  if (!error.empty()) {
    std::cerr << "terragp run: " << error << '\n';
    return kExitFailure;
  }
  return 0;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
  std::string env;
  int seeds = 0;
  std::uint64_t seed_base = 1;
  RunOptions run;
  std::string out_json;
  std::string out_table;
  bool timing = false;
};

int cmd_compare(const CompareOptions& o) {
  if (o.env.empty() == (o.seeds == 0)) throw UsageError("compare needs exactly one of --env or --seeds N");
  if (o.seeds < 0) throw UsageError("--seeds must be positive");
  const NavConfig config = o.run.config();

  ComparisonReport report;
  if (!o.env.empty()) {
    const Environment env = load_environment(o.env);
    const auto [start, goal] = o.run.endpoints(env.grid.shape());
    report.rows.push_back(compare_planners(env, config, start, goal, o.env));
  } else {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.seeds));
    std::iota(seeds.begin(), seeds.end(), o.seed_base);
    report = compare_generated(seeds, benchmark_spec, config, default_thread_count());
  }

  const std::string json = report_json(report, o.timing);
  const std::string table = report_table(report);
  if (!o.out_json.empty()) write_text(o.out_json, json);
  if (!o.out_table.empty()) write_text(o.out_table, table);
  std::cout << table;
  if (o.out_json.empty() && o.out_table.empty()) std::cout << json;
  // Failed rows are reported in the output; the batch itself succeeded.
  return 0;
}

// ---------------------------------------------------------------- plot

struct PlotOptions {
  std::string env;
  std::vector<std::string> trajectories;
  std::optional<int> snapshot;
  std::string layer = "mean";
  RunOptions run;
  int pixels = 8;
  std::string title;
  std::string out;
};

std::vector<CellId> load_trajectory_cells(const std::string& path, const GridShape& shape) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trajectory '" + path + "'");
  std::vector<CellId> cells;
  for (const auto& row : read_trajectory_csv(in)) {
    if (row.row < 0 || row.row >= shape.height || row.col < 0 || row.col >= shape.width ||
        shape.cell_at(row.row, row.col) != row.cell)
      throw std::invalid_argument("trajectory '" + path + "' does not match the " + std::to_string(shape.height) +
                                  "x" + std::to_string(shape.width) + " grid at step " + std::to_string(row.step));
    cells.push_back(row.cell);
  }
  return cells;
}

int cmd_plot(const PlotOptions& o) {
  const Environment env = load_environment(o.env);
  const GridShape& shape = env.grid.shape();

  std::vector<TrajectoryOverlay> overlays;
  for (const auto& path : o.trajectories) overlays.push_back({path, load_trajectory_cells(path, shape)});

  std::vector<double> values = env.grid.energy_grid();
  HeatmapOptions options;
  options.pixels_per_cell = o.pixels;
  options.title = o.title.empty() ? "ground truth" : o.title;
  if (o.snapshot) {
    NavConfig config = o.run.config();
    config.record_snapshots = true;
    const auto [start, goal] = o.run.endpoints(shape);
    NavRun run;
    try {
      run = navigate(env.grid, env.classes, config, start, goal);
    } catch (const NavigationError& e) {
      run = e.partial();
    }
    const Snapshot& snap = estimate_snapshot(run, *o.snapshot);
    if (o.layer == "variance") {
      values = snap.variance;
      options.value_label = "(J/m)^2";
    } else {
      values = snap.estimate.energies();
    }
    if (o.title.empty()) options.title = "estimate " + o.layer + " at replan " + std::to_string(*o.snapshot);
  }
  write_text(o.out, render_heatmap_svg(shape, values, overlays, options));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terrain-aware GP energy mapping and energy-efficient path planning"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded environment file");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--layout", gen.layout, "Class layout")
      ->check(CLI::IsMember({"bands", "voronoi", "threshold"}))
      ->capture_default_str();
  gen_cmd->add_option("--classes", gen.classes, "Number of terrain classes")->capture_default_str();
  gen_cmd->add_option("--width", gen.width, "Grid width in cells")->capture_default_str();
  gen_cmd->add_option("--height", gen.height, "Grid height in cells")->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "Bands, Voronoi sites or threshold levels")->capture_default_str();
  gen_cmd->add_option("--cell-size", gen.cell_size, "Cell edge length (m)")->capture_default_str();
  gen_cmd->add_option("--band-variant", gen.band_variant,
                      "Write banded exploration scenario N instead (ignores layout flags)");
  gen_cmd->add_option("--out-task", gen.out_task, "With --band-variant: start/goal/initialization JSON");
  gen_cmd->add_option("--out", gen.out, "Output environment JSON")->required();

  RunCmdOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one planner on an environment");
  run_cmd->add_option("--env", run.env, "Environment JSON")->required();
  run_cmd->add_option("--planner", run.planner, "Planner")
      ->check(CLI::IsMember({"proposed", "shortest", "local", "optimal"}))
      ->capture_default_str();
  run.run.attach(*run_cmd);
  run_cmd->add_option("--out-csv", run.out_csv, "Trajectory CSV");
  run_cmd->add_option("--out-json", run.out_json, "Run summary JSON (default: stdout)");

  CompareOptions cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Run all planners and report energy relative to optimal");
  cmp_cmd->add_option("--env", cmp.env, "Environment JSON");
  cmp_cmd->add_option("--seeds", cmp.seeds, "Generate N benchmark environments instead of --env");
  cmp_cmd->add_option("--seed-base", cmp.seed_base, "First generator seed for --seeds")->capture_default_str();
  cmp.run.attach(*cmp_cmd);
  cmp_cmd->add_option("--out-json", cmp.out_json, "Report JSON");
  cmp_cmd->add_option("--out-table", cmp.out_table, "Report text table");
  cmp_cmd->add_flag("--timing", cmp.timing, "Include wall-clock times in the JSON");

  PlotOptions plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG heatmap with optional trajectories");
  plot_cmd->add_option("--env", plot.env, "Environment JSON")->required();
  plot_cmd->add_option("--traj", plot.trajectories, "Trajectory CSV (repeatable)");
  plot_cmd->add_option("--snapshot", plot.snapshot, "Render the proposed planner's estimate at replan K");
  plot_cmd->add_option("--layer", plot.layer, "Snapshot layer")
      ->check(CLI::IsMember({"mean", "variance"}))
      ->capture_default_str();
  plot.run.attach(*plot_cmd);
  plot_cmd->add_option("--pixels", plot.pixels, "Pixels per cell")->capture_default_str();
  plot_cmd->add_option("--title", plot.title, "Title text");
  plot_cmd->add_option("--out", plot.out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*run_cmd) return cmd_run(run);
    if (*cmp_cmd) return cmd_compare(cmp);
    if (*plot_cmd) return cmd_plot(plot);
  } catch (const UsageError& e) {
    std::cerr << "terragp: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "terragp: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
