#include "terragp/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "terragp/baselines.hpp"

namespace terragp {

const PlannerResult& ComparisonRow::result(PlannerKind kind) const {
  for (const auto& r : results)
    if (r.kind == kind) return r;
  throw std::out_of_range("planner missing from row");
}

bool ComparisonRow::ok() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.error.empty(); });
}

std::array<PlannerAggregate, 4> ComparisonReport::aggregate() const {
  std::array<PlannerAggregate, 4> out;
  for (std::size_t p = 0; p < kAllPlanners.size(); ++p) {
    std::vector<double> ratios;
    for (const auto& row : rows)
      if (row.ok()) ratios.push_back(row.results[p].ratio_percent);
    out[p].kind = kAllPlanners[p];
    out[p].rows = static_cast<int>(ratios.size());
    if (ratios.empty()) continue;
    double sum = 0.0;
    for (double r : ratios) sum += r;
    out[p].mean_ratio = sum / static_cast<double>(ratios.size());
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    out[p].median_ratio = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  }
  return out;
}

int ComparisonReport::proposed_not_worse_than_shortest() const {
  int count = 0;
  for (const auto& row : rows) {
    if (!row.ok()) continue;
    if (row.result(PlannerKind::Proposed).executed_energy <=
        row.result(PlannerKind::ShortestDistance).executed_energy)
      ++count;
  }
  return count;
}

ComparisonRow compare_planners(const Environment& env, const NavConfig& config, CellId start, CellId goal,
                               std::string env_id, std::optional<std::uint64_t> seed) {
  ComparisonRow row;
  row.env_id = std::move(env_id);
  row.seed = seed;
  row.shape = env.grid.shape();
  row.start = start;
  row.goal = goal;
  NavConfig cfg = config;
  cfg.record_snapshots = false;
  for (std::size_t p = 0; p < kAllPlanners.size(); ++p) {
    PlannerResult& res = row.results[p];
    res.kind = kAllPlanners[p];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const NavRun run = run_planner(res.kind, env, cfg, start, goal);
      res.executed_energy = run.executed_energy;
      res.replans = run.replan_count;
      res.reached = run.reached;
    } catch (const NavigationError& e) {
      res.executed_energy = e.partial().executed_energy;
      res.replans = e.partial().replan_count;
      res.error = e.what();
    } catch (const std::exception& e) {
      res.error = e.what();
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const auto& optimal = row.results[3];
  for (auto& res : row.results) {
    if (res.error.empty() && optimal.error.empty() && optimal.executed_energy > 0.0)
      res.ratio_percent = 100.0 * res.executed_energy / optimal.executed_energy;
  }
  // Start equal to goal costs nothing for every planner.
  if (optimal.error.empty() && optimal.executed_energy == 0.0)
    for (auto& res : row.results) res.ratio_percent = 100.0;
  return row;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("TERRAGP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComparisonReport compare_generated(const std::vector<std::uint64_t>& seeds,
                                   const std::function<GenSpec(std::uint64_t)>& spec_for,
                                   const NavConfig& config, unsigned threads) {
  ComparisonReport report;
  report.rows.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      const Environment env = generate(spec_for(seeds[i]));
      const GridShape& s = env.grid.shape();
      report.rows[i] = compare_planners(env, config, s.cell_at(0, 0), s.cell_at(s.height - 1, s.width - 1),
                                        "seed-" + std::to_string(seeds[i]), seeds[i]);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

std::string report_json(const ComparisonReport& report, bool include_timing) {
  nlohmann::ordered_json doc;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["env"] = row.env_id;
    r["seed"] = row.seed ? nlohmann::ordered_json(*row.seed) : nlohmann::ordered_json(nullptr);
    r["start"] = {row.shape.row_of(row.start), row.shape.col_of(row.start)};
    r["goal"] = {row.shape.row_of(row.goal), row.shape.col_of(row.goal)};
    r["ok"] = row.ok();
    nlohmann::ordered_json planners;
    for (const auto& res : row.results) {
      nlohmann::ordered_json p;
      p["executed_energy"] = res.executed_energy;
      p["ratio_percent"] = res.error.empty() ? nlohmann::ordered_json(res.ratio_percent) : nullptr;
      p["replans"] = res.replans;
      p["reached"] = res.reached;
      p["error"] = res.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(res.error);
      if (include_timing) p["wall_seconds"] = res.wall_seconds;
      planners[to_string(res.kind)] = std::move(p);
    }
    r["planners"] = std::move(planners);
    doc["rows"].push_back(std::move(r));
  }
  nlohmann::ordered_json agg;
  for (const auto& a : report.aggregate()) {
    agg[to_string(a.kind)] = {{"mean_ratio_percent", a.mean_ratio},
                              {"median_ratio_percent", a.median_ratio},
                              {"rows", a.rows}};
  }
  doc["aggregate"] = std::move(agg);
  doc["proposed_not_worse_than_shortest"] = report.proposed_not_worse_than_shortest();
  return doc.dump(2) + "\n";
}

namespace {

std::string cell_text(const PlannerResult& r) {
  if (!r.error.empty()) return "failed";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.0f (%.0f%%)", r.executed_energy, r.ratio_percent);
  return buf;
}

}  // namespace

std::string report_table(const ComparisonReport& report) {
  const std::array<std::string, 5> header{"Index", "Proposed", "Shortest distance", "Local GP", "Optimal"};
  std::vector<std::array<std::string, 5>> lines{header};
  for (const auto& row : report.rows) {
    std::array<std::string, 5> line;
    line[0] = row.env_id;
    for (std::size_t p = 0; p < 4; ++p) line[p + 1] = cell_text(row.results[p]);
    lines.push_back(line);
  }
  std::array<std::string, 5> median_line{"median"};
  const auto agg = report.aggregate();
  for (std::size_t p = 0; p < 4; ++p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "(%.1f%%)", agg[p].median_ratio);
    median_line[p + 1] = buf;
  }
  lines.push_back(median_line);

  std::array<std::size_t, 5> width{};
  for (const auto& l : lines)
    for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], l[i].size());
  std::ostringstream out;
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < 5; ++i) {
      out << (i ? " | " : "") << std::left << std::setw(static_cast<int>(width[i])) << l[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace terragp
