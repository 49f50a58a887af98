#include "terragp/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "terragp/rng.hpp"

namespace terragp {

namespace {

constexpr double kMinGeneratedCost = 1e-3;

/// White noise blurred with a Gaussian whose width gives the field an
/// approximately squared-exponential correlation of length `length_cells`.
std::vector<double> smooth_noise(int width, int height, double length_cells, Xoshiro256& rng) {
  const double blur = length_cells / std::sqrt(2.0);
  const int radius = blur < 0.3 ? 0 : static_cast<int>(std::ceil(3.0 * blur));
  const int pw = width + 2 * radius;
  const int ph = height + 2 * radius;
  std::vector<double> noise(static_cast<std::size_t>(pw) * ph);
  for (double& v : noise) v = rng.normal();
  if (radius == 0) return noise;

  std::vector<double> weights(static_cast<std::size_t>(2 * radius + 1));
  for (int i = -radius; i <= radius; ++i)
    weights[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (blur * blur));
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;

  // Horizontal pass over the padded rows, then vertical into the output.
  std::vector<double> rows(static_cast<std::size_t>(width) * ph, 0.0);
  for (int r = 0; r < ph; ++r)
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = 0; i <= 2 * radius; ++i)
        acc += weights[static_cast<std::size_t>(i)] * noise[static_cast<std::size_t>(r) * pw + c + i];
      rows[static_cast<std::size_t>(r) * width + c] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(width) * height, 0.0);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      double acc = 0.0;
      for (int i = 0; i <= 2 * radius; ++i)
        acc += weights[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(r + i) * width + c];
      out[static_cast<std::size_t>(r) * width + c] = acc;
    }
  return out;
}

/// Per-cell energies: class prior plus that class's smooth field, centered
/// and scaled over the class's own cells.
std::vector<double> class_energies(const GridShape& shape, const std::vector<int>& class_of,
                                   const std::vector<ClassSpec>& specs, Xoshiro256& rng) {
  std::vector<double> energy(class_of.size(), 0.0);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& spec = specs[k];
    const auto field = smooth_noise(shape.width, shape.height, spec.sigma_d / shape.cell_size, rng);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < class_of.size(); ++i)
      if (class_of[i] == static_cast<int>(k)) members.push_back(i);
    if (members.empty()) continue;

    double mean = 0.0;
    for (auto i : members) mean += field[i];
    mean /= static_cast<double>(members.size());
    double var = 0.0;
    for (auto i : members) var += (field[i] - mean) * (field[i] - mean);
    var /= static_cast<double>(members.size());
    const double scale = var > 0.0 ? spec.variation_std / std::sqrt(var) : 0.0;
    for (auto i : members)
      energy[i] = std::max(kMinGeneratedCost, spec.prior_mean + scale * (field[i] - mean));
  }
  return energy;
}

std::vector<TerrainClassParams> class_table(const std::vector<ClassSpec>& specs) {
  std::vector<TerrainClassParams> table;
  for (std::size_t k = 0; k < specs.size(); ++k)
    table.push_back({static_cast<int>(k), specs[k].name, specs[k].prior_mean, specs[k].sigma_f,
                     specs[k].sigma_d});
  return table;
}

std::vector<int> bands_layout(const GridShape& shape, int k, int classes) {
  std::vector<int> out(static_cast<std::size_t>(shape.cell_count()));
  for (int r = 0; r < shape.height; ++r) {
    const int band = static_cast<int>(static_cast<long>(r) * k / shape.height);
    for (int c = 0; c < shape.width; ++c)
      out[static_cast<std::size_t>(shape.cell_at(r, c).index)] = band % classes;
  }
  return out;
}

std::vector<int> voronoi_layout(const GridShape& shape, int k, int classes, Xoshiro256& rng) {
  struct Site {
    double row, col;
    int cls;
  };
  std::vector<Site> sites;
  for (int i = 0; i < k; ++i) {
    const double row = rng.uniform() * shape.height;
    const double col = rng.uniform() * shape.width;
    // The first sites cover every class once; the rest draw uniformly.
    const int cls = i < classes ? i : static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    sites.push_back({row, col, cls});
  }
  std::vector<int> out(static_cast<std::size_t>(shape.cell_count()));
  for (int r = 0; r < shape.height; ++r)
    for (int c = 0; c < shape.width; ++c) {
      double best = std::numeric_limits<double>::infinity();
      int cls = 0;
      for (const auto& s : sites) {
        const double dr = r + 0.5 - s.row;
        const double dc = c + 0.5 - s.col;
        const double d2 = dr * dr + dc * dc;
        if (d2 < best) {
          best = d2;
          cls = s.cls;
        }
      }
      out[static_cast<std::size_t>(shape.cell_at(r, c).index)] = cls;
    }
  return out;
}

std::vector<int> threshold_layout(const GridShape& shape, int k, int classes, double length_cells,
                                  Xoshiro256& rng) {
  const auto field = smooth_noise(shape.width, shape.height, length_cells, rng);
  std::vector<std::size_t> order(field.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return field[a] < field[b]; });
  std::vector<int> out(field.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto level = static_cast<int>(rank * static_cast<std::size_t>(k) / order.size());
    out[order[rank]] = level % classes;
  }
  return out;
}

}  // namespace

std::string to_string(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::Bands: return "bands";
    case LayoutKind::Voronoi: return "voronoi";
    case LayoutKind::ThresholdNoise: return "threshold";
  }
  return "unknown";
}

LayoutKind layout_kind_from_string(const std::string& name) {
  if (name == "bands") return LayoutKind::Bands;
  if (name == "voronoi") return LayoutKind::Voronoi;
  if (name == "threshold") return LayoutKind::ThresholdNoise;
  throw std::invalid_argument("unknown layout '" + name + "'");
}

void GenSpec::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("width and height must be positive");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
  if (classes.empty()) throw std::invalid_argument("at least one class is required");
  if (layout.k < 1) throw std::invalid_argument("layout parameter k must be >= 1");
  for (const auto& c : classes) {
    if (!(c.prior_mean > 0.0)) throw std::invalid_argument("class prior mean must be > 0");
    if (!(c.sigma_f >= 0.0) || !(c.variation_std >= 0.0))
      throw std::invalid_argument("class standard deviations must be >= 0");
    if (!(c.sigma_d > 0.0)) throw std::invalid_argument("class length scale must be > 0");
  }
}

Environment generate(const GenSpec& spec) {
  spec.validate();
  const GridShape shape{spec.width, spec.height, spec.cell_size};
  const int classes = static_cast<int>(spec.classes.size());
  Xoshiro256 rng(spec.seed);

  std::vector<int> class_of;
  switch (spec.layout.kind) {
    case LayoutKind::Bands:
      class_of = bands_layout(shape, spec.layout.k, classes);
      break;
    case LayoutKind::Voronoi:
      class_of = voronoi_layout(shape, spec.layout.k, classes, rng);
      break;
    case LayoutKind::ThresholdNoise: {
      double mean_length = 0.0;
      for (const auto& c : spec.classes) mean_length += c.sigma_d;
      mean_length /= classes;
      class_of = threshold_layout(shape, spec.layout.k, classes, 2.0 * mean_length / spec.cell_size, rng);
      break;
    }
  }
  auto energy = class_energies(shape, class_of, spec.classes, rng);
  TerrainGrid grid(shape, classes, std::move(class_of), std::move(energy));
  return Environment{std::move(grid), class_table(spec.classes)};
}

std::vector<ClassSpec> default_class_specs(int count) {
  if (count < 1) throw std::invalid_argument("class count must be >= 1");
  const std::vector<ClassSpec> catalog{
      {"dirt", 45.0, 2.5, 4.0, 2.5},
      {"grass", 60.0, 4.0, 4.0, 4.0},
      {"corn", 120.0, 6.0, 4.0, 6.0},
  };
  std::vector<ClassSpec> out;
  for (int i = 0; i < count; ++i) {
    if (i < static_cast<int>(catalog.size())) {
      out.push_back(catalog[static_cast<std::size_t>(i)]);
    } else {
      const double mean = 40.0 + 12.5 * (i % 5) + 2.5 * (i / 5);
      out.push_back({"class" + std::to_string(i), mean, 0.06 * mean, 4.0, 0.06 * mean});
    }
  }
  return out;
}

GenSpec benchmark_spec(std::uint64_t seed) {
  GenSpec spec;
  spec.seed = seed;
  spec.width = 60;
  spec.height = 60;
  spec.cell_size = 1.0;
  spec.classes = default_class_specs(3);
  spec.layout = {LayoutKind::ThresholdNoise, 6};
  return spec;
}

Scenario band_scenario(std::uint64_t variant) {
  constexpr int kWidth = 80;
  constexpr int kHeight = 30;
  int top = 8;
  int middle = 14;
  std::vector<ClassSpec> specs{
      {"class1", 80.0, 3.0, 4.0, 3.0},
      {"class2", 30.0, 2.0, 4.0, 2.0},
      {"class3", 60.0, 3.0, 4.0, 3.0},
  };
  int start_row = 4, start_col = 3, goal_row = 4, goal_col = 76;

  std::uint64_t mixed = variant;
  Xoshiro256 rng(Xoshiro256::splitmix64(mixed));
  if (variant != 0) {
    top = 6 + static_cast<int>(rng.below(5));
    middle = 10 + static_cast<int>(rng.below(7));
    specs[0].prior_mean += 16.0 * (rng.uniform() - 0.5);
    specs[1].prior_mean += 8.0 * (rng.uniform() - 0.5);
    specs[2].prior_mean += 12.0 * (rng.uniform() - 0.5);
    start_row = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(top - 3)));
    goal_row = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(top - 3)));
    start_col = 1 + static_cast<int>(rng.below(6));
    goal_col = 70 + static_cast<int>(rng.below(9));
  }

  const GridShape shape{kWidth, kHeight, 1.0};
  std::vector<int> class_of(static_cast<std::size_t>(shape.cell_count()));
  for (int r = 0; r < kHeight; ++r)
    for (int c = 0; c < kWidth; ++c)
      class_of[static_cast<std::size_t>(shape.cell_at(r, c).index)] =
          r < top ? 0 : (r < top + middle ? kMiddleBandClass : 2);
  auto energy = class_energies(shape, class_of, specs, rng);

  Scenario out{Environment{TerrainGrid(shape, 3, std::move(class_of), std::move(energy)), class_table(specs)},
               shape.cell_at(start_row, start_col), shape.cell_at(goal_row, goal_col), 20.0, 1000.0};
  return out;
}

Scenario canonical_band_scenario() { return band_scenario(0); }

}  // namespace terragp
