#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "terragp/terrain_map.hpp"

namespace terragp {

struct ClassSpec {
  std::string name;
  double prior_mean = 60.0;      // J/m
  double sigma_f = 5.0;          // GP signal std written to the class table
  double sigma_d = 4.0;          // m, GP length scale and perturbation correlation length
  double variation_std = 5.0;    // std of the generated within-class perturbation
};

enum class LayoutKind { Bands, Voronoi, ThresholdNoise };

std::string to_string(LayoutKind kind);
LayoutKind layout_kind_from_string(const std::string& name);

struct Layout {
  LayoutKind kind = LayoutKind::Bands;
  int k = 3;  // bands, sites or levels; regions cycle through the classes
};

struct GenSpec {
  std::uint64_t seed = 0;
  int width = 60;
  int height = 60;
  double cell_size = 1.0;
  std::vector<ClassSpec> classes;
  Layout layout;

  void validate() const;
};

/// Seeded environment: class regions from the layout, each cell's energy the
/// class prior plus a smooth perturbation (Gaussian-blurred white noise,
/// centered and scaled per class to variation_std), floored at 1e-3.
Environment generate(const GenSpec& spec);

/// Built-in class catalog (dirt road, grass, corn, then synthetic classes).
std::vector<ClassSpec> default_class_specs(int count);

/// The 60x60, three-class world (six threshold-noise levels) used for planner tournaments.
GenSpec benchmark_spec(std::uint64_t seed);

/// A generated world plus the navigation task and initializations run on it.
struct Scenario {
  Environment env;
  CellId start;
  CellId goal;
  double admissible_floor = 20.0;
  double high_init = 1000.0;
};

/// Id of the cheap middle band in the banded exploration scenarios.
inline constexpr int kMiddleBandClass = 1;

/// Three horizontal bands, the middle one cheapest, with start and goal in
/// the top band. A robot that never measures the middle band cannot learn it
/// is cheap. Variant 0 is the canonical layout; other variants jitter band
/// heights, class costs and the start and goal columns.
Scenario band_scenario(std::uint64_t variant);

/// The canonical banded scenario (variant 0).
Scenario canonical_band_scenario();

}  // namespace terragp
