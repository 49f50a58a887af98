#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "terragp/terrain_map.hpp"

namespace terragp {

/// Gram matrix stayed numerically singular after jitter escalation.
class GpSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Measurement {
  CellId cell;
  double x = 0.0;  // cell center, meters
  double y = 0.0;
  double energy = 0.0;  // J/m
  int class_id = 0;
};

/// Measurement placed at the center of `cell`, labelled with the grid's class.
Measurement make_measurement(const TerrainGrid& grid, CellId cell, double energy);

/// A location the kernel can be evaluated at.
struct KernelSite {
  double x = 0.0;
  double y = 0.0;
  int class_id = 0;
};

struct Posterior {
  std::vector<CellId> queried_cells;
  std::vector<double> mean;      // J/m
  std::vector<double> variance;  // (J/m)^2, empty when not requested
};

/// Gaussian process over unit-distance energy.
///
/// The default kernel is squared-exponential within a terrain class and zero
/// across classes, with one (sigma_f, sigma_d, prior mean) triple per class.
/// Observations are regressed on their residual from the class prior mean and
/// predictions add that prior back. A distance-only variant drops the class
/// mask and uses a single shared parameter triple for every location.
class GpEnergyModel {
 public:
  explicit GpEnergyModel(std::vector<TerrainClassParams> class_table, double noise_std = 0.0,
                         double jitter = 1e-10);

  static GpEnergyModel distance_only(const TerrainClassParams& shared, double noise_std = 0.0,
                                     double jitter = 1e-10);

  bool class_masked() const { return !shared_.has_value(); }
  double noise_std() const { return noise_std_; }
  double jitter() const { return jitter_; }
  const std::vector<TerrainClassParams>& class_table() const { return classes_; }
  const std::vector<Measurement>& measurements() const { return measurements_; }

  /// Covariance between two sites; throws std::out_of_range for unknown classes.
  double kernel(const KernelSite& a, const KernelSite& b) const;

  /// Prior mean and prior variance the model assigns to a location of this class.
  double prior_mean(int class_id) const;
  double prior_variance(int class_id) const;

  /// Appends a batch. With zero observation noise a repeated cell replaces
  /// its earlier measurement so the Gram matrix stays nonsingular.
  void add_measurements(std::span<const Measurement> batch, const TerrainGrid& grid);

  std::size_t measurement_count(int class_id) const;
  bool class_measured(int class_id) const { return measurement_count(class_id) > 0; }

  /// Posterior over the query cells from one solve over all measurements.
  Posterior posterior(std::span<const CellId> query_cells, const TerrainGrid& grid,
                      bool with_variance = true) const;

  /// Same contract as posterior(), solved as one independent GP per class.
  Posterior posterior_by_class_blocks(std::span<const CellId> query_cells, const TerrainGrid& grid,
                                      bool with_variance = true) const;

 private:
  const TerrainClassParams& params_for(int class_id) const;
  int group_of(int class_id) const { return shared_ ? 0 : class_id; }
  KernelSite site_of(const Measurement& m) const { return {m.x, m.y, m.class_id}; }

  void solve_into(std::span<const std::size_t> obs, std::span<const std::size_t> queries,
                  std::span<const CellId> query_cells, const TerrainGrid& grid, bool with_variance,
                  Posterior& out) const;

  std::vector<TerrainClassParams> classes_;
  std::optional<TerrainClassParams> shared_;
  double noise_std_;
  double jitter_;
  std::vector<Measurement> measurements_;
};

/// Every cell of the grid in index order.
std::vector<CellId> all_cells(const GridShape& shape);

}  // namespace terragp
