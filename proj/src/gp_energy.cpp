#include "terragp/gp_energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace terragp {

namespace {

// Factors with a reciprocal condition estimate below this are treated as
// singular; solves through them lose all significant digits.
constexpr double kMinRcond = 1e-10;
constexpr int kJitterEscalations = 3;

/// SPD factorization of gram, first as given and then with diagonal jitter
/// jitter*scale, growing tenfold up to kJitterEscalations times.
Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& gram, double scale, double jitter) {
  const Eigen::Index n = gram.rows();
  double added = 0.0;
  for (int attempt = 0; attempt <= kJitterEscalations + 1; ++attempt) {
    if (attempt > 0) added = jitter * scale * std::pow(10.0, attempt - 1);
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += added;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success && llt.rcond() >= kMinRcond) return llt;
  }
  throw GpSolverError("Gram matrix of " + std::to_string(n) +
                      " measurements is numerically singular after jitter " +
                      std::to_string(added));
}

}  // namespace

Measurement make_measurement(const TerrainGrid& grid, CellId cell, double energy) {
  const auto [x, y] = grid.shape().center(cell);
  return Measurement{cell, x, y, energy, grid.class_of(cell)};
}

std::vector<CellId> all_cells(const GridShape& shape) {
  std::vector<CellId> out(static_cast<std::size_t>(shape.cell_count()));
  for (std::int32_t i = 0; i < shape.cell_count(); ++i) out[static_cast<std::size_t>(i)] = CellId{i};
  return out;
}

GpEnergyModel::GpEnergyModel(std::vector<TerrainClassParams> class_table, double noise_std,
                             double jitter)
    : classes_(std::move(class_table)), noise_std_(noise_std), jitter_(jitter) {
  if (!(noise_std_ >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  if (!(jitter_ > 0.0)) throw std::invalid_argument("jitter must be > 0");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    validate(classes_[i]);
    if (classes_[i].class_id != static_cast<int>(i))
      throw std::invalid_argument("class table must be indexed by class id");
  }
}

GpEnergyModel GpEnergyModel::distance_only(const TerrainClassParams& shared, double noise_std,
                                           double jitter) {
  validate(shared);
  GpEnergyModel model({}, noise_std, jitter);
  model.shared_ = shared;
  return model;
}

const TerrainClassParams& GpEnergyModel::params_for(int class_id) const {
  if (shared_) return *shared_;
  if (class_id < 0 || class_id >= static_cast<int>(classes_.size()))
    throw std::out_of_range("unknown class id " + std::to_string(class_id));
  return classes_[static_cast<std::size_t>(class_id)];
}

double GpEnergyModel::prior_mean(int class_id) const { return params_for(class_id).prior_mean; }

double GpEnergyModel::prior_variance(int class_id) const {
  const double s = params_for(class_id).signal_std;
  return s * s;
}

double GpEnergyModel::kernel(const KernelSite& a, const KernelSite& b) const {
  const auto& pa = params_for(a.class_id);
  params_for(b.class_id);
  if (!shared_ && a.class_id != b.class_id) return 0.0;
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double d2 = dx * dx + dy * dy;
  return pa.signal_std * pa.signal_std * std::exp(-0.5 * d2 / (pa.length_scale * pa.length_scale));
}

void GpEnergyModel::add_measurements(std::span<const Measurement> batch, const TerrainGrid& grid) {
  if (batch.empty()) throw std::invalid_argument("measurement batch is empty");
  for (const auto& m : batch) {
    if (!grid.shape().contains(m.cell))
      throw std::out_of_range("measurement cell " + std::to_string(m.cell.index) + " out of bounds");
    if (grid.class_of(m.cell) != m.class_id)
      throw std::invalid_argument("measurement at cell " + std::to_string(m.cell.index) +
                                  " has class " + std::to_string(m.class_id) + ", grid says " +
                                  std::to_string(grid.class_of(m.cell)));
    if (!std::isfinite(m.energy))
      throw std::invalid_argument("measurement at cell " + std::to_string(m.cell.index) +
                                  " is not finite");
    params_for(m.class_id);
  }
  for (const auto& m : batch) {
    if (noise_std_ == 0.0) {
      std::erase_if(measurements_, [&](const Measurement& old) { return old.cell == m.cell; });
    }
    measurements_.push_back(m);
  }
}

std::size_t GpEnergyModel::measurement_count(int class_id) const {
  if (shared_) return measurements_.size();
  return static_cast<std::size_t>(std::count_if(measurements_.begin(), measurements_.end(),
                                                [&](const auto& m) { return m.class_id == class_id; }));
}

void GpEnergyModel::solve_into(std::span<const std::size_t> obs, std::span<const std::size_t> queries,
                               std::span<const CellId> query_cells, const TerrainGrid& grid,
                               bool with_variance, Posterior& out) const {
  const auto site_of_cell = [&](CellId c) {
    const auto [x, y] = grid.shape().center(c);
    return KernelSite{x, y, grid.class_of(c)};
  };

  // Unobserved blocks keep the prior exactly.
  if (obs.empty()) {
    for (std::size_t q : queries) {
      const int cls = grid.class_of(query_cells[q]);
      out.mean[q] = prior_mean(cls);
      if (with_variance) out.variance[q] = prior_variance(cls);
    }
    return;
  }

  const auto n = static_cast<Eigen::Index>(obs.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd residual(n);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& mi = measurements_[obs[static_cast<std::size_t>(i)]];
    residual(i) = mi.energy - prior_mean(mi.class_id);
    scale = std::max(scale, prior_variance(mi.class_id));
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& mj = measurements_[obs[static_cast<std::size_t>(j)]];
      gram(i, j) = gram(j, i) = kernel(site_of(mi), site_of(mj));
    }
  }
  gram.diagonal().array() += noise_std_ * noise_std_;
  if (scale == 0.0) scale = 1.0;

  const auto llt = factorize(gram, scale, jitter_);
  const Eigen::VectorXd alpha = llt.solve(residual);

  const auto nq = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd cross(n, nq);
  for (Eigen::Index k = 0; k < nq; ++k) {
    const KernelSite qs = site_of_cell(query_cells[queries[static_cast<std::size_t>(k)]]);
    for (Eigen::Index i = 0; i < n; ++i)
      cross(i, k) = kernel(site_of(measurements_[obs[static_cast<std::size_t>(i)]]), qs);
  }

  const Eigen::VectorXd mean_shift = cross.transpose() * alpha;
  Eigen::VectorXd explained;
  if (with_variance) {
    const Eigen::MatrixXd v = llt.matrixL().solve(cross);
    explained = v.colwise().squaredNorm().transpose();
  }
  for (Eigen::Index k = 0; k < nq; ++k) {
    const std::size_t q = queries[static_cast<std::size_t>(k)];
    const int cls = grid.class_of(query_cells[q]);
    out.mean[q] = prior_mean(cls) + mean_shift(k);
    if (with_variance) {
      const KernelSite qs = site_of_cell(query_cells[q]);
      out.variance[q] = std::max(0.0, kernel(qs, qs) - explained(k));
    }
  }
}

namespace {

Posterior empty_posterior(std::span<const CellId> query_cells, const GridShape& shape,
                          bool with_variance) {
  Posterior out;
  out.queried_cells.assign(query_cells.begin(), query_cells.end());
  for (CellId c : query_cells) {
    if (!shape.contains(c))
      throw std::out_of_range("query cell " + std::to_string(c.index) + " out of bounds");
  }
  out.mean.assign(query_cells.size(), 0.0);
  if (with_variance) out.variance.assign(query_cells.size(), 0.0);
  return out;
}

}  // namespace

Posterior GpEnergyModel::posterior(std::span<const CellId> query_cells, const TerrainGrid& grid,
                                   bool with_variance) const {
  Posterior out = empty_posterior(query_cells, grid.shape(), with_variance);
  std::vector<std::size_t> obs(measurements_.size());
  std::iota(obs.begin(), obs.end(), std::size_t{0});
  std::vector<std::size_t> queries(query_cells.size());
  std::iota(queries.begin(), queries.end(), std::size_t{0});
  for (CellId c : query_cells) params_for(grid.class_of(c));
  solve_into(obs, queries, query_cells, grid, with_variance, out);
  return out;
}

Posterior GpEnergyModel::posterior_by_class_blocks(std::span<const CellId> query_cells,
                                                   const TerrainGrid& grid,
                                                   bool with_variance) const {
  Posterior out = empty_posterior(query_cells, grid.shape(), with_variance);
  const int groups = shared_ ? 1 : static_cast<int>(classes_.size());

  std::vector<std::vector<std::size_t>> obs(static_cast<std::size_t>(groups));
  std::vector<std::vector<std::size_t>> queries(static_cast<std::size_t>(groups));
  for (std::size_t i = 0; i < measurements_.size(); ++i)
    obs[static_cast<std::size_t>(group_of(measurements_[i].class_id))].push_back(i);
  for (std::size_t q = 0; q < query_cells.size(); ++q) {
    const int cls = grid.class_of(query_cells[q]);
    params_for(cls);
    queries[static_cast<std::size_t>(group_of(cls))].push_back(q);
  }
  for (std::size_t g = 0; g < obs.size(); ++g) {
    if (queries[g].empty()) continue;
    solve_into(obs[g], queries[g], query_cells, grid, with_variance, out);
  }
  return out;
}

}  // namespace terragp
