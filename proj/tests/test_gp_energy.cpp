#include <doctest.h>

#include <cmath>

#include "instances.hpp"
#include "oracles.hpp"
#include "terragp/gp_energy.hpp"

using namespace terragp;

namespace {

// Two classes on a 3x2 grid:   0 0 1
//                              0 1 1
TerrainGrid two_class_grid() {
  return TerrainGrid(GridShape{3, 2, 1.0}, 2, {0, 0, 1, 0, 1, 1}, {56.0, 55.0, 27.0, 52.0, 31.0, 29.0});
}

std::vector<TerrainClassParams> two_class_table() {
  return {{0, "a", 50.0, 4.0, 1.5}, {1, "b", 30.0, 2.0, 1.0}};
}

}  // namespace

TEST_CASE("kernel: within class, across classes, symmetry") {
  GpEnergyModel gp(two_class_table());
  CHECK(gp.kernel({0, 0, 0}, {0, 0, 0}) == 16.0);
  CHECK(gp.kernel({0, 0, 0}, {1.5, 0, 0}) == doctest::Approx(16.0 * std::exp(-0.5)).epsilon(1e-15));
  CHECK(gp.kernel({0, 0, 0}, {0, 0, 1}) == 0.0);
  CHECK(gp.kernel({1, 2, 1}, {3, 1, 1}) == gp.kernel({3, 1, 1}, {1, 2, 1}));
  CHECK_THROWS_AS(gp.kernel({0, 0, 0}, {0, 0, 5}), std::out_of_range);
}

TEST_CASE("distance-only kernel ignores class") {
  const auto gp = GpEnergyModel::distance_only({0, "shared", 40.0, 3.0, 2.0});
  CHECK_FALSE(gp.class_masked());
  CHECK(gp.kernel({0, 0, 0}, {0, 0, 1}) == 9.0);
  CHECK(gp.prior_mean(0) == 40.0);
  CHECK(gp.prior_mean(1) == 40.0);
}

TEST_CASE("posterior matches frozen reference values") {
  // Reference numbers produced by the dense oracle and checked by hand:
  // 50 + 16 exp(-1/4.5) * 6 / 16 and 16 - (16 exp(-1/4.5))^2 / 16.
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  const std::vector<Measurement> batch{make_measurement(grid, CellId{0}, 56.0),
                                       make_measurement(grid, CellId{5}, 27.0)};
  gp.add_measurements(batch, grid);
  const auto post = gp.posterior(all_cells(grid.shape()), grid);
  const std::vector<double> mean{56.0, 54.804424417500847, 28.1804080208621, 54.804424417500847,
                                 28.1804080208621, 27.0};
  const std::vector<double> var{0.0, 5.7411137851207261, 2.5284822353142307, 5.7411137851207261,
                                2.5284822353142307, 0.0};
  for (std::size_t i = 0; i < mean.size(); ++i) {
    CHECK(std::abs(post.mean[i] - mean[i]) <= 1e-9);
    CHECK(std::abs(post.variance[i] - var[i]) <= 1e-9);
  }
}

TEST_CASE("no measurements gives the prior") {
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  const auto post = gp.posterior(all_cells(grid.shape()), grid);
  for (std::int32_t i = 0; i < grid.cell_count(); ++i) {
    const int cls = grid.class_of(CellId{i});
    CHECK(post.mean[static_cast<std::size_t>(i)] == gp.prior_mean(cls));
    CHECK(post.variance[static_cast<std::size_t>(i)] == gp.prior_variance(cls));
  }
}

TEST_CASE("measurements do not leak into other classes") {
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  const std::vector<Measurement> batch{make_measurement(grid, CellId{0}, 90.0),
                                       make_measurement(grid, CellId{1}, 91.0)};
  gp.add_measurements(batch, grid);
  const auto post = gp.posterior(all_cells(grid.shape()), grid);
  for (std::int32_t i : {2, 4, 5}) {
    CHECK(post.mean[static_cast<std::size_t>(i)] == 30.0);
    CHECK(post.variance[static_cast<std::size_t>(i)] == 4.0);
  }
  CHECK(gp.class_measured(0));
  CHECK_FALSE(gp.class_measured(1));
}

TEST_CASE("single-cell grid") {
  const TerrainGrid grid(GridShape{1, 1, 1.0}, 1, {0}, {10.0});
  GpEnergyModel gp({{0, "a", 8.0, 1.0, 1.0}});
  const std::vector<Measurement> batch{make_measurement(grid, CellId{0}, 12.0)};
  gp.add_measurements(batch, grid);
  const auto post = gp.posterior(all_cells(grid.shape()), grid);
  CHECK(post.mean[0] == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(post.variance[0] == doctest::Approx(0.0));
}

TEST_CASE("invalid batches are rejected") {
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  CHECK_THROWS_AS(gp.add_measurements(std::vector<Measurement>{}, grid), std::invalid_argument);
  Measurement wrong = make_measurement(grid, CellId{0}, 50.0);
  wrong.class_id = 1;
  CHECK_THROWS_AS(gp.add_measurements(std::vector<Measurement>{wrong}, grid), std::invalid_argument);
  CHECK_THROWS_AS(GpEnergyModel({{1, "x", 1.0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(GpEnergyModel(two_class_table(), -1.0), std::invalid_argument);
}

TEST_CASE("repeated noiseless measurement replaces the earlier one") {
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  gp.add_measurements(std::vector<Measurement>{make_measurement(grid, CellId{0}, 50.0)}, grid);
  gp.add_measurements(std::vector<Measurement>{make_measurement(grid, CellId{0}, 58.0)}, grid);
  CHECK(gp.measurement_count(0) == 1);
  const auto post = gp.posterior(std::vector<CellId>{CellId{0}}, grid);
  CHECK(post.mean[0] == doctest::Approx(58.0).epsilon(1e-12));
}

TEST_CASE("coincident measurements trigger jitter instead of failing") {
  const TerrainGrid grid(GridShape{2, 1, 1.0}, 1, {0, 0}, {10.0, 10.0});
  // Enormous length scale: the two columns of the Gram matrix are identical
  // to machine precision.
  GpEnergyModel gp({{0, "a", 10.0, 1.0, 1e9}});
  const std::vector<Measurement> batch{make_measurement(grid, CellId{0}, 11.0),
                                       make_measurement(grid, CellId{1}, 11.0)};
  gp.add_measurements(batch, grid);
  const auto post = gp.posterior(all_cells(grid.shape()), grid);
  for (double m : post.mean) CHECK(m == doctest::Approx(11.0).epsilon(1e-6));
  for (double v : post.variance) CHECK(v >= 0.0);
}

TEST_CASE("posterior agrees with the dense oracle on random instances") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const auto inst = testkit::random_gp_instance(seed);
    const auto gp = inst.model();
    const auto cells = all_cells(inst.grid.shape());
    const auto got = gp.posterior(cells, inst.grid);
    const auto want = oracle::dense_posterior(inst.dense(), inst.obs());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(std::abs(got.mean[i] - want.mean[i]) <= 1e-9);
      CHECK(std::abs(got.variance[i] - want.variance[i]) <= 1e-9);
    }
  }
}

TEST_CASE("per-class block solve equals the joint solve") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    CAPTURE(seed);
    const auto inst = testkit::random_gp_instance(seed);
    const auto gp = inst.model();
    const auto cells = all_cells(inst.grid.shape());
    const auto joint = gp.posterior(cells, inst.grid);
    const auto blocks = gp.posterior_by_class_blocks(cells, inst.grid);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(std::abs(joint.mean[i] - blocks.mean[i]) <= 1e-9);
      CHECK(std::abs(joint.variance[i] - blocks.variance[i]) <= 1e-9);
    }
  }
}

TEST_CASE("noiseless interpolation and shrinking variance") {
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    CAPTURE(seed);
    auto inst = testkit::random_gp_instance(seed);
    inst.noise_std = 0.0;
    GpEnergyModel gp(inst.classes);
    const auto cells = all_cells(inst.grid.shape());
    auto previous = gp.posterior(cells, inst.grid);
    for (const auto& m : inst.measurements) {
      gp.add_measurements(std::vector<Measurement>{m}, inst.grid);
      const auto post = gp.posterior(cells, inst.grid);
      CHECK(std::abs(post.mean[static_cast<std::size_t>(m.cell.index)] - m.energy) <= 1e-9);
      for (std::size_t i = 0; i < cells.size(); ++i) CHECK(post.variance[i] <= previous.variance[i] + 1e-9);
      previous = post;
    }
  }
}

TEST_CASE("with_variance=false skips variance") {
  const TerrainGrid grid = two_class_grid();
  GpEnergyModel gp(two_class_table());
  const auto post = gp.posterior(all_cells(grid.shape()), grid, false);
  CHECK(post.variance.empty());
  CHECK(post.mean.size() == 6);
}
