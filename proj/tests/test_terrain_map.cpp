#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "terragp/rng.hpp"
#include "terragp/terrain_map.hpp"

using namespace terragp;

namespace {

Environment small_env() {
  GridShape shape{3, 2, 1.0};
  TerrainGrid grid(shape, 2, {0, 0, 1, 0, 1, 1}, {40.0, 41.0, 70.0, 42.5, 71.0, 69.0});
  return Environment{grid, {{0, "dirt", 40.0, 2.0, 3.0}, {1, "grass", 70.0, 3.0, 4.0}}};
}

}  // namespace

TEST_CASE("cell indexing is row-major with centers at half cells") {
  GridShape shape{4, 3, 2.0};
  CHECK(shape.cell_count() == 12);
  const CellId c = shape.cell_at(2, 1);
  CHECK(c.index == 9);
  CHECK(shape.row_of(c) == 2);
  CHECK(shape.col_of(c) == 1);
  const auto [x, y] = shape.center(c);
  CHECK(x == 3.0);
  CHECK(y == 5.0);
}

TEST_CASE("neighbors at corners, edges and interior") {
  GridShape shape{3, 3, 1.0};
  CHECK(neighbors(shape, shape.cell_at(0, 0), Connectivity::Four).size() == 2);
  CHECK(neighbors(shape, shape.cell_at(0, 0), Connectivity::Eight).size() == 3);
  CHECK(neighbors(shape, shape.cell_at(0, 1), Connectivity::Eight).size() == 5);
  const auto center = neighbors(shape, shape.cell_at(1, 1), Connectivity::Eight);
  REQUIRE(center.size() == 8);
  for (std::size_t i = 1; i < center.size(); ++i) CHECK(center[i - 1].cell < center[i].cell);
  CHECK(center[0].distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(center[1].distance == 1.0);
}

TEST_CASE("single-cell grid has no neighbors") {
  GridShape shape{1, 1, 1.0};
  CHECK(neighbors(shape, CellId{0}, Connectivity::Eight).empty());
}

TEST_CASE("adjacency is symmetric and agrees with neighbors") {
  GridShape shape{5, 4, 0.5};
  for (const auto conn : {Connectivity::Four, Connectivity::Eight}) {
    for (std::int32_t a = 0; a < shape.cell_count(); ++a) {
      for (const auto& nb : neighbors(shape, CellId{a}, conn)) {
        const auto back = neighbors(shape, nb.cell, conn);
        const bool found = std::any_of(back.begin(), back.end(), [&](const Neighbor& n) {
          return n.cell.index == a && n.distance == nb.distance;
        });
        CHECK(found);
        CHECK(adjacency_distance(shape, CellId{a}, nb.cell, conn) == nb.distance);
      }
    }
  }
  CHECK_FALSE(adjacency_distance(shape, CellId{0}, CellId{0}, Connectivity::Eight));
  CHECK_FALSE(adjacency_distance(shape, shape.cell_at(0, 0), shape.cell_at(1, 1), Connectivity::Four));
  CHECK_FALSE(adjacency_distance(shape, shape.cell_at(0, 0), shape.cell_at(0, 2), Connectivity::Eight));
}

TEST_CASE("gravity correction") {
  CHECK(gravity_correction(98.0, 0.0, 2.0) == 0.0);
  CHECK(std::abs(gravity_correction(98.0, std::numbers::pi / 6, 2.0) - 98.0) <= 1e-12);
  Xoshiro256 rng(11);
  for (int i = 0; i < 100; ++i) {
    const double w = 200.0 * rng.uniform();
    const double theta = (rng.uniform() - 0.5) * std::numbers::pi;
    const double l = 3.0 * rng.uniform();
    CHECK(std::abs(gravity_correction(w, -theta, l) + gravity_correction(w, theta, l)) <= 1e-12);
  }
}

TEST_CASE("grid constructor rejects broken invariants") {
  GridShape shape{2, 1, 1.0};
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0}, {1.0, 1.0}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0, 0}, {1.0}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0, 1}, {1.0, 1.0}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0, 0}, {1.0, 0.0}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0, 0}, {1.0, NAN}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(shape, 1, {0, 0}, {1.0, 1.0}, std::vector<double>{0.0}), EnvironmentError);
  CHECK_THROWS_AS(TerrainGrid(GridShape{0, 1, 1.0}, 1, {}, {}), EnvironmentError);
  try {
    TerrainGrid(shape, 1, {0, 0}, {1.0, -2.0});
  } catch (const EnvironmentError& e) {
    CHECK(std::string(e.what()).find("cell 1") != std::string::npos);
  }
}

TEST_CASE("class parameters are validated") {
  CHECK_NOTHROW(validate(TerrainClassParams{0, "a", 10.0, 0.0, 1.0}));
  CHECK_THROWS_AS(validate(TerrainClassParams{0, "a", 10.0, -1.0, 1.0}), EnvironmentError);
  CHECK_THROWS_AS(validate(TerrainClassParams{0, "a", 10.0, 1.0, 0.0}), EnvironmentError);
  CHECK_THROWS_AS(validate(TerrainClassParams{0, "a", 0.0, 1.0, 1.0}), EnvironmentError);
}

TEST_CASE("environment JSON round trip") {
  const Environment env = small_env();
  const std::string text = serialize_environment(env);
  const Environment back = parse_environment(text);
  CHECK(back == env);
  CHECK(serialize_environment(back) == text);

  const auto path = std::filesystem::temp_directory_path() / "terragp_roundtrip_env.json";
  save_environment(env, path);
  CHECK(load_environment(path) == env);
  std::filesystem::remove(path);
}

TEST_CASE("environment with slope round trips") {
  GridShape shape{2, 1, 1.0};
  Environment env{TerrainGrid(shape, 1, {0, 0}, {5.0, 6.0}, std::vector<double>{0.1, -0.2}),
                  {{0, "ramp", 5.0, 1.0, 1.0}}};
  const Environment back = parse_environment(serialize_environment(env));
  REQUIRE(back.grid.has_slope());
  CHECK(back.grid.slope(CellId{1}) == -0.2);
}

TEST_CASE("malformed environment documents are rejected") {
  CHECK_THROWS_AS(parse_environment("not json"), EnvironmentError);
  CHECK_THROWS_AS(parse_environment("[]"), EnvironmentError);
  CHECK_THROWS_AS(parse_environment(R"({"width":1})"), EnvironmentError);
  // Class ids must be exactly 0..K-1.
  const std::string gap = R"({"width":1,"height":1,"cell_size":1,
    "classes":[{"id":1,"name":"x","prior_mean":1,"sigma_f":1,"sigma_d":1}],
    "class_grid":[1],"energy_grid":[1]})";
  CHECK_THROWS_AS(parse_environment(gap), EnvironmentError);
  const std::string bad_cell = R"({"width":2,"height":1,"cell_size":1,
    "classes":[{"id":0,"name":"x","prior_mean":1,"sigma_f":1,"sigma_d":1}],
    "class_grid":[0,0],"energy_grid":[1,-1]})";
  CHECK_THROWS_AS(parse_environment(bad_cell), EnvironmentError);
  CHECK_THROWS_AS(load_environment("/nonexistent/terragp.json"), EnvironmentError);
}

TEST_CASE("connectivity parsing") {
  CHECK(connectivity_from_int(4) == Connectivity::Four);
  CHECK(connectivity_from_int(8) == Connectivity::Eight);
  CHECK_THROWS_AS(connectivity_from_int(6), std::invalid_argument);
}
