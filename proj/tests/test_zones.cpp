#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slz/error.hpp"
#include "slz/zones.hpp"

using namespace slz;
using namespace slz::zones;

namespace {

geometry::PlaneGrid make_grid(const oracle::Grid& g, int rows, int cols, double cell = 0.1) {
  geometry::PlaneGrid out(0.0, 0.0, cell, rows, cols, density::kFree);
  out.values = g;
  return out;
}

}  // namespace

TEST_CASE("ring shortcut in the oracle") {
  for (int rows : {1, 2, 7}) {
    for (int cols : {1, 3, 8}) {
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const oracle::Grid free(static_cast<std::size_t>(rows) * cols, 255);
          CHECK(oracle::edt_squared(free, rows, cols)[static_cast<std::size_t>(r) * cols + c] ==
                oracle::ring_distance_explicit(r, c, rows, cols));
        }
      }
    }
  }
}

TEST_CASE("distance transform examples") {
  SUBCASE("single occupied cell in the middle of a large grid") {
    oracle::Grid g(41 * 41, 255);
    g[20 * 41 + 20] = 0;
    const auto dm = euclidean_distance_transform(make_grid(g, 41, 41));
    CHECK(dm.squared(20, 20) == 0);
    CHECK(dm.squared(20, 23) == 9);
    CHECK(dm.squared(17, 24) == 25);
    CHECK(dm.meters(17, 24) == doctest::Approx(0.5));
  }
  SUBCASE("fully occupied grid is zero everywhere") {
    const oracle::Grid g(12 * 5, 0);
    const auto dm = euclidean_distance_transform(make_grid(g, 5, 12));
    CHECK(std::all_of(dm.squared_cells.begin(), dm.squared_cells.end(), [](auto v) { return v == 0; }));
  }
  SUBCASE("1x1 free grid sees the ring at distance one") {
    const auto dm = euclidean_distance_transform(make_grid(oracle::Grid(1, 255), 1, 1));
    CHECK(dm.squared(0, 0) == 1);
  }
}

TEST_CASE("distance transform equals brute force on random grids") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 40);
    const int cols = 1 + static_cast<int>(rng() % 40);
    const auto g = oracle::random_grid(rows, cols, std::uniform_real_distribution<double>(0, 0.3)(rng), rng);
    CHECK(euclidean_distance_transform(make_grid(g, rows, cols)).squared_cells == oracle::edt_squared(g, rows, cols));
  }
}

TEST_CASE("free 40x40 grid at 0.25 m") {
  const auto grid = make_grid(oracle::Grid(40 * 40, 255), 40, 40, 0.25);
  const auto p = extract_slz(grid, SlzConfig{10, 1.0}, 7);
  REQUIRE_FALSE(p.empty());
  CHECK(p[0].radius == doctest::Approx(5.0));
  CHECK(p[0].cx == doctest::Approx(19 * 0.25));
  CHECK(p[0].cy == doctest::Approx(19 * 0.25));
  CHECK(p[0].frame_index == 7);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i].radius >= 1.0);
    if (i > 0) CHECK(p[i].radius <= p[i - 1].radius);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(std::hypot(p[i].cx - p[j].cx, p[i].cy - p[j].cy) >= p[i].radius + p[j].radius - 0.25 * 1.5);
    }
  }
}

TEST_CASE("first proposal is the largest empty circle") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 5 + static_cast<int>(rng() % 30);
    const int cols = 5 + static_cast<int>(rng() % 30);
    const auto g = oracle::random_grid(rows, cols, 0.03, rng);
    const auto best = oracle::largest_empty_circles(g, rows, cols);
    if (best.front().squared == 0) continue;
    const auto p = extract_slz(make_grid(g, rows, cols, 1.0), SlzConfig{1, 0.5}, 0);
    REQUIRE(p.size() == 1);
    CHECK(p[0].radius == std::sqrt(static_cast<double>(best.front().squared)));
    // Ties resolve to the lowest (row, col).
    CHECK(p[0].cx == best.front().col);
    CHECK(p[0].cy == best.front().row);
  }
}

TEST_CASE("incremental extraction matches the full-recompute reference") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 70);
    const int cols = 1 + static_cast<int>(rng() % 70);
    const auto g = oracle::random_grid(rows, cols, (trial % 5) * 0.01, rng);
    const auto grid = make_grid(g, rows, cols, 0.1);
    const SlzConfig cfg{1 + static_cast<int>(rng() % 12), 0.1 + (trial % 3) * 0.2};
    CHECK(extract_slz(grid, cfg, trial) == reference::extract_slz(grid, cfg, trial));
  }
}

TEST_CASE("extraction stops below r0 and at n_p") {
  const auto grid = make_grid(oracle::Grid(30 * 30, 255), 30, 30, 0.1);
  CHECK(extract_slz(grid, SlzConfig{10, 1.6}, 0).empty());
  CHECK(extract_slz(grid, SlzConfig{10, 1.5}, 0).size() == 1);
  CHECK(extract_slz(grid, SlzConfig{3, 0.1}, 0).size() == 3);
  CHECK(extract_slz(make_grid(oracle::Grid(100, 0), 10, 10), SlzConfig{3, 0.01}, 0).empty());
  CHECK_THROWS_AS(extract_slz(grid, SlzConfig{0, 1.0}, 0), InvalidArgument);
  CHECK_THROWS_AS(extract_slz(grid, SlzConfig{1, 0.0}, 0), InvalidArgument);
}

TEST_CASE("mark_disk occupies the closed disk") {
  geometry::PlaneGrid g(0, 0, 1.0, 11, 11, density::kFree);
  mark_disk(g, 5, 5, 8);
  for (int r = 0; r < 11; ++r) {
    for (int c = 0; c < 11; ++c) {
      const int d2 = (r - 5) * (r - 5) + (c - 5) * (c - 5);
      CHECK((g.at(r, c) == density::kOccupied) == (d2 <= 8));
    }
  }
}
