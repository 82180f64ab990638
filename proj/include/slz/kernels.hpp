#pragma once

// Data-parallel inner loops of the perception pipeline. Each kernel has a
// straightforward serial reference and an OpenMP version; both produce
// bit-identical output and the tests hold them to that. The module-level
// operations call the parallel flavour.

#include <cstdint>
#include <span>
#include <vector>

#include "slz/density.hpp"
#include "slz/geometry.hpp"

namespace slz::kernels {

struct Blob {
  double x;
  double y;
};

/// Squared-cell distance value type for the distance transform.
using SqDist = std::int64_t;

namespace serial {

/// Blob-major splatting of truncated unit Gaussians.
std::vector<float> render_blobs(std::span<const Blob> blobs, double sigma, int width, int height);

/// Binary dilation with a (2*radius+1)^2 box, direct window scan.
std::vector<std::uint8_t> dilate_box(std::span<const std::uint8_t> mask, int width, int height,
                                     int radius);

std::vector<std::uint8_t> sample_plane(const density::OccupancyGrid& o,
                                       const geometry::PlaneGrid& grid,
                                       const geometry::RigidTransform& world_to_camera,
                                       const geometry::CameraModel& cam, double plane_height);

/// Exact squared Euclidean distance (in cells) from every cell to the nearest
/// occupied cell, where a ring of virtual occupied cells surrounds the grid.
std::vector<SqDist> edt_squared(std::span<const std::uint8_t> values, int rows, int cols);

}  // namespace serial

namespace parallel {

/// Row-major evaluation; per pixel the blobs are summed in index order, the
/// same order the serial splat uses.
std::vector<float> render_blobs(std::span<const Blob> blobs, double sigma, int width, int height);

/// Separable box dilation (row max then column max).
std::vector<std::uint8_t> dilate_box(std::span<const std::uint8_t> mask, int width, int height,
                                     int radius);

std::vector<std::uint8_t> sample_plane(const density::OccupancyGrid& o,
                                       const geometry::PlaneGrid& grid,
                                       const geometry::RigidTransform& world_to_camera,
                                       const geometry::CameraModel& cam, double plane_height);

std::vector<SqDist> edt_squared(std::span<const std::uint8_t> values, int rows, int cols);

/// Squared distances from cells inside the window [row0, row0+rows) x
/// [col0, col0+cols) of a grid with full width grid_cols to the occupied
/// cells inside the same window. No boundary ring. Cells with no occupied
/// cell in the window get kUnreachable.
std::vector<SqDist> edt_squared_window(std::span<const std::uint8_t> values, int grid_cols,
                                       int row0, int col0, int rows, int cols);

}  // namespace parallel

inline constexpr SqDist kUnreachable = INT64_MAX / 4;

}  // namespace slz::kernels
