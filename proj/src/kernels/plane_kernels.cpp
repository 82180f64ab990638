#include <cmath>

#include "slz/kernels.hpp"

namespace slz::kernels {
namespace {

inline std::uint8_t sample_cell(const density::OccupancyGrid& o, const geometry::PlaneGrid& grid,
                                const geometry::RigidTransform& world_to_camera,
                                const geometry::CameraModel& cam, double plane_height, int row,
                                int col) {
  const Eigen::Vector3d p(grid.center_x(col), grid.center_y(row), plane_height);
  const auto proj = geometry::try_project(p, world_to_camera, cam);
  if (!proj) return density::kOccupied;
  if (!(proj->x >= 0.0 && proj->x < cam.width && proj->y >= 0.0 && proj->y < cam.height)) {
    return density::kOccupied;
  }
  return o.at(static_cast<int>(proj->y), static_cast<int>(proj->x));
}

}  // namespace

namespace serial {

std::vector<std::uint8_t> sample_plane(const density::OccupancyGrid& o,
                                       const geometry::PlaneGrid& grid,
                                       const geometry::RigidTransform& world_to_camera,
                                       const geometry::CameraModel& cam, double plane_height) {
  std::vector<std::uint8_t> out(grid.size());
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      out[static_cast<std::size_t>(r) * grid.cols + c] =
          sample_cell(o, grid, world_to_camera, cam, plane_height, r, c);
    }
  }
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<std::uint8_t> sample_plane(const density::OccupancyGrid& o,
                                       const geometry::PlaneGrid& grid,
                                       const geometry::RigidTransform& world_to_camera,
                                       const geometry::CameraModel& cam, double plane_height) {
  std::vector<std::uint8_t> out(grid.size());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      out[static_cast<std::size_t>(r) * grid.cols + c] =
          sample_cell(o, grid, world_to_camera, cam, plane_height, r, c);
    }
  }
  return out;
}

}  // namespace parallel
}  // namespace slz::kernels
