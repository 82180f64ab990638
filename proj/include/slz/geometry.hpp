#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <vector>

#include "slz/density.hpp"

namespace slz::geometry {

inline constexpr double kRotationTolerance = 1e-9;

/// Proper rigid motion p -> R p + t. Construction rejects rotations that are
/// not orthonormal with determinant +1.
class RigidTransform {
 public:
  RigidTransform();
  RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  /// Quaternion must have unit norm within 1e-6; it is normalized before use.
  static RigidTransform from_quaternion(const Eigen::Quaterniond& q,
                                        const Eigen::Vector3d& translation);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }
  RigidTransform inverse() const;

  friend RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Eigen::Matrix3d& r, const Eigen::Vector3d& t)
      : rotation_(r), translation_(t) {}

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

/// Pinhole intrinsics. Pixel (r, c) covers [c, c+1) x [r, r+1) so the image
/// spans [0, width) x [0, height).
struct CameraModel {
  double fx = 80.0;
  double fy = 80.0;
  double cx = 128.0;
  double cy = 128.0;
  int width = 256;
  int height = 256;

  void validate() const;
  Eigen::Matrix3d intrinsics() const;
};

struct HeadPlane {
  double height = 1.7;
};

/// Metric raster on the head plane. Cell (row, col) is centred at
/// (origin_x + col * cell_size, origin_y + row * cell_size).
struct PlaneGrid {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 0.1;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> values;

  PlaneGrid() = default;
  PlaneGrid(double ox, double oy, double cell, int r, int c, std::uint8_t fill);

  void validate() const;

  double center_x(int col) const { return origin_x + col * cell_size; }
  double center_y(int row) const { return origin_y + row * cell_size; }

  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * cols + col];
  }
  std::uint8_t& at(int row, int col) { return values[static_cast<std::size_t>(row) * cols + col]; }

  std::size_t size() const { return values.size(); }
};

struct PixelProjection {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;  // the scale factor: camera-frame z of the point
};

/// K * [R|t] * p with the homogeneous scale returned as depth. Throws
/// BehindCamera when depth <= 0.
PixelProjection project_plane_point(const Eigen::Vector3d& p_world,
                                    const RigidTransform& world_to_camera,
                                    const CameraModel& cam);

std::optional<PixelProjection> try_project(const Eigen::Vector3d& p_world,
                                           const RigidTransform& world_to_camera,
                                           const CameraModel& cam) noexcept;

/// Intersects the viewing ray through image point (u, v) with the head plane.
/// Empty when the ray does not reach the plane in front of the camera.
std::optional<Eigen::Vector2d> back_project_pixel(double u, double v,
                                                  const RigidTransform& world_to_camera,
                                                  const CameraModel& cam, const HeadPlane& plane);

Eigen::Vector3d camera_center(const RigidTransform& world_to_camera);

/// Axis-aligned bounding box of the image corners back-projected onto the plane.
struct Footprint {
  double min_x, min_y, max_x, max_y;
};

Footprint image_footprint(const CameraModel& cam, const RigidTransform& world_to_camera,
                          const HeadPlane& plane);

/// All-free grid covering the image footprint expanded by margin, centred on the
/// footprint. Throws DegenerateView when a corner ray misses the plane.
PlaneGrid grid_footprint(const CameraModel& cam, const RigidTransform& world_to_camera,
                         const HeadPlane& plane, double cell_size, double margin);

/// Nearest-pixel lookup of every cell centre into o. Cells that land outside
/// the image or behind the camera are occupied.
PlaneGrid sample_occupancy_to_plane(const density::OccupancyGrid& o, const PlaneGrid& grid,
                                    const RigidTransform& world_to_camera, const CameraModel& cam,
                                    const HeadPlane& plane);

/// 255 where the cell centre is imaged, 0 otherwise.
PlaneGrid visibility_mask(const PlaneGrid& grid, const RigidTransform& world_to_camera,
                          const CameraModel& cam, const HeadPlane& plane);

/// Marks every cell whose centre lies outside [min_x, max_x] x [min_y, max_y] occupied.
void mask_outside_region(PlaneGrid& grid, double min_x, double min_y, double max_x, double max_y);

}  // namespace slz::geometry
