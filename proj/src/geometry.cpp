#include "slz/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "slz/error.hpp"
#include "slz/kernels.hpp"

namespace slz::geometry {

RigidTransform::RigidTransform()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const double ortho = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (!(ortho <= kRotationTolerance)) {
    throw InvalidArgument("rotation is not orthonormal (deviation " + std::to_string(ortho) + ")");
  }
  if (!(std::abs(rotation.determinant() - 1.0) <= kRotationTolerance)) {
    throw InvalidArgument("rotation determinant is not +1");
  }
  if (!translation.allFinite()) throw InvalidArgument("translation is not finite");
}

RigidTransform RigidTransform::from_quaternion(const Eigen::Quaterniond& q,
                                               const Eigen::Vector3d& translation) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
    throw InvalidArgument("quaternion is not unit length");
  }
  return RigidTransform(q.normalized().toRotationMatrix(), translation);
}

RigidTransform RigidTransform::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return RigidTransform(Unchecked{}, rt, -(rt * translation_));
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return RigidTransform(RigidTransform::Unchecked{}, a.rotation_ * b.rotation_,
                        a.rotation_ * b.translation_ + a.translation_);
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("focal lengths must be positive");
  if (width <= 0 || height <= 0) throw InvalidArgument("image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
    throw InvalidArgument("principal point outside the image");
  }
}

Eigen::Matrix3d CameraModel::intrinsics() const {
  Eigen::Matrix3d k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

PlaneGrid::PlaneGrid(double ox, double oy, double cell, int r, int c, std::uint8_t fill)
    : origin_x(ox), origin_y(oy), cell_size(cell), rows(r), cols(c) {
  validate();
  values.assign(static_cast<std::size_t>(r) * c, fill);
}

void PlaneGrid::validate() const {
  if (!(cell_size > 0.0)) throw InvalidArgument("cell_size must be positive");
  if (rows <= 0 || cols <= 0) throw InvalidArgument("grid must have at least one cell");
}

std::optional<PixelProjection> try_project(const Eigen::Vector3d& p_world,
                                           const RigidTransform& world_to_camera,
                                           const CameraModel& cam) noexcept {
  const Eigen::Vector3d pc = world_to_camera.apply(p_world);
  if (!(pc.z() > 0.0)) return std::nullopt;
  return PixelProjection{cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy,
                         pc.z()};
}

PixelProjection project_plane_point(const Eigen::Vector3d& p_world,
                                    const RigidTransform& world_to_camera,
                                    const CameraModel& cam) {
  auto p = try_project(p_world, world_to_camera, cam);
  if (!p) throw BehindCamera();
  return *p;
}

Eigen::Vector3d camera_center(const RigidTransform& world_to_camera) {
  return -(world_to_camera.rotation().transpose() * world_to_camera.translation());
}

namespace {

// Direction of the viewing ray through (u, v), world frame, unnormalized.
Eigen::Vector3d ray_direction(double u, double v, const RigidTransform& world_to_camera,
                              const CameraModel& cam) {
  const Eigen::Vector3d dc((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
  return world_to_camera.rotation().transpose() * dc;
}

}  // namespace

std::optional<Eigen::Vector2d> back_project_pixel(double u, double v,
                                                  const RigidTransform& world_to_camera,
                                                  const CameraModel& cam, const HeadPlane& plane) {
  const Eigen::Vector3d c = camera_center(world_to_camera);
  const Eigen::Vector3d d = ray_direction(u, v, world_to_camera, cam);
  if (std::abs(d.z()) < 1e-12) return std::nullopt;
  const double s = (plane.height - c.z()) / d.z();
  if (!(s > 0.0)) return std::nullopt;
  return Eigen::Vector2d(c.x() + s * d.x(), c.y() + s * d.y());
}

Footprint image_footprint(const CameraModel& cam, const RigidTransform& world_to_camera,
                          const HeadPlane& plane) {
  cam.validate();
  const Eigen::Vector3d c = camera_center(world_to_camera);
  if (!(c.z() > plane.height)) throw DegenerateView("camera is not above the head plane");

  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(cam.width, 0.0),
      Eigen::Vector2d(0.0, cam.height), Eigen::Vector2d(cam.width, cam.height)};
  Footprint f{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& corner : corners) {
    const Eigen::Vector3d d = ray_direction(corner.x(), corner.y(), world_to_camera, cam);
    if (!(d.z() < -1e-9 * d.norm())) {
      throw DegenerateView("an image corner ray does not reach the head plane");
    }
    const double s = (plane.height - c.z()) / d.z();
    const double x = c.x() + s * d.x();
    const double y = c.y() + s * d.y();
    f.min_x = std::min(f.min_x, x);
    f.max_x = std::max(f.max_x, x);
    f.min_y = std::min(f.min_y, y);
    f.max_y = std::max(f.max_y, y);
  }
  return f;
}

PlaneGrid grid_footprint(const CameraModel& cam, const RigidTransform& world_to_camera,
                         const HeadPlane& plane, double cell_size, double margin) {
  if (!(cell_size > 0.0)) throw InvalidArgument("cell_size must be positive");
  if (!(margin >= 0.0)) throw InvalidArgument("margin must be non-negative");
  const Footprint f = image_footprint(cam, world_to_camera, plane);

  auto cells_for = [cell_size](double extent) {
    return std::max(1, static_cast<int>(std::ceil(extent / cell_size - 1e-9)));
  };
  const int cols = cells_for(f.max_x - f.min_x + 2.0 * margin);
  const int rows = cells_for(f.max_y - f.min_y + 2.0 * margin);
  const double mid_x = 0.5 * (f.min_x + f.max_x);
  const double mid_y = 0.5 * (f.min_y + f.max_y);
  return PlaneGrid(mid_x - 0.5 * (cols - 1) * cell_size, mid_y - 0.5 * (rows - 1) * cell_size,
                   cell_size, rows, cols, density::kFree);
}

PlaneGrid sample_occupancy_to_plane(const density::OccupancyGrid& o, const PlaneGrid& grid,
                                    const RigidTransform& world_to_camera, const CameraModel& cam,
                                    const HeadPlane& plane) {
  grid.validate();
  if (o.width != cam.width || o.height != cam.height) {
    throw InvalidArgument("occupancy map size does not match the camera");
  }
  PlaneGrid out = grid;
  out.values = kernels::parallel::sample_plane(o, grid, world_to_camera, cam, plane.height);
  return out;
}

PlaneGrid visibility_mask(const PlaneGrid& grid, const RigidTransform& world_to_camera,
                          const CameraModel& cam, const HeadPlane& plane) {
  const density::OccupancyGrid all_free(cam.width, cam.height, density::kFree);
  return sample_occupancy_to_plane(all_free, grid, world_to_camera, cam, plane);
}

void mask_outside_region(PlaneGrid& grid, double min_x, double min_y, double max_x, double max_y) {
  for (int r = 0; r < grid.rows; ++r) {
    const double y = grid.center_y(r);
    const bool row_out = y < min_y || y > max_y;
    for (int c = 0; c < grid.cols; ++c) {
      const double x = grid.center_x(c);
      if (row_out || x < min_x || x > max_x) grid.at(r, c) = density::kOccupied;
    }
  }
}

}  // namespace slz::geometry
