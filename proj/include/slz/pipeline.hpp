#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slz/density.hpp"
#include "slz/geometry.hpp"
#include "slz/tracking.hpp"
#include "slz/zones.hpp"

namespace slz::world {

struct Region {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(double x, double y) const {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }
};

/// World-to-body pose of one frame, stored exactly as written to pose files.
struct FramePose {
  int frame_id = 0;
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  geometry::RigidTransform world_to_body() const {
    return geometry::RigidTransform::from_quaternion(rotation, translation);
  }
};

/// Downward camera: image x along body x, image y along body -y, optical axis
/// along body -z.
geometry::RigidTransform nadir_mount();

struct PipelineConfig {
  geometry::CameraModel camera;
  geometry::RigidTransform body_to_camera = nadir_mount();
  geometry::HeadPlane plane;
  double cell_size = 0.1;
  double margin = 1.0;
  zones::SlzConfig slz;
  tracking::TrackerConfig tracker;
  density::OracleNoiseConfig noise;
  // Apparent head blob size in metres; the per-frame sigma in pixels is
  // max(noise.sigma_px, head_sigma_m * fx / depth). Zero keeps sigma fixed.
  double head_sigma_m = 0.1;
  // Cells outside this rectangle are treated as occupied.
  std::optional<Region> region;

  void validate() const;
};

/// Per-frame seed for the density renderer.
std::uint64_t frame_seed(std::uint64_t base, int frame_id);

/// Blob sigma in pixels used for a frame observed from this camera pose.
double frame_sigma_px(const PipelineConfig& cfg, const geometry::RigidTransform& world_to_camera);

/// Projects head points (x, y, plane height) and renders the oracle density.
/// Heads behind the camera or further outside the image than the blob
/// support are skipped.
density::DensityMap render_heads(std::span<const Eigen::Vector2d> heads,
                                 const geometry::RigidTransform& world_to_camera,
                                 const PipelineConfig& cfg, std::uint64_t seed);

struct PerceptionFrame {
  int frame_id = 0;
  geometry::RigidTransform world_to_camera;
  density::DensityMap density;
  geometry::PlaneGrid grid;    // head-plane occupancy fed to SLZ extraction
  geometry::PlaneGrid mapped;  // 255 where the cell is imaged and inside the region
  std::vector<zones::SlzProposal> proposals;
  std::vector<tracking::TrackEvent> events;
  double perception_seconds = 0.0;
};

/// density -> occupancy -> head plane -> SLZ proposals -> tracks.
class PerceptionPipeline {
 public:
  explicit PerceptionPipeline(PipelineConfig cfg);

  PerceptionFrame process(const FramePose& pose, std::span<const Eigen::Vector2d> heads);

  /// Same as process but starting from an already computed density map.
  PerceptionFrame process_density(const FramePose& pose, density::DensityMap density);

  const tracking::TrackManager& tracker() const { return tracker_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  PipelineConfig cfg_;
  tracking::TrackManager tracker_;
};

}  // namespace slz::world
